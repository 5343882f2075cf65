"""Cayley-graph balls of groupoids, growth gamma, and complexity delta.

Two groupoid models are supported: the groupoid of a subshift (units are
2r-letter windows, fibers are copies of Z) and the groupoid of germs of
a self-similar group (units are eventually periodic boundary points,
germ equality decided by the automaton machinery).  Complexity counts
isomorphism classes of rooted edge-labeled balls, via a canonical code:
color refinement plus individualization with backtracking, which is
exact and entirely adequate at ball sizes in the low hundreds.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .selfsimilar import EventuallyPeriodicPoint, SelfSimilarGroup
from .subshift import Language


@dataclass
class LabeledBall:
    """Rooted directed edge-labeled multigraph; vertex 0 is the root."""

    num_vertices: int
    edges: list[tuple[int, int, int]]  # (from, to, label id), no duplicates
    radius: int
    labels: tuple[str, ...]  # label id -> bisection name

    def __post_init__(self):
        if len(set(self.edges)) != len(self.edges):
            raise ValueError("duplicate labeled edge")
        for a, b, l in self.edges:
            if not (0 <= a < self.num_vertices and 0 <= b < self.num_vertices):
                raise ValueError("edge endpoint out of range")
            if not (0 <= l < len(self.labels)):
                raise ValueError("edge label out of range")


@dataclass(frozen=True)
class WindowUnit:
    """A subshift unit presented by a finite window around the origin.

    ``word[origin + k]`` is the letter at position k; a radius-r ball
    needs positions -r .. r-1, i.e. ``origin >= r`` and
    ``len(word) - origin >= r``.
    """

    word: bytes
    origin: int

    def letter(self, k: int) -> int:
        i = self.origin + k
        if not (0 <= i < len(self.word)):
            raise ValueError(f"window does not cover position {k}")
        return self.word[i]

    def max_radius(self) -> int:
        return min(self.origin, len(self.word) - self.origin)


class SubshiftModel:
    """Groupoid of a subshift with the generator cover {S_x : x in X}."""

    def __init__(self, lang: Language):
        self.lang = lang
        self.labels = tuple(f"S_{x}" for x in range(lang.alphabet_size))

    def ball(self, unit: WindowUnit, r: int) -> LabeledBall:
        if r < 0:
            raise ValueError("radius must be >= 0")
        if r > unit.max_radius():
            raise ValueError(f"window too short for radius {r}")
        # The fiber is {s^k}, free, so the ball is a path: vertex j holds
        # the germ s^k with k = _vertex_k(j), and s^k -> s^(k+1) is an
        # edge labeled by the letter at position k.
        index = {k: j for j, k in enumerate(_path_vertex_order(r))}
        edges = [
            (index[k], index[k + 1], unit.letter(k)) for k in range(-r, r)
        ]
        return LabeledBall(2 * r + 1, edges, r, self.labels)

    def class_complete_units(self, r: int) -> list[WindowUnit]:
        """One unit per length-2r factor: every radius-r ball class appears."""
        if 2 * r > self.lang.n_max:
            raise ValueError(f"language too shallow for radius {r}")
        return [WindowUnit(f, r) for f in self.lang.factors[2 * r]]


def _path_vertex_order(r: int) -> list[int]:
    out = [0]
    for j in range(1, r + 1):
        out.extend((-j, j))
    return out


class GermGroupoidModel:
    """Groupoid of germs of a self-similar group action on the boundary."""

    def __init__(self, group: SelfSimilarGroup):
        self.group = group
        self.labels = tuple(group.gen_names)

    def _same_germ(self, g: int, h: int, point: EventuallyPeriodicPoint) -> bool:
        inv = self.group.inverse(h)
        return self.group.germ_is_unit(self.group.multiply(inv, g), point)

    def ball(self, unit: EventuallyPeriodicPoint, r: int) -> LabeledBall:
        if r < 0:
            raise ValueError("radius must be >= 0")
        grp = self.group
        gens = [grp.gens[n] for n in grp.gen_names]
        steps = gens + [grp.inverse(s) for s in gens]
        reps = [grp.identity]  # germ representatives, vertex i = reps[i]

        def find(g: int):
            for i, h in enumerate(reps):
                if self._same_germ(g, h, unit):
                    return i
            return None

        frontier = [grp.identity]
        for _ in range(r):
            nxt = []
            for g in frontier:
                for s in steps:
                    p = grp.multiply(s, g)
                    if find(p) is None:
                        reps.append(p)
                        nxt.append(p)
            frontier = nxt
        edges = set()
        for i, g in enumerate(reps):
            for lid, s in enumerate(gens):
                j = find(grp.multiply(s, g))
                if j is not None:
                    edges.add((i, j, lid))  # g -> s.g, labeled by s
        return LabeledBall(len(reps), sorted(edges), r, self.labels)

    def periodic_units(self, pre_cap: int, period_cap: int) -> list[EventuallyPeriodicPoint]:
        """All eventually periodic points with bounded preperiod and period."""
        d = self.group.d
        units = []
        for plen in range(1, period_cap + 1):
            for per in _words(d, plen):
                for klen in range(pre_cap + 1):
                    for pre in _words(d, klen):
                        units.append(EventuallyPeriodicPoint(pre, per))
        return units


def _words(d: int, n: int) -> list[tuple[int, ...]]:
    out = [()]
    for _ in range(n):
        out = [w + (x,) for w in out for x in range(d)]
    return out


def gamma(model, unit, r: int) -> int:
    """gamma_S(x, r) = number of vertices in the radius-r ball at x."""
    return model.ball(unit, r).num_vertices


# -- canonical form of rooted labeled balls ---------------------------------


def canonical_code(ball: LabeledBall) -> bytes:
    """Canonical form under rooted labeled-digraph isomorphism.

    Colors start from distance-to-root, are refined by in/out label-color
    multisets to a fixpoint, and remaining ties are broken by
    individualization with full backtracking, taking the minimum code.
    """
    m = ball.num_vertices
    out_adj = [[] for _ in range(m)]
    in_adj = [[] for _ in range(m)]
    und = [set() for _ in range(m)]
    for a, b, l in ball.edges:
        out_adj[a].append((l, b))
        in_adj[b].append((l, a))
        und[a].add(b)
        und[b].add(a)
    dist = [-1] * m
    dist[0] = 0
    queue = [0]
    qi = 0
    while qi < len(queue):
        v = queue[qi]
        qi += 1
        for w in und[v]:
            if dist[w] < 0:
                dist[w] = dist[v] + 1
                queue.append(w)

    def refine(colors: list[int]) -> list[int]:
        while True:
            sigs = []
            for v in range(m):
                sigs.append(
                    (
                        colors[v],
                        tuple(sorted((l, colors[w]) for l, w in out_adj[v])),
                        tuple(sorted((l, colors[w]) for l, w in in_adj[v])),
                    )
                )
            ranking = {s: i for i, s in enumerate(sorted(set(sigs)))}
            new = [ranking[s] for s in sigs]
            if new == colors:
                return colors
            colors = new

    def encode(colors: list[int]) -> bytes:
        order = sorted(range(m), key=lambda v: colors[v])
        rank = {v: i for i, v in enumerate(order)}
        edges = sorted((rank[a], rank[b], l) for a, b, l in ball.edges)
        return repr((m, rank[0], tuple(dist[v] for v in order), tuple(edges))).encode()

    def search(colors: list[int]) -> bytes:
        colors = refine(colors)
        classes: dict[int, list[int]] = {}
        for v in range(m):
            classes.setdefault(colors[v], []).append(v)
        ambiguous = sorted((c for c, vs in classes.items() if len(vs) > 1))
        if not ambiguous:
            return encode(colors)
        target = classes[ambiguous[0]]
        best = None
        for v in target:
            branched = list(colors)
            branched[v] = m + max(colors) + 1  # fresh color individualizes v
            code = search(branched)
            if best is None or code < best:
                best = code
        return best

    # Root gets a distinct parity bit so root-preservation is enforced.
    initial = [dist[v] * 2 + (1 if v == 0 else 0) for v in range(m)]
    return search(initial)


@dataclass(frozen=True)
class DeltaResult:
    r: int
    count: int
    exact: bool  # False = certified lower bound over the supplied unit family


def delta_enumerated(model, units, r: int, exact: bool | None = None) -> DeltaResult:
    """Number of distinct ball classes at the given units.

    Exact delta when the unit family is class-complete (subshift window
    units for all length-2r factors); otherwise a certified lower bound.
    """
    if not units:
        raise ValueError("unit family must be nonempty")
    codes = {canonical_code(model.ball(u, r)) for u in units}
    if exact is None:
        exact = isinstance(model, SubshiftModel) and _windows_complete(model, units, r)
    return DeltaResult(r=r, count=len(codes), exact=exact)


def _windows_complete(model: SubshiftModel, units, r: int) -> bool:
    if 2 * r > model.lang.n_max:
        return False
    have = {bytes(u.letter(k) for k in range(-r, r)) for u in units}
    return set(model.lang.factors[2 * r]) <= have


def ball_to_dot(ball: LabeledBall) -> str:
    """Graphviz DOT text; the root is drawn with a double circle."""
    lines = ["digraph ball {"]
    lines.append('  0 [shape=doublecircle, label="root"];')
    for v in range(1, ball.num_vertices):
        lines.append(f'  {v} [shape=circle, label="{v}"];')
    for a, b, l in sorted(ball.edges):
        lines.append(f'  {a} -> {b} [label="{ball.labels[l]}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
