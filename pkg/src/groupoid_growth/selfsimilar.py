"""Groups acting on rooted trees by wreath recursions.

Elements are states of a deterministic automaton: a state carries a
permutation of the alphabet and one child state per letter.  States are
created through memoized product/inverse constructors; child states are
resolved lazily from a stored recipe, which makes cyclic definitions
(generators whose restrictions mention each other, formal inverses, the
products they induce) well founded.  *Semantic* equality — equality as
maps on the tree — is decided by minimizing the reachable sub-automaton
and comparing canonical encodings.  The canonical encoding doubles as
the interning key, so equality, identity tests, and group-ring
coefficient merging are exact and cheap.

Boundary points are restricted to eventually periodic sequences, for
which germ triviality is decidable by cycle detection over (canonical
state, phase) pairs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction


class StateCapExceeded(RuntimeError):
    """Automaton state registry grew past its cap (non-contracting blowup)."""


class NotContracting(RuntimeError):
    """Nucleus closure did not stabilize within the cap."""


@dataclass(frozen=True)
class WreathRecursion:
    """Generator presentation: per generator a letter permutation and
    restriction words (one word over generator names per letter; empty
    word means the identity, an uppercase name means the inverse)."""

    alphabet_size: int
    generators: dict[str, tuple[tuple[int, ...], tuple[str, ...]]]

    def __post_init__(self):
        d = self.alphabet_size
        for name, (perm, rests) in self.generators.items():
            if sorted(perm) != list(range(d)):
                raise ValueError(f"generator {name}: letter map is not a bijection of the alphabet")
            if len(rests) != d:
                raise ValueError(f"generator {name}: need one restriction word per letter")
            for w in rests:
                for ch in w:
                    if ch.lower() not in self.generators:
                        raise ValueError(f"generator {name}: unknown name {ch!r} in restriction")


def recursion_from_config(cfg: dict) -> WreathRecursion:
    gens = {
        name: (tuple(g["perm"]), tuple(g["rest"]))
        for name, g in cfg["generators"].items()
    }
    return WreathRecursion(alphabet_size=int(cfg["alphabet"]), generators=gens)


ADDING_MACHINE = WreathRecursion(2, {"a": ((1, 0), ("", "a"))})

GRIGORCHUK = WreathRecursion(
    2,
    {
        "a": ((1, 0), ("", "")),
        "b": ((0, 1), ("a", "c")),
        "c": ((0, 1), ("a", "d")),
        "d": ((0, 1), ("", "b")),
    },
)

PRESETS = {"adding_machine": ADDING_MACHINE, "grigorchuk": GRIGORCHUK}


@dataclass(frozen=True)
class EventuallyPeriodicPoint:
    """Boundary point given as preperiod + repeating period, e.g. 1^inf = ('', '1')."""

    preperiod: tuple[int, ...]
    period: tuple[int, ...]

    def __post_init__(self):
        if not self.period:
            raise ValueError("period must be nonempty")

    def letter(self, i: int) -> int:
        if i < len(self.preperiod):
            return self.preperiod[i]
        return self.period[(i - len(self.preperiod)) % len(self.period)]

    def phase(self, i: int):
        """Cycle-detection key component: None in the preperiod, else position mod period."""
        if i < len(self.preperiod):
            return None
        return (i - len(self.preperiod)) % len(self.period)

    @classmethod
    def parse(cls, text: str) -> "EventuallyPeriodicPoint":
        """Parse 'pre|period', e.g. '|1' for 1^inf or '0|10'."""
        if "|" not in text:
            raise ValueError("point syntax is 'preperiod|period', e.g. '|1'")
        pre, per = text.split("|", 1)
        return cls(tuple(int(c) for c in pre), tuple(int(c) for c in per))


class SelfSimilarGroup:
    """Interned-state realization of a wreath recursion."""

    def __init__(self, recursion: WreathRecursion, state_cap: int = 2_000_000):
        self.recursion = recursion
        self.d = recursion.alphabet_size
        self.state_cap = state_cap
        self.perms: list[tuple[int, ...]] = []
        self.children: list[list[int]] = []
        self._recipes: dict[int, tuple] = {}  # state -> how to build missing children
        self._product_cache: dict[tuple[int, int], int] = {}
        self._inverse_cache: dict[int, int] = {}
        self._key_cache: dict[int, str] = {}
        self._intern: dict[str, int] = {}

        idperm = tuple(range(self.d))
        self.identity = self._new_state(idperm)
        self.children[self.identity] = [self.identity] * self.d

        self.gens: dict[str, int] = {}
        for name, (perm, rests) in recursion.generators.items():
            sid = self._new_state(perm)
            self._recipes[sid] = ("word", rests)
            self.gens[name] = sid
        self.gen_names = list(recursion.generators)
        self.identity_key = self.canonical_key(self.identity)

    # -- state construction ------------------------------------------------

    def _new_state(self, perm: tuple[int, ...]) -> int:
        if len(self.perms) >= self.state_cap:
            raise StateCapExceeded(f"automaton state cap {self.state_cap} exceeded")
        self.perms.append(perm)
        self.children.append([-1] * self.d)  # resolved on demand via the recipe
        return len(self.perms) - 1

    def child(self, g: int, x: int) -> int:
        """The state g|_x, resolving lazily.

        Lazy resolution makes mutually recursive definitions well
        founded: a recipe only ever refers to states created earlier, so
        the resolution recursion terminates.
        """
        c = self.children[g][x]
        if c >= 0:
            return c
        recipe = self._recipes[g]
        if recipe[0] == "word":
            c = self._word_state(recipe[1][x])
        elif recipe[0] == "inv":
            (_, orig) = recipe
            inv_perm = self.perms[g]
            c = self.inverse(self.child(orig, inv_perm[x]))
        else:  # ("mul", left, right)
            _, left, right = recipe
            ph = self.perms[right]
            c = self.multiply(self.child(left, ph[x]), self.child(right, x))
        self.children[g][x] = c
        return c

    def _word_state(self, word: str) -> int:
        sid = self.identity
        for ch in word:
            g = self.gens[ch.lower()]
            if ch.isupper():
                g = self.inverse(g)
            sid = self.multiply(sid, g)
        return sid

    def element(self, word: str) -> int:
        """State of a product of generators given as a name word ('' = identity)."""
        return self._word_state(word)

    def multiply(self, g: int, h: int) -> int:
        """State of g*h (g applied after h).  (g*h)|_x = g|_{h(x)} * h|_x."""
        if g == self.identity:
            return h
        if h == self.identity:
            return g
        key = (g, h)
        cached = self._product_cache.get(key)
        if cached is not None:
            return cached
        pg, ph = self.perms[g], self.perms[h]
        sid = self._new_state(tuple(pg[ph[x]] for x in range(self.d)))
        self._product_cache[key] = sid
        self._recipes[sid] = ("mul", g, h)
        return sid

    def inverse(self, g: int) -> int:
        if g == self.identity:
            return g
        cached = self._inverse_cache.get(g)
        if cached is not None:
            return cached
        perm = self.perms[g]
        inv_perm = [0] * self.d
        for x, y in enumerate(perm):
            inv_perm[y] = x
        sid = self._new_state(tuple(inv_perm))
        self._inverse_cache[g] = sid
        self._inverse_cache[sid] = g
        self._recipes[sid] = ("inv", g)
        return sid

    # -- tree action ---------------------------------------------------------

    def act(self, g: int, word) -> tuple[int, ...]:
        """Image of a finite word under the automorphism g."""
        out = []
        sid = g
        for x in word:
            if not (0 <= x < self.d):
                raise ValueError(f"letter {x} outside alphabet of size {self.d}")
            out.append(self.perms[sid][x])
            sid = self.child(sid, x)
        return tuple(out)

    def restriction(self, g: int, word) -> int:
        """State of g|_v."""
        sid = g
        for x in word:
            if not (0 <= x < self.d):
                raise ValueError(f"letter {x} outside alphabet of size {self.d}")
            sid = self.child(sid, x)
        return sid

    # -- semantic equality ----------------------------------------------------

    def canonical_key(self, g: int) -> str:
        """Canonical encoding of the minimized automaton reachable from g.

        Two states have equal keys iff they are equal as automorphisms of
        the tree (bisimulation equivalence).
        """
        cached = self._key_cache.get(g)
        if cached is not None:
            return cached
        # Reachable states (forcing all children along the way).
        reach = []
        seen = set()
        stack = [g]
        while stack:
            s = stack.pop()
            if s in seen:
                continue
            seen.add(s)
            reach.append(s)
            stack.extend(self.child(s, x) for x in range(self.d))
        # Moore partition refinement by (perm, child blocks).
        block = {s: self.perms[s] for s in reach}
        while True:
            sig = {
                s: (block[s], tuple(block[self.children[s][x]] for x in range(self.d)))
                for s in reach
            }
            if len(set(sig.values())) == len(set(block.values())):
                block = sig
                break
            block = sig
        # Canonical BFS over blocks starting from g's block, letter order.
        order: dict = {}
        rep: dict = {}
        for s in reach:
            rep.setdefault(block[s], s)
        queue = [block[g]]
        order[block[g]] = 0
        idx = 0
        encoded = []
        while idx < len(queue):
            b = queue[idx]
            idx += 1
            s = rep[b]
            childblocks = []
            for x in range(self.d):
                cb = block[self.children[s][x]]
                if cb not in order:
                    order[cb] = len(queue)
                    queue.append(cb)
                childblocks.append(order[cb])
            encoded.append((self.perms[s], tuple(childblocks)))
        key = repr(encoded)
        self._key_cache[g] = key
        return key

    def equal(self, g: int, h: int) -> bool:
        return g == h or self.canonical_key(g) == self.canonical_key(h)

    def is_identity(self, g: int) -> bool:
        return g == self.identity or self.canonical_key(g) == self.identity_key

    def intern(self, g: int) -> int:
        """Canonical representative state id for g's bisimulation class."""
        key = self.canonical_key(g)
        rep = self._intern.get(key)
        if rep is None:
            self._intern[key] = g
            rep = g
        return rep

    # -- germs ---------------------------------------------------------------

    def germ_is_unit(self, g: int, point: EventuallyPeriodicPoint, cap: int = 10_000) -> bool:
        """Whether the germ of g at an eventually periodic point is a unit.

        Follows the point through g: a moved prefix letter kills all longer
        prefixes; reaching the identity state certifies a unit; a repeated
        (canonical state, period phase) pair is a nonidentity cycle.
        """
        sid = g
        pos = 0
        seen = set()
        for _ in range(cap):
            if self.is_identity(sid):
                return True
            x = point.letter(pos)
            if self.perms[sid][x] != x:
                return False
            phase = point.phase(pos)
            if phase is not None:
                key = (self.canonical_key(sid), phase)
                if key in seen:
                    return False
                seen.add(key)
            sid = self.child(sid, x)
            pos += 1
        raise StateCapExceeded(f"germ decision did not settle within {cap} steps")

    # -- nucleus and contraction ----------------------------------------------

    def generator_states(self, with_inverses: bool = True) -> list[int]:
        out = [self.gens[n] for n in self.gen_names]
        if with_inverses:
            for n in self.gen_names:
                inv = self.inverse(self.gens[n])
                if self.canonical_key(inv) not in {self.canonical_key(s) for s in out}:
                    out.append(inv)
        return out

    def nucleus(self, cap: int = 10_000) -> "Nucleus":
        """Restriction closure of pairwise generator products, pruned to the
        recurrently reachable core."""
        if cap < 1:
            raise ValueError("cap must be >= 1")
        seeds = [self.identity] + self.generator_states()
        closure: dict[str, int] = {}

        def add(state: int) -> int | None:
            k = self.canonical_key(state)
            if k in closure:
                return None
            if len(closure) >= cap:
                raise NotContracting(
                    f"restriction closure exceeded cap {cap}: not contracting within cap"
                )
            rep = self.intern(state)
            closure[k] = rep
            return rep

        frontier = []
        for g in seeds:
            for h in seeds:
                rep = add(self.multiply(g, h))
                if rep is not None:
                    frontier.append(rep)
        while frontier:
            nxt = []
            for s in frontier:
                for x in range(self.d):
                    rep = add(self.child(s, x))
                    if rep is not None:
                        nxt.append(rep)
            frontier = nxt
        # Restriction graph on the closure; keep states reachable from a cycle.
        nodes = list(closure.values())
        succ = {
            s: {self.intern(self.child(s, x)) for x in range(self.d)} for s in nodes
        }
        on_cycle = set()
        for s in nodes:
            stack, seen = list(succ[s]), set()
            while stack:
                t = stack.pop()
                if t == s:
                    on_cycle.add(s)
                    break
                if t in seen:
                    continue
                seen.add(t)
                stack.extend(succ[t])
        recurrent = set()
        stack = list(on_cycle)
        while stack:
            s = stack.pop()
            if s in recurrent:
                continue
            recurrent.add(s)
            stack.extend(succ[s])
        return Nucleus(group=self, states=sorted(recurrent), complete=True)

    def ball(self, radius: int) -> dict[str, tuple[int, int]]:
        """Exact ball of the group: canonical key -> (word length, state id)."""
        lengths: dict[str, tuple[int, int]] = {self.identity_key: (0, self.identity)}
        frontier = [self.identity]
        gens = self.generator_states()
        for r in range(1, radius + 1):
            nxt = []
            for g in frontier:
                for s in gens:
                    p = self.multiply(s, g)
                    k = self.canonical_key(p)
                    if k not in lengths:
                        lengths[k] = (r, p)
                        nxt.append(p)
            frontier = nxt
        return lengths

    def contraction_estimate(self, length_cap: int = 16, depth_cap: int = 6) -> "ContractionEstimate":
        """Empirical contraction witness.

        Over all group elements with word length in [length_cap/2,
        length_cap], takes the worst ratio l(g|_v)/l(g) at each depth and
        returns the best (smallest) depth ratio found: an upper-bound
        witness at that depth, not the true limsup.
        """
        if length_cap < 2:
            raise ValueError("length_cap must be >= 2")
        lengths = self.ball(length_cap)
        lo = (length_cap + 1) // 2
        band = [(l, g) for (l, g) in lengths.values() if lo <= l <= length_cap]
        if not band:
            return ContractionEstimate(Fraction(0), 1, length_cap)
        best_ratio, best_depth = None, 1
        for depth in range(1, depth_cap + 1):
            worst = Fraction(0)
            for l, g in band:
                for v in _all_words(self.d, depth):
                    r = self.restriction(g, v)
                    rk = self.canonical_key(r)
                    if rk in lengths:
                        rl = lengths[rk][0]
                    else:
                        rl = l + 1  # restriction left the ball: length grew
                    ratio = Fraction(rl, l)
                    if ratio > worst:
                        worst = ratio
            if best_ratio is None or worst < best_ratio:
                best_ratio, best_depth = worst, depth
        return ContractionEstimate(best_ratio, best_depth, length_cap)


def _all_words(d: int, n: int):
    if n == 0:
        yield ()
        return
    for w in _all_words(d, n - 1):
        for x in range(d):
            yield w + (x,)


@dataclass
class Nucleus:
    group: SelfSimilarGroup
    states: list[int]
    complete: bool

    def __len__(self):
        return len(self.states)

    def contains(self, g: int) -> bool:
        key = self.group.canonical_key(g)
        return any(self.group.canonical_key(s) == key for s in self.states)

    def closed_under_restriction(self) -> bool:
        return all(
            self.contains(self.group.child(s, x))
            for s in self.states
            for x in range(self.group.d)
        )


@dataclass(frozen=True)
class ContractionEstimate:
    ratio: Fraction
    depth: int
    length_cap: int


def group_from_spec(spec) -> SelfSimilarGroup:
    """Accept a preset name, a config dict, or JSON text."""
    if isinstance(spec, SelfSimilarGroup):
        return spec
    if isinstance(spec, WreathRecursion):
        return SelfSimilarGroup(spec)
    if isinstance(spec, dict):
        return SelfSimilarGroup(recursion_from_config(spec))
    if isinstance(spec, str):
        if spec in PRESETS:
            return SelfSimilarGroup(PRESETS[spec])
        return SelfSimilarGroup(recursion_from_config(json.loads(spec)))
    raise ValueError(f"cannot interpret group spec {spec!r}")
