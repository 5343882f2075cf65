"""Group rings, level matrix algebras, matrix recursions, thinned growth.

The level-n algebra A_n is the d^n x d^n matrix algebra over the group
ring, rows and columns indexed by length-n words (lexicographic, read as
base-d integers).  The recursion map sends a group-ring entry g at
(u, v) to the entries g|_x at (u.g(x), v.x), one per letter; iterating
embeds A_0 = k[G] into arbitrarily deep levels.  Ranks of these images
are nondecreasing in the level and eventually equal dimensions in the
convolution algebra, which is how the thinned-algebra growth table is
computed: raise the level until two consecutive levels agree.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .fields import GF2, BitRowBasis, Field, RowBasis, SparseVector
from .selfsimilar import SelfSimilarGroup


class IdentityError(AssertionError):
    """A known algebraic identity failed: signals a recursion bug, not bad input."""


class GroupRingElement:
    """Finitely supported map from group elements (interned states) to scalars."""

    __slots__ = ("group", "field", "coeffs")

    def __init__(self, group: SelfSimilarGroup, field: Field, coeffs: dict):
        zero = field.zero()
        merged: dict = {}
        for g, c in coeffs.items():
            rid = group.intern(g)
            merged[rid] = field.add(merged.get(rid, zero), c)
        self.group = group
        self.field = field
        self.coeffs = {g: c for g, c in merged.items() if c != zero}

    @classmethod
    def of(cls, group, field, g: int, coeff=None):
        return cls(group, field, {g: field.one() if coeff is None else coeff})

    def is_zero(self) -> bool:
        return not self.coeffs

    def add(self, other: "GroupRingElement") -> "GroupRingElement":
        f = self.field
        out = dict(self.coeffs)
        for g, c in other.coeffs.items():
            out[g] = f.add(out.get(g, f.zero()), c)
        return GroupRingElement(self.group, f, out)

    def mul(self, other: "GroupRingElement") -> "GroupRingElement":
        f, grp = self.field, self.group
        out: dict = {}
        for g, cg in self.coeffs.items():
            for h, ch in other.coeffs.items():
                k = grp.intern(grp.multiply(g, h))
                out[k] = f.add(out.get(k, f.zero()), f.mul(cg, ch))
        return GroupRingElement(grp, f, out)

    def __eq__(self, other):
        return (
            isinstance(other, GroupRingElement)
            and self.field == other.field
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))


def parse_element(group: SelfSimilarGroup, text: str, field: Field) -> GroupRingElement:
    """Parse a group-ring element like 'b+c+d+1' or '2*ab+1'."""
    coeffs: dict = {}
    zero = field.zero()
    for term in text.replace(" ", "").split("+"):
        if not term:
            raise ValueError("empty term in group-ring element")
        coeff = field.one()
        if "*" in term:
            num, term = term.split("*", 1)
            coeff = field.from_int(int(num))
        if term == "1":
            g = group.identity
        elif term.isdigit():
            coeff = field.mul(coeff, field.from_int(int(term)))
            g = group.identity
        else:
            g = group.element(term)
        rid = group.intern(g)
        coeffs[rid] = field.add(coeffs.get(rid, zero), coeff)
    return GroupRingElement(group, field, coeffs)


def element_name(group: SelfSimilarGroup, rid: int) -> str:
    """Short display name: generator/identity if recognizable, else a state tag."""
    if group.is_identity(rid):
        return "1"
    key = group.canonical_key(rid)
    for name in group.gen_names:
        if group.canonical_key(group.gens[name]) == key:
            return name
    for name in group.gen_names:
        if group.canonical_key(group.inverse(group.gens[name])) == key:
            return name.upper()
    return f"g{rid}"


def format_element(elem: GroupRingElement) -> str:
    if elem.is_zero():
        return "0"
    parts = []
    for rid in sorted(elem.coeffs, key=lambda r: (element_name(elem.group, r))):
        c = elem.coeffs[rid]
        name = element_name(elem.group, rid)
        parts.append(name if c == elem.field.one() else f"{c}*{name}")
    return "+".join(parts)


@dataclass
class LevelMatrix:
    """Sparse d^level x d^level matrix over the group ring."""

    group: SelfSimilarGroup
    field: Field
    level: int
    entries: dict  # (row, col) -> GroupRingElement, all nonzero

    @property
    def size(self) -> int:
        return self.group.d**self.level

    def __post_init__(self):
        self.entries = {rc: e for rc, e in self.entries.items() if not e.is_zero()}

    def add(self, other: "LevelMatrix") -> "LevelMatrix":
        self._compat(other)
        out = dict(self.entries)
        for rc, e in other.entries.items():
            out[rc] = out[rc].add(e) if rc in out else e
        return LevelMatrix(self.group, self.field, self.level, out)

    def mul(self, other: "LevelMatrix") -> "LevelMatrix":
        self._compat(other)
        bycol: dict = {}
        for (r, c), e in other.entries.items():
            bycol.setdefault(r, []).append((c, e))
        out: dict = {}
        for (r, c), e in self.entries.items():
            for c2, e2 in bycol.get(c, ()):
                prod = e.mul(e2)
                if prod.is_zero():
                    continue
                key = (r, c2)
                out[key] = out[key].add(prod) if key in out else prod
        return LevelMatrix(self.group, self.field, self.level, out)

    def _compat(self, other):
        if self.level != other.level or self.field != other.field:
            raise ValueError("level/field mismatch")

    def __eq__(self, other):
        return (
            isinstance(other, LevelMatrix)
            and self.level == other.level
            and self.field == other.field
            and self.entries == other.entries
        )


def level0(elem: GroupRingElement) -> LevelMatrix:
    return LevelMatrix(elem.group, elem.field, 0, {(0, 0): elem})


def identity_matrix(group, field, level: int) -> LevelMatrix:
    one = GroupRingElement.of(group, field, group.identity)
    return LevelMatrix(group, field, level, {(i, i): one for i in range(group.d**level)})


def recursion_step(m: LevelMatrix) -> LevelMatrix:
    """The matrix recursion A_n -> A_(n+1): entry g at (u, v) contributes
    g|_x at (u.g(x), v.x) for every letter x, same coefficient."""
    grp, f, d = m.group, m.field, m.group.d
    out: dict = {}
    for (u, v), elem in m.entries.items():
        for g, c in elem.coeffs.items():
            for x in range(d):
                r = u * d + grp.perms[g][x]
                col = v * d + x
                child = GroupRingElement.of(grp, f, grp.child(g, x), c)
                key = (r, col)
                out[key] = out[key].add(child) if key in out else child
    return LevelMatrix(grp, f, m.level + 1, out)


def image_at_level(elem: GroupRingElement, level: int) -> LevelMatrix:
    m = level0(elem)
    for _ in range(level):
        m = recursion_step(m)
    return m


def format_matrix(m: LevelMatrix) -> str:
    size = m.size
    cells = [
        [format_element(m.entries[(r, c)]) if (r, c) in m.entries else "0" for c in range(size)]
        for r in range(size)
    ]
    width = max(len(s) for row in cells for s in row)
    return "\n".join("[" + "  ".join(s.rjust(width) for s in row) + "]" for row in cells)


def grig_witness(group: SelfSimilarGroup, field: Field = GF2) -> LevelMatrix:
    """One recursion step applied to b+c+d+1 in characteristic 2.

    The image is diagonal with a zero block and the block b+c+d+1, which
    certifies a nonzero element of the convolution algebra vanishing off
    the germs at 111...; any other result is a recursion bug.
    """
    if field.characteristic != 2:
        raise ValueError("the witness lives in characteristic 2")
    elem = parse_element(group, "b+c+d+1", field)
    m = recursion_step(level0(elem))
    expected = LevelMatrix(group, field, 1, {(1, 1): elem})
    if m != expected:
        raise IdentityError("matrix recursion of b+c+d+1 is not diag(0, b+c+d+1)")
    return m


def random_element(group, field, rng: random.Random, max_terms: int = 3, max_len: int = 3):
    coeffs: dict = {}
    names = group.gen_names
    for _ in range(rng.randint(1, max_terms)):
        word = "".join(rng.choice(names) for _ in range(rng.randint(0, max_len)))
        g = group.element(word)
        c = field.from_int(rng.randint(1, 5))
        rid = group.intern(g)
        coeffs[rid] = field.add(coeffs.get(rid, field.zero()), c)
    return GroupRingElement(group, field, coeffs)


def homomorphism_check(
    group: SelfSimilarGroup, samples: int, level: int, field: Field, seed: int = 0
) -> bool:
    """Random product/sum compatibility of the iterated recursion map."""
    if level < 1:
        raise ValueError("level must be >= 1")
    rng = random.Random(seed)
    for _ in range(samples):
        p = random_element(group, field, rng)
        q = random_element(group, field, rng)
        ip, iq = image_at_level(p, level), image_at_level(q, level)
        if image_at_level(p.mul(q), level) != ip.mul(iq):
            return False
        if image_at_level(p.add(q), level) != ip.add(iq):
            return False
    return True


# -- thinned algebra growth -----------------------------------------------------


def _element_entries(group: SelfSimilarGroup, rid: int, level: int, cache: dict):
    """Level-`level` image of a single group element: tuple over columns of
    (row, interned restriction)."""
    key = (rid, level)
    hit = cache.get(key)
    if hit is not None:
        return hit
    if level == 0:
        out = ((0, rid),)
    else:
        d = group.d
        sub_size = d ** (level - 1)
        cells = []
        for x in range(d):
            child = group.intern(group.child(rid, x))
            sub = _element_entries(group, child, level - 1, cache)
            px = group.perms[rid][x]
            cells.append([(px * sub_size + r, e) for (r, e) in sub])
        out = tuple(cell for block in cells for cell in block)
    cache[key] = out
    return out


@dataclass
class ThinnedGrowthResult:
    dims: list[tuple[int, int]]  # (n, dim V^n)
    level: int
    stabilized: bool


def thinned_dims_at_level(
    group: SelfSimilarGroup, n_max: int, field: Field, level: int, cache: dict | None = None
) -> list[tuple[int, int]]:
    """dim V^n for n=1..n_max with elements vectorized at a fixed level.

    Coordinates are (matrix cell, interned group element); V is spanned
    by 1 and the generators, and each level adds candidates s*h for the
    elements h that were newly independent.
    """
    if cache is None:
        cache = {}
    coord_index: dict = {}
    use_bits = field == GF2
    basis = BitRowBasis(1 << 62) if use_bits else RowBasis(field, 1 << 62)
    one = field.one()
    gens = [group.intern(group.gens[n]) for n in group.gen_names]
    d = group.d

    def vectorize(rid: int):
        entries = _element_entries(group, rid, level, cache)
        idxs = []
        for col, (row, e) in enumerate(entries):
            coord = (row, col, e)
            i = coord_index.get(coord)
            if i is None:
                i = len(coord_index)
                coord_index[coord] = i
            idxs.append(i)
        if use_bits:
            mask = 0
            for i in idxs:
                mask |= 1 << i
            return mask
        return SparseVector(1 << 62, {i: one for i in idxs}, field)

    seen = set()
    new: list[int] = []

    def consider(rid: int) -> None:
        if rid in seen:
            return
        seen.add(rid)
        if basis.insert(vectorize(rid)):
            new.append(rid)

    consider(group.intern(group.identity))
    for g in gens:
        consider(g)
    dims = [(1, basis.rank)]
    for n in range(2, n_max + 1):
        frontier = list(new)
        new = []
        for h in frontier:
            for s in gens:
                consider(group.intern(group.multiply(s, h)))
        dims.append((n, basis.rank))
    return dims


def thinned_growth(
    group: SelfSimilarGroup,
    n_max: int,
    field: Field,
    level_start: int | None = None,
    level_cap: int = 14,
) -> ThinnedGrowthResult:
    """Thinned-algebra growth table with the level raised to stabilization.

    Ranks are nondecreasing in the level and eventually exact (the level
    algebras embed compatibly into the convolution algebra), so equality
    of two consecutive levels is the stabilization certificate.
    """
    if level_start is None:
        est = group.contraction_estimate(length_cap=8, depth_cap=3)
        lam = float(est.ratio)
        if 0 < lam < 1:
            level_start = math.ceil(math.log(max(n_max, 2)) / math.log(1 / lam)) + 2
        else:
            level_start = 3
        # Stabilization raises the level anyway; starting low keeps the
        # cheap runs cheap.
        level_start = min(level_start, 8)
    cache: dict = {}
    level = max(1, level_start)
    prev = thinned_dims_at_level(group, n_max, field, level, cache)
    while level < level_cap:
        nxt = thinned_dims_at_level(group, n_max, field, level + 1, cache)
        level += 1
        if nxt == prev:
            return ThinnedGrowthResult(dims=nxt, level=level, stabilized=True)
        prev = nxt
    return ThinnedGrowthResult(dims=prev, level=level, stabilized=False)


def loglog_slope(dims: list[tuple[int, int]], lo: int, hi: int) -> float:
    """Least-squares slope of log(dim) against log(n) on lo <= n <= hi."""
    pts = [(math.log(n), math.log(d)) for n, d in dims if lo <= n <= hi and d > 0]
    if len(pts) < 2:
        raise ValueError("need at least two points in the fit range")
    mx = sum(x for x, _ in pts) / len(pts)
    my = sum(y for _, y in pts) / len(pts)
    num = sum((x - mx) * (y - my) for x, y in pts)
    den = sum((x - mx) ** 2 for x, _ in pts)
    return num / den
