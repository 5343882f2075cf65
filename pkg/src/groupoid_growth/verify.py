"""End-to-end verification suite: thirteen numbered checks over the whole
toolkit, runnable at three scales (tiny for smoke, quick for development,
full for the complete claims)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import matrix_recursion as mr
from . import shift_algebra as sa
from .fields import GF2, QQ
from .groupoid import GermGroupoidModel, SubshiftModel, delta_enumerated, gamma
from .selfsimilar import ADDING_MACHINE, GRIGORCHUK, EventuallyPeriodicPoint, SelfSimilarGroup
from .subshift import build_language
from .words import SturmianSource, ToeplitzSource, golden_sturmian, source_from_config, thue_morse


@dataclass(frozen=True)
class Scale:
    sturmian_n: int  # criterion 1
    delta_r: int  # criterion 2
    growth_n: int  # criteria 3-4
    oracle_n: int  # criterion 5
    module_n: int  # criterion 6
    hom_samples: int  # criterion 10
    thinned_n: int  # criterion 11
    thinned_fit: tuple[int, int]
    contraction_cap: int  # criterion 12
    gamma_r: int


SCALES = {
    "full": Scale(200, 15, 12, 5, 10, 100, 48, (16, 48), 16, 10),
    "quick": Scale(50, 6, 6, 4, 6, 20, 24, (8, 24), 12, 6),
    "tiny": Scale(12, 3, 3, 3, 3, 5, 10, (4, 10), 8, 3),
}


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str


def _lang(source, n_max: int, budget: int):
    return build_language(source, n_max=n_max, prefix_budget=budget)


def check_01_sturmian_complexity(s: Scale) -> CheckResult:
    n = s.sturmian_n
    budget = 10 * n * (n + 1)
    bad = []
    for cf in ([1], [2]):
        lang = _lang(SturmianSource(cf, cf_periodic=True), n, budget)
        for m in range(1, n + 1):
            if lang.complexity(m) != m + 1:
                bad.append((cf[0], m, lang.complexity(m)))
    ok = not bad
    detail = f"p(n)=n+1 for n<=({n}) on cf=[1,1,...] and [2,2,...]" if ok else f"violations {bad[:3]}"
    return CheckResult("01-sturmian-complexity", ok, detail)


def check_02_delta_consistency(s: Scale) -> CheckResult:
    r_max = s.delta_r
    bad = []
    for name, src in (("golden", golden_sturmian()), ("thue-morse", thue_morse())):
        lang = _lang(src, 2 * r_max, max(8192, 20 * r_max * r_max))
        model = SubshiftModel(lang)
        for r in range(1, r_max + 1):
            res = delta_enumerated(model, model.class_complete_units(r), r)
            if not res.exact or res.count != lang.delta_formula(r):
                bad.append((name, r, res.count, lang.delta_formula(r)))
    ok = not bad
    detail = f"delta(r)=p(2r) for r<={r_max}, golden and thue-morse" if ok else f"violations {bad[:3]}"
    return CheckResult("02-delta-consistency", ok, detail)


def _growth_suite():
    return (
        ("golden", golden_sturmian()),
        ("thue-morse", thue_morse()),
        ("toeplitz-10??", ToeplitzSource((1, 0, -1, -1), alphabet=_binary())),
    )


def _binary():
    from .words import Alphabet

    return Alphabet(2)


def check_03_main_inequality(s: Scale) -> CheckResult:
    n_max = s.growth_n
    bad = []
    for name, src in _growth_suite():
        lang = _lang(src, 2 * n_max + 1, max(8192, 40 * n_max * n_max))
        for field in (QQ, GF2):
            prev = 0
            for n, dim in sa.growth_dims(lang, n_max, field):
                if dim > (2 * n + 1) * lang.complexity(2 * n) or dim < prev:
                    bad.append((name, field.name, n, dim))
                prev = dim
    ok = not bad
    detail = (
        f"dim V^n <= (2n+1)p(2n), n<={n_max}, 3 subshifts x {{Q,F2}}" if ok else f"violations {bad[:3]}"
    )
    return CheckResult("03-main-inequality", ok, detail)


def check_04_sturmian_sandwich(s: Scale) -> CheckResult:
    n_max = s.growth_n
    lang = _lang(golden_sturmian(), 2 * n_max + 1, max(8192, 40 * n_max * n_max))
    bad = []
    for field in (QQ, GF2):
        for n, dim in sa.growth_dims(lang, n_max, field):
            if not ((n + 1) * (n + 2) // 2 <= dim <= 2 * n * (2 * n + 1)):
                bad.append((field.name, n, dim))
    ok = not bad
    detail = f"(n+1)(n+2)/2 <= dim V^n <= 2n(2n+1), n<={n_max}, both fields" if ok else f"violations {bad[:3]}"
    return CheckResult("04-sturmian-sandwich", ok, detail)


def _bruteforce_dims(lang, n_max, field):
    """Rank of all explicit generator products, evaluated straight from the
    germ-composition definition — independent of the levelwise path."""
    from .fields import BitRowBasis, RowBasis, SparseVector

    n = n_max
    windows = lang.factors[2 * n + 1]
    p = len(windows)
    names = ["1", "T", "T-"] + [f"D:{x}" for x in range(lang.alphabet_size)]

    def evaluate(word):
        # value at (k, u): simulate the product from the right at the point
        # with central window u; D_x tests the letter at the running shift.
        vec = {}
        for ui, u in enumerate(windows):
            j = 0
            alive = True
            for tok in reversed(word):
                if tok == "T":
                    j += 1
                elif tok == "T-":
                    j -= 1
                elif tok.startswith("D:"):
                    if u[j + n] != int(tok[2:]):
                        alive = False
                        break
            if alive:
                vec[(j + n) * p + ui] = 1
        return vec

    dim = (2 * n + 1) * p
    basis = BitRowBasis(dim) if field == GF2 else RowBasis(field, dim)
    words = [[]]
    dims = []
    for m in range(1, n_max + 1):
        words = [w + [t] for w in words for t in names]
        for w in words:
            vec = evaluate(w)
            if field == GF2:
                mask = 0
                for i in vec:
                    mask |= 1 << i
                basis.insert(mask)
            else:
                basis.insert(SparseVector(dim, {i: field.one() for i in vec}, field))
        dims.append((m, basis.rank))
    return dims


def check_05_oracle_equivalence(s: Scale) -> CheckResult:
    n_max = s.oracle_n
    lang = _lang(golden_sturmian(), 2 * n_max + 1, 8192)
    bad = []
    for field in (QQ, GF2):
        if sa.growth_dims(lang, n_max, field) != _bruteforce_dims(lang, n_max, field):
            bad.append(field.name)
    ok = not bad
    detail = f"levelwise dims == brute-force product rank, n<={n_max}, both fields" if ok else f"mismatch over {bad}"
    return CheckResult("05-oracle-equivalence", ok, detail)


def check_06_module_bound(s: Scale) -> CheckResult:
    n_max = s.module_n
    lang = _lang(golden_sturmian(), 2 * n_max + 1, 8192)
    dims = sa.module_growth(lang, n_max, QQ)
    bad = [(n, d) for n, d in dims if n >= 1 and d != 2 * n + 1]
    ok = not bad and dims[0] == (0, 1)
    detail = f"dim V^n.delta_0 = 2n+1 = gamma(x,n) for n<={n_max}" if ok else f"violations {bad[:3]}"
    return CheckResult("06-module-bound", ok, detail)


def check_07_adding_machine_matrices(s: Scale) -> CheckResult:
    grp = SelfSimilarGroup(ADDING_MACHINE)
    a = mr.parse_element(grp, "a", QQ)
    one = mr.parse_element(grp, "1", QQ)
    m1 = mr.image_at_level(a, 1)
    m2 = mr.image_at_level(a, 2)
    lvl1_ok = m1.entries == {(0, 1): a, (1, 0): one}
    lvl2_ok = m2.entries == {(0, 3): a, (1, 2): one, (2, 0): one, (3, 1): one}
    ok = lvl1_ok and lvl2_ok
    detail = "level-1 [[0,a],[1,0]] and level-2 4x4 image verified entrywise" if ok else (
        f"level1={lvl1_ok} level2={lvl2_ok}"
    )
    return CheckResult("07-adding-machine-matrices", ok, detail)


def check_08_grig_witness(s: Scale) -> CheckResult:
    grp = SelfSimilarGroup(GRIGORCHUK)
    try:
        m = mr.grig_witness(grp)
    except mr.IdentityError as e:
        return CheckResult("08-grig-witness", False, str(e))
    entry = mr.format_element(m.entries[(1, 1)])
    ok = set(m.entries) == {(1, 1)} and entry == "1+b+c+d"
    detail = f"image of b+c+d+1 is diag(0, {entry}): the nonzero block repeats the element itself"
    return CheckResult("08-grig-witness", ok, detail)


def check_09_grig_structure(s: Scale) -> CheckResult:
    grp = SelfSimilarGroup(GRIGORCHUK)
    problems = []
    nuc = grp.nucleus()
    if len(nuc) != 5 or not nuc.closed_under_restriction():
        problems.append(f"nucleus size {len(nuc)}")
    for name in "abcd":
        g = grp.gens[name]
        if not grp.is_identity(grp.multiply(g, g)):
            problems.append(f"{name} not involution")
    if not grp.equal(grp.multiply(grp.gens["b"], grp.gens["c"]), grp.gens["d"]):
        problems.append("b.c != d")
    if not grp.germ_is_unit(grp.gens["d"], EventuallyPeriodicPoint((), (0,))):
        problems.append("germ of d at 0^inf not a unit")
    if grp.germ_is_unit(grp.gens["b"], EventuallyPeriodicPoint((), (1,))):
        problems.append("germ of b at 1^inf reported trivial")
    ok = not problems
    detail = "nucleus {1,a,b,c,d}; involutions; b.c=d; germ facts at 0^inf/1^inf" if ok else "; ".join(problems)
    return CheckResult("09-grig-structure", ok, detail)


def check_10_homomorphism(s: Scale, seed: int = 0) -> CheckResult:
    grp = SelfSimilarGroup(GRIGORCHUK)
    bad = []
    for field in (GF2, QQ):
        for level in (1, 2, 3):
            if not mr.homomorphism_check(grp, s.hom_samples, level, field, seed=seed + level):
                bad.append((field.name, level))
    ok = not bad
    detail = f"{s.hom_samples} product/sum samples at levels 1-3 over F2 and Q" if ok else f"failures {bad}"
    return CheckResult("10-homomorphism", ok, detail)


def check_11_thinned_growth(s: Scale) -> CheckResult:
    grp = SelfSimilarGroup(GRIGORCHUK)
    res = mr.thinned_growth(grp, s.thinned_n, GF2)
    lo, hi = s.thinned_fit
    slope = mr.loglog_slope(res.dims, lo, hi)
    ok = res.stabilized and 1.5 <= slope <= 2.5
    detail = (
        f"dim V^{s.thinned_n}={res.dims[-1][1]}, level {res.level} "
        f"(stabilized={res.stabilized}), log-log slope {slope:.3f} on [{lo},{hi}]"
    )
    return CheckResult("11-thinned-growth", ok, detail)


def check_12_contraction(s: Scale) -> CheckResult:
    problems = []
    for name, rec in (("adding_machine", ADDING_MACHINE), ("grigorchuk", GRIGORCHUK)):
        grp = SelfSimilarGroup(rec)
        est = grp.contraction_estimate(length_cap=s.contraction_cap)
        if est.ratio > Fraction(3, 5):
            problems.append(f"{name} estimate {est.ratio} at depth {est.depth}")
    grp = SelfSimilarGroup(ADDING_MACHINE)
    model = GermGroupoidModel(grp)
    units = [
        EventuallyPeriodicPoint((), (1,)),
        EventuallyPeriodicPoint((), (0,)),
        EventuallyPeriodicPoint((), (0, 1)),
        EventuallyPeriodicPoint((1,), (0,)),
        EventuallyPeriodicPoint((0,), (1,)),
    ]
    for u in units:
        for r in range(s.gamma_r + 1):
            g = gamma(model, u, r)
            if g != 2 * r + 1:
                problems.append(f"gamma({u},{r})={g}")
    ok = not problems
    detail = (
        f"estimates <= 3/5 at cap {s.contraction_cap}; adding-machine gamma=2r+1, r<={s.gamma_r}, 5 units"
        if ok
        else "; ".join(problems[:3])
    )
    return CheckResult("12-contraction", ok, detail)


def check_13_determinism(s: Scale, seed: int = 0) -> CheckResult:
    first = report_text("tiny", seed=seed, include_determinism=False)
    second = report_text("tiny", seed=seed, include_determinism=False)
    ok = first == second
    detail = "two same-seed runs produced byte-identical reports" if ok else "reports differ"
    return CheckResult("13-determinism", ok, detail)


def run_checks(profile: str, seed: int = 0, include_determinism: bool = True) -> list[CheckResult]:
    if profile not in SCALES:
        raise ValueError(f"unknown profile {profile!r}; expected one of {sorted(SCALES)}")
    s = SCALES[profile]
    results = [
        check_01_sturmian_complexity(s),
        check_02_delta_consistency(s),
        check_03_main_inequality(s),
        check_04_sturmian_sandwich(s),
        check_05_oracle_equivalence(s),
        check_06_module_bound(s),
        check_07_adding_machine_matrices(s),
        check_08_grig_witness(s),
        check_09_grig_structure(s),
        check_10_homomorphism(s, seed=seed),
        check_11_thinned_growth(s),
        check_12_contraction(s),
    ]
    if include_determinism:
        results.append(check_13_determinism(s, seed=seed))
    return results


def report_text(profile: str, seed: int = 0, include_determinism: bool = True) -> str:
    lines = [f"profile={profile} seed={seed}"]
    for res in run_checks(profile, seed=seed, include_determinism=include_determinism):
        lines.append(f"{'PASS' if res.ok else 'FAIL'} {res.name}: {res.detail}")
    return "\n".join(lines) + "\n"
