"""Command-line front end.

Every subcommand reads JSON descriptors, runs one library operation, and
emits deterministic artifacts: CSV tables (with a config-digest comment
row), DOT graphs, or plain text.  Exit codes: 0 success, 2 usage error,
3 resource cap hit, 4 violated internal identity.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys

from . import matrix_recursion as mr
from . import shift_algebra as sa
from .fields import parse_field
from .groupoid import GermGroupoidModel, SubshiftModel, WindowUnit, ball_to_dot, delta_enumerated
from .matrix_recursion import IdentityError
from .selfsimilar import (
    EventuallyPeriodicPoint,
    NotContracting,
    SelfSimilarGroup,
    StateCapExceeded,
    group_from_spec,
)
from .shift_algebra import RadiusExhausted
from .subshift import build_language
from .verify import report_text, run_checks
from .words import UndeterminedPosition, source_from_config

EXIT_USAGE = 2
EXIT_RESOURCE = 3
EXIT_IDENTITY = 4

RESOURCE_ERRORS = (StateCapExceeded, NotContracting, RadiusExhausted, UndeterminedPosition)


class UsageError(Exception):
    pass


def _load_json_arg(text: str) -> dict:
    """Accept inline JSON or a path to a JSON file."""
    text = text.strip()
    if text.startswith("{"):
        return json.loads(text)
    with open(text, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _config_digest(payload) -> str:
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


def _emit_csv(path: str | None, header: list[str], rows: list[list], config) -> None:
    lines = [f"#config={_config_digest(config)}"]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(_csv_cell(c) for c in row))
    text = "\n".join(lines) + "\n"
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv_cell(value) -> str:
    s = str(value)
    if any(ch in s for ch in ',"\n'):
        s = '"' + s.replace('"', '""') + '"'
    return s


def _thread_cap() -> int:
    raw = os.environ.get("GROUPOID_GROWTH_THREADS", "1")
    try:
        cap = int(raw)
    except ValueError as e:
        raise UsageError(f"GROUPOID_GROWTH_THREADS must be an integer, got {raw!r}") from e
    if cap < 1:
        raise UsageError("GROUPOID_GROWTH_THREADS must be >= 1")
    return cap


def _positive(name: str, value: int) -> int:
    if value < 1:
        raise UsageError(f"{name} must be >= 1")
    return value


def _language_from_args(args, n_needed: int):
    cfg = _load_json_arg(args.source)
    source = source_from_config(cfg)
    budget = getattr(args, "budget", None) or max(8192, 40 * n_needed * n_needed)
    return cfg, build_language(source, n_max=n_needed, prefix_budget=budget)


def _model_from_arg(text: str):
    cfg = _load_json_arg(text) if (text.strip().startswith("{") or os.path.exists(text)) else {"kind": "germ", "group": text}
    kind = cfg.get("kind")
    if kind == "subshift":
        source = source_from_config(cfg["source"])
        n_max = int(cfg.get("n_max", 30))
        budget = int(cfg.get("budget", max(8192, 40 * n_max * n_max)))
        return cfg, SubshiftModel(build_language(source, n_max=n_max, prefix_budget=budget))
    if kind == "germ":
        return cfg, GermGroupoidModel(group_from_spec(cfg["group"]))
    raise UsageError(f"model kind must be 'subshift' or 'germ', got {kind!r}")


def _parse_unit(model, text: str):
    if isinstance(model, SubshiftModel):
        if ":" not in text:
            raise UsageError("subshift unit syntax is '<letters>:<origin>'")
        word, origin = text.rsplit(":", 1)
        return WindowUnit(bytes(int(c) for c in word), int(origin))
    return EventuallyPeriodicPoint.parse(text)


# -- subcommand implementations -------------------------------------------------


def cmd_complexity(args) -> int:
    n_max = _positive("--n-max", args.n_max)
    cfg, lang = _language_from_args(args, n_max)
    rows = [[n, lang.complexity(n)] for n in range(1, n_max + 1)]
    _emit_csv(args.csv, ["n", "p_n"], rows, {"cmd": "complexity", "source": cfg, "n_max": n_max})
    return 0


def cmd_delta(args) -> int:
    r = _positive("--r", args.r)
    cfg, model = _model_from_arg(args.model)
    policy = args.units_policy
    if policy == "windows":
        if not isinstance(model, SubshiftModel):
            raise UsageError("units-policy 'windows' needs a subshift model")
        units = model.class_complete_units(r)
    elif policy.startswith("periodic:"):
        if not isinstance(model, GermGroupoidModel):
            raise UsageError("units-policy 'periodic:...' needs a germ model")
        params = dict(kv.split("=", 1) for kv in policy[len("periodic:") :].split(","))
        units = model.periodic_units(int(params["pre"]), int(params["period"]))
    else:
        raise UsageError(f"unknown units policy {policy!r}")
    res = delta_enumerated(model, units, r)
    rows = [[res.r, res.count, "exact" if res.exact else "lower_bound"]]
    _emit_csv(args.csv, ["r", "delta", "flag"], rows, {"cmd": "delta", "model": cfg, "r": r, "policy": policy})
    return 0


def cmd_ball(args) -> int:
    if args.r < 0:
        raise UsageError("--r must be >= 0")
    cfg, model = _model_from_arg(args.model)
    unit = _parse_unit(model, args.unit)
    ball = model.ball(unit, args.r)
    dot = ball_to_dot(ball)
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(dot)
    else:
        sys.stdout.write(dot)
    print(f"vertices={ball.num_vertices} edges={len(ball.edges)}", file=sys.stderr)
    return 0


def cmd_algebra_growth(args) -> int:
    n_max = _positive("--n-max", args.n_max)
    field = parse_field(args.field)
    cfg, lang = _language_from_args_depth(args, 2 * n_max + 1)
    dims = sa.growth_dims(lang, n_max, field)
    if args.oracle_upto:
        from .verify import _bruteforce_dims

        k = min(args.oracle_upto, n_max)
        if dims[:k] != _bruteforce_dims(lang, k, field)[:k]:
            raise IdentityError("levelwise growth disagrees with brute-force oracle")
    rows = []
    for n, dim in dims:
        lower = (n // 2) * lang.complexity(n // 2)
        upper = (2 * n + 1) * lang.complexity(2 * n)
        rows.append([n, dim, lower, upper, lower <= dim <= upper])
    if not all(r[4] for r in rows):
        raise IdentityError("growth bound floor(n/2)p(floor(n/2)) <= dim V^n <= (2n+1)p(2n) violated")
    _emit_csv(
        args.csv,
        ["n", "dim", "lower_bound", "upper_bound", "bound_ok"],
        rows,
        {"cmd": "algebra-growth", "source": cfg, "n_max": n_max, "field": args.field},
    )
    return 0


def _language_from_args_depth(args, depth: int):
    cfg = _load_json_arg(args.source)
    source = source_from_config(cfg)
    budget = getattr(args, "budget", None) or max(8192, 40 * depth * depth)
    return cfg, build_language(source, n_max=depth, prefix_budget=budget)


def cmd_semigroup_growth(args) -> int:
    n_max = _positive("--n-max", args.n_max)
    cfg, lang = _language_from_args(args, n_max)
    rows = [[n, d] for n, d in sa.semigroup_dims(lang, n_max)]
    _emit_csv(args.csv, ["n", "dim"], rows, {"cmd": "semigroup-growth", "source": cfg, "n_max": n_max})
    return 0


def cmd_module_growth(args) -> int:
    n_max = _positive("--n-max", args.n_max)
    field = parse_field(args.field)
    cfg, lang = _language_from_args_depth(args, 2 * n_max + 1)
    rows = [[n, d, 2 * n + 1] for n, d in sa.module_growth(lang, n_max, field)]
    _emit_csv(
        args.csv,
        ["n", "dim", "gamma"],
        rows,
        {"cmd": "module-growth", "source": cfg, "n_max": n_max, "field": args.field},
    )
    return 0


def cmd_expansive(args) -> int:
    n = _positive("--n", args.n)
    cfg, lang = _language_from_args_depth(args, 2 * n)
    rows = []
    for m in range(1, n + 1):
        rep = sa.expansive_certificate(lang, m)
        rows.append([m, rep.window_count, rep.atom_count])
    _emit_csv(args.csv, ["n", "windows", "atoms"], rows, {"cmd": "expansive", "source": cfg, "n": n})
    return 0


def cmd_nucleus(args) -> int:
    group = group_from_spec(_group_arg(args.group))
    nuc = group.nucleus(cap=args.cap)
    names = sorted(mr.element_name(group, s) for s in nuc.states)
    print(f"nucleus size {len(nuc)} (closure complete: {nuc.complete})")
    print("states: " + " ".join(names))
    return 0


def cmd_germ(args) -> int:
    group = group_from_spec(_group_arg(args.group))
    g = group.element(args.element)
    point = EventuallyPeriodicPoint.parse(args.point)
    print("unit" if group.germ_is_unit(g, point) else "nontrivial")
    return 0


def cmd_matrix_recursion(args) -> int:
    group = group_from_spec(_group_arg(args.group))
    field = parse_field(args.field)
    elem = mr.parse_element(group, args.element, field)
    m = mr.image_at_level(elem, _positive("--levels", args.levels))
    if args.print_matrix:
        print(mr.format_matrix(m))
    else:
        print(f"level {m.level}: {len(m.entries)} nonzero entries in {m.size}x{m.size}")
    return 0


def cmd_thinned_growth(args) -> int:
    group = group_from_spec(_group_arg(args.group))
    field = parse_field(args.field)
    n_max = _positive("--n-max", args.n_max)
    res = mr.thinned_growth(group, n_max, field)
    rows = [[n, d, res.level, res.stabilized] for n, d in res.dims]
    _emit_csv(
        args.csv,
        ["n", "dim", "level", "stabilized"],
        rows,
        {"cmd": "thinned-growth", "group": args.group, "n_max": n_max, "field": args.field},
    )
    return 0


def cmd_verify_all(args) -> int:
    if not args.profile:
        raise UsageError("--profile must be 'quick' or 'full'")
    text = report_text(args.profile, seed=args.seed)
    sys.stdout.write(text)
    results = run_checks(args.profile, seed=args.seed)
    return 0 if all(r.ok for r in results) else 1


def _group_arg(text: str):
    text = text.strip()
    if text.startswith("{") or os.path.exists(text):
        return _load_json_arg(text)
    return text  # preset name


# -- argument parsing ------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="groupoid-growth",
        description="Exact growth and complexity of subshift/germ groupoids and their algebras",
    )
    p.add_argument("--seed", type=int, default=0, help="seed for randomized sampling")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("complexity", help="subword complexity p(n)")
    sp.add_argument("--source", required=True)
    sp.add_argument("--n-max", type=int, required=True)
    sp.add_argument("--budget", type=int)
    sp.add_argument("--csv")
    sp.set_defaults(fn=cmd_complexity)

    sp = sub.add_parser("delta", help="groupoid complexity delta(r)")
    sp.add_argument("--model", required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--units-policy", default="windows")
    sp.add_argument("--csv")
    sp.set_defaults(fn=cmd_delta)

    sp = sub.add_parser("ball", help="Cayley-graph ball at a unit (DOT)")
    sp.add_argument("--model", required=True)
    sp.add_argument("--unit", required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--dot")
    sp.set_defaults(fn=cmd_ball)

    sp = sub.add_parser("algebra-growth", help="dim V^n of the subshift algebra")
    sp.add_argument("--source", required=True)
    sp.add_argument("--n-max", type=int, required=True)
    sp.add_argument("--field", default="Q")
    sp.add_argument("--budget", type=int)
    sp.add_argument("--oracle-upto", type=int, default=0)
    sp.add_argument("--csv")
    sp.set_defaults(fn=cmd_algebra_growth)

    sp = sub.add_parser("semigroup-growth", help="dimensions of the semigroup subalgebra")
    sp.add_argument("--source", required=True)
    sp.add_argument("--n-max", type=int, required=True)
    sp.add_argument("--budget", type=int)
    sp.add_argument("--csv")
    sp.set_defaults(fn=cmd_semigroup_growth)

    sp = sub.add_parser("module-growth", help="growth of the module at a point")
    sp.add_argument("--source", required=True)
    sp.add_argument("--n-max", type=int, required=True)
    sp.add_argument("--field", default="Q")
    sp.add_argument("--budget", type=int)
    sp.add_argument("--csv")
    sp.set_defaults(fn=cmd_module_growth)

    sp = sub.add_parser("expansive", help="expansiveness atom counts")
    sp.add_argument("--source", required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--budget", type=int)
    sp.add_argument("--csv")
    sp.set_defaults(fn=cmd_expansive)

    sp = sub.add_parser("nucleus", help="nucleus of a self-similar group")
    sp.add_argument("--group", required=True)
    sp.add_argument("--cap", type=int, default=10_000)
    sp.set_defaults(fn=cmd_nucleus)

    sp = sub.add_parser("germ", help="decide germ triviality at a point")
    sp.add_argument("--group", required=True)
    sp.add_argument("--element", required=True)
    sp.add_argument("--point", required=True, help="'pre|period', e.g. '|1'")
    sp.set_defaults(fn=cmd_germ)

    sp = sub.add_parser("matrix-recursion", help="image of a group-ring element at a level")
    sp.add_argument("--group", required=True)
    sp.add_argument("--element", required=True)
    sp.add_argument("--field", default="Q")
    sp.add_argument("--levels", type=int, required=True)
    sp.add_argument("--print", dest="print_matrix", action="store_true")
    sp.set_defaults(fn=cmd_matrix_recursion)

    sp = sub.add_parser("thinned-growth", help="growth of the thinned algebra")
    sp.add_argument("--group", required=True)
    sp.add_argument("--n-max", type=int, required=True)
    sp.add_argument("--field", default="F2")
    sp.add_argument("--csv")
    sp.set_defaults(fn=cmd_thinned_growth)

    sp = sub.add_parser("verify-all", help="run the full verification suite")
    sp.add_argument("--profile", default="quick", choices=["quick", "full"])
    sp.set_defaults(fn=cmd_verify_all)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _thread_cap()  # validate the parallelism cap early
        return args.fn(args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except RESOURCE_ERRORS as e:
        print(f"resource cap: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except IdentityError as e:
        print(f"identity violated: {e}", file=sys.stderr)
        return EXIT_IDENTITY
    except (ValueError, KeyError, OSError) as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
