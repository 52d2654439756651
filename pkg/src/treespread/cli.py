"""Batch command-line front end.

Every verb prints a line-oriented ``key: value`` report (or JSON with
``--json``).  Exact integers are printed in decimal, rationals as ``p/q``;
the only floats are fields explicitly labelled as estimates or approximations.

Exit codes: 0 on success (including reported flag failures), 1 on usage
or input errors, 2 when a hard invariant is violated.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import extremal, family, lll, spread, trees
from ._exact import as_fraction
from .errors import InvariantViolation, TreespreadError
from .io import (
    format_family,
    parse_edge_list,
    parse_events,
    read_family,
    read_forest,
)

EXIT_OK, EXIT_USAGE, EXIT_INVARIANT = 0, 1, 2
THREADS_ENV = "TREESPREAD_THREADS"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _fmt(value):
    if isinstance(value, bool) or value is None:
        return "none" if value is None else str(value).lower()
    if isinstance(value, Fraction):
        return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
    if isinstance(value, (list, tuple)):
        return [_fmt(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _fmt(v) for k, v in value.items()}
    if isinstance(value, float):
        return repr(value)
    return str(value)


class Report:
    def __init__(self, verb: str):
        self.fields: dict[str, object] = {"verb": verb}
        self.payload: str | None = None

    def __setitem__(self, key, value):
        self.fields[key] = value

    def render(self, as_json: bool) -> str:
        data = {k: _fmt(v) for k, v in self.fields.items()}
        if as_json:
            if self.payload is not None:
                data["payload"] = self.payload
            return json.dumps(data, indent=2) + "\n"
        lines = []
        for k, v in data.items():
            if isinstance(v, list):
                v = "[" + ", ".join(map(str, v)) + "]"
            elif isinstance(v, dict):
                v = ", ".join(f"{a}={b}" for a, b in v.items())
            lines.append(f"{k}: {v}")
        out = "\n".join(lines) + "\n"
        if self.payload is not None:
            out = self.payload + ("#\n" + "".join("# " + l + "\n" for l in lines))
        return out


def _rat(text: str) -> Fraction:
    try:
        return as_fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _ranks_str(a: family.SetFamily, s) -> str:
    if s is None:
        return "none"
    edges = a.universe.edges(s)
    return " ".join(map(str, edges)) if edges else "{}"


# -------------------------------------------------------------------- inputs

def _forest_arg(args, path_attr="forest", edges_attr="edges", required=True) -> trees.Forest | None:
    path = getattr(args, path_attr, None)
    edges = getattr(args, edges_attr, None)
    if path:
        f = read_forest(path)
        if getattr(args, "n", None) not in (None, f.n):
            raise UsageError(f"--n {args.n} disagrees with forest file (n = {f.n})")
        return f
    if getattr(args, "n", None) is not None:
        return trees.Forest.of(args.n, parse_edge_list(edges or ""))
    if required:
        raise UsageError(f"missing input: give --{path_attr.replace('_', '-')} or --n")
    return None


def _family_arg(args, attr="family", required=True) -> family.SetFamily | None:
    path = getattr(args, attr, None)
    if path:
        return read_family(path)
    trees_n = getattr(args, "trees", None)
    if attr == "family" and trees_n is not None:
        return family.spanning_tree_family(trees_n)
    if required:
        raise UsageError(f"missing input: give --{attr}" + (" or --trees N" if attr == "family" else ""))
    return None


def _universe_arg(args, a: family.SetFamily) -> family.SetFamily:
    u = _family_arg(args, "universe", required=False)
    return family.spanning_tree_family(a.n) if u is None else u


# -------------------------------------------------------------------- verbs

def cmd_count(args, rep: Report):
    f = _forest_arg(args)
    rep["n"] = f.n
    rep["forest"] = str(f)
    rep["components"] = f.component_sizes()
    rep["count"] = trees.count_containing(f)
    rep["matrix_tree_count"] = trees.matrix_tree_count(f.n, f)
    if args.avoid is not None:
        avoid = parse_edge_list(args.avoid)
        rep["avoid"] = " ".join(map(str, sorted(avoid))) or "{}"
        rep["count_avoiding"] = trees.count_containing_avoiding(f, avoid)
    if args.enumerate:
        avoid = parse_edge_list(args.avoid or "")
        rep["enumeration_count"] = sum(1 for _ in trees.enumerate_trees(f.n, f, avoid, cap=args.cap))
    if rep.fields["count"] != rep.fields["matrix_tree_count"]:
        raise InvariantViolation("closed-form count disagrees with the matrix-tree oracle")


def cmd_enumerate(args, rep: Report):
    f = _forest_arg(args)
    avoid = parse_edge_list(args.avoid or "")
    stream = trees.enumerate_trees(f.n, f, avoid, cap=args.cap)
    fam = family.SetFamily.from_forests(f.n, stream)
    rep["n"] = f.n
    rep["contains"] = str(f)
    rep["trees"] = len(fam)
    _emit_family(args, rep, fam)


def _emit_family(args, rep: Report, fam: family.SetFamily):
    text = format_family(fam)
    if args.output:
        Path(args.output).write_text(text)
        rep["output"] = args.output
    else:
        rep.payload = text


def cmd_sample(args, rep: Report):
    f = _forest_arg(args)
    rep["n"] = f.n
    rep["contains"] = str(f)
    rep["seed"] = args.seed
    rep["samples"] = [str(t) for t in trees.sample_trees_containing(f, args.count, args.seed)]


def cmd_family_op(args, rep: Report):
    op = args.op
    rep["op"] = op
    if op == "binom":
        if args.n is None or args.k is None:
            raise UsageError("binom needs --n and --k")
        res = family.binom_upper_bound(args.n, args.k)
        rep["binomial"] = res.exact
        rep["bound_lower_estimate"] = res.bound
        rep["bound_approx"] = float(res.bound)
        rep["holds"] = res.exact <= res.bound
        return
    a = _family_arg(args)
    rep["family_size"] = len(a)

    def the_set():
        return a.universe.ranks(parse_edge_list(args.set or ""))

    if op in ("restrict", "quotient"):
        out = (family.restrict if op == "restrict" else family.quotient)(a, the_set())
        rep["result_size"] = len(out)
        _emit_family(args, rep, out)
    elif op == "restrict-over":
        s = _family_arg(args, "over")
        out = family.restrict_over_family(a, s)
        rep["result_size"] = len(out)
        _emit_family(args, rep, out)
    elif op == "concentration":
        if args.i is None:
            raise UsageError("concentration needs --i")
        c = family.concentration(a, args.i)
        rep["i"] = args.i
        rep["c"] = c.c
        rep["d"] = c.d
        rep["argmax"] = _ranks_str(a, c.argmax)
    elif op == "intersecting":
        if args.t is None:
            raise UsageError("intersecting needs --t")
        bad = family.t_intersecting_violation(a, args.t)
        rep["t"] = args.t
        rep["t_intersecting"] = bad is None
        if bad is not None:
            rep["violating_pair"] = [_ranks_str(a, bad[0]), _ranks_str(a, bad[1])]
    elif op == "spread-lemma":
        need = {"k": args.k, "r": args.r, "beta": args.beta, "delta": args.delta, "seed": args.seed}
        missing = [k for k, v in need.items() if v is None]
        if missing:
            raise UsageError("spread-lemma needs " + ", ".join("--" + m for m in missing))
        res = family.spread_lemma_empirical(
            a, args.k, args.r, args.beta, args.delta, args.trials, args.seed
        )
        rep["trials"] = res.trials
        rep["seed"] = args.seed
        rep["empirical"] = res.empirical
        rep["paper_bound_approx"] = res.paper_bound
        rep["sigma_approx"] = res.sigma
        rep["spread"] = res.spread
        rep["consistent"] = res.consistent


def cmd_spread_check(args, rep: Report):
    a = _family_arg(args)
    r = args.r if args.r is not None else Fraction(a.n, 2)
    res = family.spreadness_check(a, r, args.t, args.max_size, cap=args.cap, allow_partial=True)
    rep["family_size"] = len(a)
    rep["r"] = res.r
    rep["t"] = res.t
    rep["holds"] = res.holds
    rep["exhaustive"] = res.exhaustive
    rep["max_size"] = res.max_size
    rep["checked"] = res.checked
    rep["worst_ratio"] = res.worst_ratio
    rep["worst_set"] = _ranks_str(a, res.worst_set)
    rep["worst_base"] = _ranks_str(a, res.worst_base)


def cmd_approx(args, rep: Report):
    a = _family_arg(args)
    u = _universe_arg(args, a)
    r = args.r if args.r is not None else Fraction(a.n, 2)
    res = spread.spread_approximation(a, u, args.t, r, args.eps, args.stop)
    rep["family_size"] = len(a)
    rep["universe_size"] = len(u)
    rep["t"] = args.t
    rep["r"] = r
    rep["eps"] = args.eps
    rep["stop_threshold"] = res.stop_threshold
    rep["steps"] = len(res.steps)
    rep["cores"] = [_ranks_str(a, y) for y in res.cores]
    rep["core_sizes"] = [len(y) for y in res.cores]
    rep["removed_per_step"] = [s.size_before - s.size_after for s in res.steps]
    rep["quotients_spread"] = all(s.quotient_report.holds for s in res.steps)
    rep["residual_size"] = len(res.residual)
    rep["flag_cores_small"] = res.cores_small
    rep["flag_cores_t_intersecting"] = res.cores_t_intersecting
    cores = family.SetFamily.of(a.universe, res.cores)
    if len(cores) and not spread.is_trivial(cores, args.t):
        sb = spread.verify_structure_bound(a, cores, args.t, args.eps)
        rep["structure_ratio"] = sb.ratio
        rep["structure_witness"] = _ranks_str(a, sb.witness)


def cmd_density_boost(args, rep: Report):
    a = _family_arg(args)
    u = _universe_arg(args, a)
    res = spread.density_boost_search(a, u, args.t, args.eps, args.delta)
    rep["family_size"] = len(a)
    rep["t"] = args.t
    rep["eps"] = args.eps
    rep["delta"] = args.delta
    rep["target_size"] = res.target_size
    rep["x"] = _ranks_str(a, res.x)
    rep["ratio"] = res.ratio
    rep["threshold_approx"] = res.threshold
    rep["flag_meets_threshold"] = res.meets_threshold
    rep["boost_set"] = _ranks_str(a, res.boost_set)
    rep["flag_boost_set_small"] = res.boost_set_small
    rep["incidence"] = res.incidence
    rep["flag_delta_admissible"] = res.delta_admissible


def _event_system(args) -> lll.EventSystem:
    base = _forest_arg(args, "base", "base_edges")
    events = [trees.Forest.of(base.n, parse_edge_list(e)) for e in args.event or []]
    if args.events:
        events += parse_events(Path(args.events).read_text(), base.n)
    for path in args.event_forest or []:
        events.append(read_forest(path))
    return lll.EventSystem(base.n, base, tuple(events))


def cmd_lll(args, rep: Report):
    sys_ = _event_system(args)
    k = len(sys_)
    if not k:
        raise UsageError("lll needs at least one event")
    if not args.x:
        raise UsageError("lll needs --x")
    xs = list(args.x)
    if len(xs) == 1:
        xs = xs * k
    cert = lll.lll_bound(sys_, xs, exact_check=not args.no_exact)
    rep["n"] = sys_.n
    rep["base"] = str(sys_.base)
    rep["events"] = [str(h) for h in sys_.events]
    rep["probabilities"] = list(cert.probabilities)
    rep["dependency_edges"] = [f"{i}-{j}" for i, j in cert.graph.edges()]
    rep["x"] = list(cert.x)
    rep["condition_ok"] = list(cert.condition_ok)
    rep["all_conditions_ok"] = cert.all_ok
    rep["bound"] = cert.bound
    rep["exact_none_probability"] = cert.exact_none
    if args.negdep is not None:
        res = lll.verify_negative_dependency(
            sys_, args.negdep, args.condition or [], method=args.method,
            samples=args.samples, seed=args.seed,
        )
        rep["negdep_event"] = args.negdep
        rep["negdep_conditional"] = res.conditional
        rep["negdep_unconditional"] = res.unconditional
        rep["negdep_ok"] = res.ok


def cmd_avoid_bound(args, rep: Report):
    base = _forest_arg(args, "base", "base_edges")
    t0 = read_forest(args.t0)
    res = lll.avoiding_fraction_bound(base, t0)
    rep["n"] = base.n
    rep["base"] = str(base)
    rep["t0"] = str(t0)
    rep["avoided_edges"] = res.events
    rep["count"] = res.count
    rep["base_count"] = res.base_count
    rep["exact_fraction"] = res.exact_fraction
    rep["exact_fraction_quotient_normalized"] = Fraction(res.count, res.quotient_count)
    rep["star_like_12"] = res.star_like
    rep["lll_bound"] = res.lll_bound
    rep["flag_meets_lll"] = res.meets_lll
    rep["flag_meets_one_hundredth"] = res.meets_hundredth


def cmd_construct(args, rep: Report):
    forest = read_forest(args.forest) if args.forest else None
    spec = extremal.ConstructionSpec(args.kind, args.n, args.t, forest)
    fam = extremal.construct(spec)
    rep["kind"] = args.kind
    rep["n"] = args.n
    rep["size"] = len(fam)
    if args.t is not None:
        rep["t_intersecting"] = family.is_t_intersecting(fam, args.t)
    _emit_family(args, rep, fam)


def _extremal_fields(rep: Report, res: extremal.ExtremalReport):
    rep["n"] = res.n
    rep["t"] = res.t
    rep["exact_max" if res.exact else "max_lower_bound"] = res.exact_max
    rep["exact"] = res.exact
    rep["construction_size"] = res.construction_size
    rep["constructions"] = res.constructions
    rep["paper_bound"] = res.paper_bound
    rep["search_nodes"] = res.nodes


def cmd_extremal(args, rep: Report):
    res = extremal.max_t_intersecting_exact(args.n, args.t, args.budget)
    _extremal_fields(rep, res)
    if args.output:
        Path(args.output).write_text(format_family(res.witness_family))
        rep["witness_output"] = args.output


def cmd_verify_bound(args, rep: Report):
    res = extremal.verify_main_bound(args.n, args.t, args.budget)
    _extremal_fields(rep, res)
    rep["flag_max_within_bound"] = res.within_bound
    rep["flag_construction_exceeds_bound"] = res.construction_exceeds_bound


def cmd_selftest(args, rep: Report):
    from .selftest import run_selftest

    results = run_selftest(max_n=args.max_n)
    rep["checks"] = len(results)
    for name, ok in results:
        rep[name] = ok
    if not all(ok for _, ok in results):
        raise InvariantViolation("selftest: " + ", ".join(n for n, ok in results if not ok))


# -------------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="treespread", description=__doc__.split("\n")[0])
    p.add_argument("--json", action="store_true", help="emit the report as JSON")
    p.add_argument("--threads", type=int, default=None, help="worker cap (default $%s)" % THREADS_ENV)
    sub = p.add_subparsers(dest="verb", parser_class=_Parser)

    def forest_opts(sp, prefix="", path_name="forest"):
        sp.add_argument(f"--{path_name}", help="forest file")
        sp.add_argument("--n", type=int)
        sp.add_argument(f"--{prefix}edges", help='inline edges, e.g. "1-2 3-4"')

    sp = sub.add_parser("count", help="trees containing a forest (closed form + oracles)")
    forest_opts(sp)
    sp.add_argument("--avoid", help="edges the trees must avoid")
    sp.add_argument("--enumerate", action="store_true", help="also count by enumeration")
    sp.add_argument("--cap", type=int, default=trees.DEFAULT_ENUMERATION_CAP)
    sp.set_defaults(func=cmd_count)

    sp = sub.add_parser("enumerate", help="list trees containing/avoiding edges (family format)")
    forest_opts(sp)
    sp.add_argument("--avoid")
    sp.add_argument("--cap", type=int, default=trees.DEFAULT_ENUMERATION_CAP)
    sp.add_argument("--output")
    sp.set_defaults(func=cmd_enumerate)

    sp = sub.add_parser("sample", help="uniform trees containing a forest")
    forest_opts(sp)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--count", type=int, default=1)
    sp.set_defaults(func=cmd_sample)

    sp = sub.add_parser("family-op", help="restriction, quotient, concentration, ...")
    sp.add_argument("--op", required=True, choices=[
        "restrict", "quotient", "restrict-over", "concentration", "intersecting",
        "binom", "spread-lemma",
    ])
    sp.add_argument("--family")
    sp.add_argument("--trees", type=int, help="use all spanning trees of K_N")
    sp.add_argument("--set", help="edge set for restrict/quotient")
    sp.add_argument("--over", help="family file for restrict-over")
    sp.add_argument("--i", type=int)
    sp.add_argument("--t", type=int)
    sp.add_argument("--n", type=int)
    sp.add_argument("--k", type=int)
    sp.add_argument("--r", type=_rat)
    sp.add_argument("--beta", type=_rat)
    sp.add_argument("--delta", type=_rat)
    sp.add_argument("--trials", type=int, default=10_000)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--output")
    sp.set_defaults(func=cmd_family_op)

    sp = sub.add_parser("spread-check", help="exact r-spread / (r,t)-spread check")
    sp.add_argument("--family")
    sp.add_argument("--trees", type=int)
    sp.add_argument("--r", type=_rat)
    sp.add_argument("--t", type=int)
    sp.add_argument("--max-size", type=int)
    sp.add_argument("--cap", type=int, default=family.DEFAULT_SUBSET_CAP)
    sp.set_defaults(func=cmd_spread_check)

    sp = sub.add_parser("approx", help="iterative spread-approximation peeling")
    sp.add_argument("--family", required=True)
    sp.add_argument("--universe", help="ambient family (default: all spanning trees)")
    sp.add_argument("--t", type=int, required=True)
    sp.add_argument("--r", type=_rat)
    sp.add_argument("--eps", type=_rat, default=Fraction(1))
    sp.add_argument("--stop", type=_rat)
    sp.set_defaults(func=cmd_approx)

    sp = sub.add_parser("density-boost", help="exhaustive density-boost search")
    sp.add_argument("--family", required=True)
    sp.add_argument("--universe")
    sp.add_argument("--t", type=int, required=True)
    sp.add_argument("--eps", type=_rat, default=Fraction(1))
    sp.add_argument("--delta", type=_rat, required=True)
    sp.set_defaults(func=cmd_density_boost)

    sp = sub.add_parser("lll", help="lopsided local lemma certificate")
    sp.add_argument("--base", help="base forest file")
    sp.add_argument("--n", type=int)
    sp.add_argument("--base-edges")
    sp.add_argument("--event", action="append", help='inline event forest, e.g. "3-4"')
    sp.add_argument("--events", help="event list file")
    sp.add_argument("--event-forest", action="append", help="event as a forest file")
    sp.add_argument("--x", type=_rat, action="append", help="x value (one for all, or one per event)")
    sp.add_argument("--no-exact", action="store_true")
    sp.add_argument("--negdep", type=int, help="also check negative dependency for this event")
    sp.add_argument("--condition", type=int, action="append")
    sp.add_argument("--method", choices=["exact", "monte_carlo"], default="exact")
    sp.add_argument("--samples", type=int, default=100_000)
    sp.add_argument("--seed", type=int)
    sp.set_defaults(func=cmd_lll)

    sp = sub.add_parser("avoid-bound", help="fraction of trees avoiding T0 minus the base")
    sp.add_argument("--base")
    sp.add_argument("--n", type=int)
    sp.add_argument("--base-edges")
    sp.add_argument("--t0", required=True, help="forest file for T0")
    sp.set_defaults(func=cmd_avoid_bound)

    sp = sub.add_parser("construct", help="build a named construction (family format)")
    sp.add_argument("--kind", required=True, choices=list(extremal.KINDS))
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--t", type=int)
    sp.add_argument("--forest")
    sp.add_argument("--output")
    sp.set_defaults(func=cmd_construct)

    for name, func, help_ in (
        ("extremal", cmd_extremal, "exact maximum t-intersecting family"),
        ("verify-bound", cmd_verify_bound, "maximum vs 2^t n^(n-t-2) vs constructions"),
    ):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--n", type=int, required=True)
        sp.add_argument("--t", type=int, required=True)
        sp.add_argument("--budget", type=int, default=20_000_000, help="search-node budget")
        if name == "extremal":
            sp.add_argument("--output", help="write the witness family here")
        sp.set_defaults(func=func)

    sp = sub.add_parser("selftest", help="run the invariant suite at small n")
    sp.add_argument("--max-n", type=int, default=6)
    sp.set_defaults(func=cmd_selftest)
    return p


def resolve_threads(value: int | None) -> int:
    if value is None:
        env = os.environ.get(THREADS_ENV)
        value = int(env) if env and env.isdigit() else 1
    if value < 1:
        raise UsageError("--threads must be at least 1")
    return value


def parse(argv: list[str]) -> argparse.Namespace:
    """Validate a token list into a command namespace (raises UsageError)."""
    args = build_parser().parse_args(argv)
    if args.verb is None:
        raise UsageError("treespread: missing verb")
    args.threads = resolve_threads(args.threads)
    return args


def execute(args: argparse.Namespace) -> Report:
    rep = Report(args.verb)
    rep["threads"] = args.threads
    start = time.perf_counter()
    args.func(args, rep)
    rep["elapsed_seconds"] = round(time.perf_counter() - start, 6)
    return rep


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        args = parse(argv)
        rep = execute(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvariantViolation as exc:
        print(f"invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (TreespreadError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(rep.render(args.json))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
