"""``rgl`` command line.

Exit codes: 0 found/valid/success, 1 invalid input, 2 finder retries exhausted,
3 none (no cycle, or check failed), 4 unknown (search budget exhausted).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import analysis as an
from . import generators as gen
from .core import (
    GENERAL, MATCHING2, MODES, CycleCertificate, RGCParseError, canonical_edge, read_rgc,
    serialize_rgc, validate, verify_cycle,
)
from .harness import ExperimentConfig, experiment_csv, fmt, format_formula_report, verify_formulas
from .sampler import DEFAULT_RETRIES, N0, FinderFailure, InstanceTooSmall, attempt_stats, find_short_rainbow_cycle
from .search import SearchBudget, find_rainbow_triangle, girth_exact, rainbow_girth_exact

EXIT_OK, EXIT_INVALID, EXIT_EXHAUSTED, EXIT_NONE, EXIT_UNKNOWN = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2, which is reserved for an exhausted finder
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _load(path: str):
    try:
        return read_rgc(path)
    except (OSError, UnicodeDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None
    except RGCParseError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _params(args) -> an.TheoremParams:
    try:
        if args.p is None:
            if args.eps is not None:
                raise ValueError("--eps needs --p")
            return an.select_parameters(args.alpha)
        return an.make_params(args.alpha, args.p, args.eps)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _cert_lines(cert: CycleCertificate) -> list[str]:
    lines = ["cycle " + " ".join(map(str, cert.vertices))]
    if cert.colors:
        lines.append("colors " + " ".join(map(str, cert.colors)))
    return lines


def cmd_gen(args) -> int:
    fam = args.family
    try:
        if fam == "stars":
            g, mode = gen.gen_stars(args.n, args.r), GENERAL
        elif fam == "matchings":
            colors = args.n if args.colors is None else args.colors
            g, mode = gen.gen_random_two_matchings(args.n, colors, args.seed), MATCHING2
        elif fam == "hub":
            g, mode = gen.gen_hub(args.colors), MATCHING2
        elif fam == "gadget":
            g, mode = gen.gen_gadget(an.PairType(args.type)), MATCHING2
        elif fam == "k4":
            g, mode = gen.gen_k4_matchings(), MATCHING2
        else:
            g, mode = gen.gen_two_squares(), MATCHING2
    except (ValueError, TypeError, gen.GenerationError) as exc:
        print(f"generation failed: {exc}", file=sys.stderr)
        return EXIT_INVALID
    report = validate(g, mode)
    if not report.ok:
        print(report.summary(), file=sys.stderr)
        return EXIT_INVALID
    text = serialize_rgc(g)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_check(args) -> int:
    g = _load(args.file)
    report = validate(g, args.mode)
    print(report.summary())
    if report.rainbow_digon:
        print("rainbow girth 2 (doubled edge)")
    if args.cycle is None:
        return EXIT_OK if report.ok else EXIT_NONE
    colors = args.colors
    if colors is None:
        cmap = g.color_map()
        try:
            L = len(args.cycle)
            colors = [cmap[canonical_edge(args.cycle[i], args.cycle[(i + 1) % L])] for i in range(L)]
        except (KeyError, ValueError):
            colors = []
    check = verify_cycle(g, CycleCertificate(tuple(args.cycle), tuple(colors)))
    print(f"cycle: {check}")
    return EXIT_OK if check.valid and check.rainbow else EXIT_NONE


def cmd_girth(args) -> int:
    g = _load(args.file)
    found = girth_exact(g.edges(), g.n)
    if found is None:
        print("girth none")
        return EXIT_NONE
    length, cert = found
    print(f"girth {length}")
    print("\n".join(_cert_lines(cert)))
    return EXIT_OK


def cmd_rainbow_girth(args) -> int:
    g = _load(args.file)
    res = rainbow_girth_exact(g, SearchBudget(args.max_nodes, args.max_len))
    print(f"rainbow_girth {res}")
    if res.status == "found":
        print("\n".join(_cert_lines(res.certificate)))
        return EXIT_OK
    return EXIT_NONE if res.status == "none" else EXIT_UNKNOWN


def cmd_triangle(args) -> int:
    g = _load(args.file)
    cert = find_rainbow_triangle(g)
    if cert is None:
        print("triangle none")
        return EXIT_NONE
    print("triangle found")
    print("\n".join(_cert_lines(cert)))
    return EXIT_OK


def cmd_find(args) -> int:
    g = _load(args.file)
    params = _params(args)
    try:
        rep = find_short_rainbow_cycle(g, params, args.seed, args.max_retries)
    except InstanceTooSmall as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_INVALID
    except FinderFailure as exc:
        if not exc.attempts:
            print(str(exc), file=sys.stderr)
            return EXIT_INVALID
        print(f"failure: {exc.reason}")
        for i, (s, x) in enumerate(exc.attempts):
            print(f"attempt {i} size_S {s} X {x}")
        return EXIT_EXHAUSTED
    except ValueError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    check = verify_cycle(g, rep.cycle)
    print("\n".join(rep.lines(timing=args.timing)))
    print(f"verify {check}")
    if args.json:
        record = {
            "alpha": params.alpha, "p": params.p, "eps": params.eps, "delta": params.delta,
            "retries": rep.retries, "size_S": rep.size_S, "X": rep.X, "k": rep.k,
            "bound": rep.bound, "cycle": list(rep.cycle.vertices), "colors": list(rep.cycle.colors),
        }
        print(json.dumps(record, sort_keys=True))
    return EXIT_OK


def cmd_trials(args) -> int:
    g = _load(args.file)
    params = _params(args)
    try:
        stats = attempt_stats(g, params, args.seed, args.trials)
    except ValueError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    print(f"# p={fmt(params.p)} eps={fmt(params.eps)} alpha={fmt(params.alpha)} seed={args.seed}")
    print("trial,size_S,X,success")
    for i, s in enumerate(stats):
        print(f"{i},{s.size_S},{s.X},{fmt(s.success)}")
    return EXIT_OK


def cmd_experiment(args) -> int:
    try:
        config = ExperimentConfig(
            n_list=args.n, trials=args.trials, base_seed=args.seed, alpha=args.alpha,
            p=args.p, eps=args.eps, max_retries=args.max_retries, timing=args.timing,
            color_factor=args.color_factor,
        )
        config.params()
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    text = experiment_csv(config, workers=args.workers)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_verify_formulas(args) -> int:
    rep = verify_formulas(args.step)
    sys.stdout.write(format_formula_report(rep))
    return EXIT_OK if rep.ok else EXIT_INVALID


def cmd_census(args) -> int:
    g = _load(args.file)
    report = validate(g, MATCHING2)
    if not report.ok:
        print(report.summary(), file=sys.stderr)
        return EXIT_INVALID
    census = an.pair_census(g)
    for name, count in census.as_dict().items():
        print(f"{name} {count}")
    print(f"total {census.total}")
    if args.p is not None:
        var = an.variance_exact(g, args.p)
        ex2 = (g.num_colors * an.marginal_prob(args.p)) ** 2
        print(f"var_X {fmt(var)}")
        print(f"EX_squared {fmt(ex2)}")
        print(f"ratio {fmt(var / ex2) if ex2 else 'nan'}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="rgl", description="Rainbow cycles in 2-matching colorings.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen", help="generate an instance in RGC format")
    p.add_argument("family", choices=gen.FAMILIES)
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--colors", type=int)
    p.add_argument("--type", default="TypeI", choices=[t.value for t in an.PairType])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("check", help="validate an instance, optionally a cycle")
    p.add_argument("file")
    p.add_argument("--mode", choices=MODES, default=MATCHING2)
    p.add_argument("--cycle", type=int, nargs="+")
    p.add_argument("--colors", type=int, nargs="+")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("girth", help="exact girth of the union graph")
    p.add_argument("file")
    p.set_defaults(func=cmd_girth)

    p = sub.add_parser("rainbow-girth", help="exact rainbow girth (budgeted)")
    p.add_argument("file")
    p.add_argument("--max-nodes", type=int, default=10**7)
    p.add_argument("--max-len", type=int)
    p.set_defaults(func=cmd_rainbow_girth)

    p = sub.add_parser("triangle", help="find a rainbow triangle")
    p.add_argument("file")
    p.set_defaults(func=cmd_triangle)

    def param_flags(p):
        p.add_argument("--alpha", type=float, default=1.0)
        p.add_argument("--p", type=float)
        p.add_argument("--eps", type=float)
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("find", help=f"sample a short rainbow cycle (n >= {N0})")
    p.add_argument("file")
    param_flags(p)
    p.add_argument("--max-retries", type=int, default=DEFAULT_RETRIES)
    p.add_argument("--json", action="store_true")
    p.add_argument("--timing", action="store_true")
    p.set_defaults(func=cmd_find)

    p = sub.add_parser("trials", help="per-trial |S|, X and success flags")
    p.add_argument("file")
    param_flags(p)
    p.add_argument("--trials", type=int, default=1000)
    p.set_defaults(func=cmd_trials)

    p = sub.add_parser("experiment", help="finder sweep over n, CSV output")
    p.add_argument("--family", default="matchings", choices=["matchings"])
    p.add_argument("--n", type=int, nargs="+", default=[1024, 4096, 16384])
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--color-factor", type=float, default=1.0)
    param_flags(p)
    p.add_argument("--max-retries", type=int, default=DEFAULT_RETRIES)
    p.add_argument("--workers", type=int)
    p.add_argument("--timing", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("verify-formulas", help="identity checks and oracle-vs-printed table")
    p.add_argument("--step", type=float, default=0.05)
    p.set_defaults(func=cmd_verify_formulas)

    p = sub.add_parser("census", help="pair-type census, optional exact Var X")
    p.add_argument("file")
    p.add_argument("--p", type=float)
    p.set_defaults(func=cmd_census)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
