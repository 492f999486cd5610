"""Command-line interface.

Exit codes: 0 universally rigid / solved, 1 not universally rigid (generic)
/ infeasible, 2 indeterminate / out of scope / unbounded / iteration limit,
3 usage or I/O error.
"""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import core
from .linalg import default_tol
from .rigidity import (
    Verdict,
    certificate_from_dict,
    certificate_to_dict,
    certify_universal_rigidity,
    check_certificate,
    classify_hierarchy,
)
from .sdp import (
    build_embedding_sdp,
    check_complementarity,
    load_problem,
    problem_to_dict,
    solution_to_dict,
    solve,
)

EXIT_OK, EXIT_NEGATIVE, EXIT_UNDECIDED, EXIT_USAGE = 0, 1, 2, 3

VERDICT_EXIT = {
    Verdict.UNIVERSALLY_RIGID: EXIT_OK,
    Verdict.NOT_UNIVERSALLY_RIGID_GENERIC: EXIT_NEGATIVE,
    Verdict.INDETERMINATE: EXIT_UNDECIDED,
    Verdict.OUT_OF_SCOPE: EXIT_UNDECIDED,
}
STATUS_EXIT = {
    "optimal": EXIT_OK,
    "infeasible_suspect": EXIT_NEGATIVE,
    "unbounded_suspect": EXIT_UNDECIDED,
    "max_iter": EXIT_UNDECIDED,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _write_json(data, path):
    text = json.dumps(data, indent=2) + "\n"
    if path is None or str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _read_json(path):
    with open(path) as fh:
        return json.load(fh)


def cmd_gen(args):
    kind, n, d = args.kind, args.n, args.dim
    if kind == "complete":
        graph = core.complete_graph(n)
    elif kind == "cycle":
        graph = core.cycle_graph(n)
    elif kind == "path":
        graph = core.path_graph(n)
    else:
        graph = core.trilateration_graph(n, d, args.seed)
    config = core.sample_pseudo_generic_configuration(n, d, args.seed)
    f = core.Framework(graph, config)
    data = core.framework_to_dict(f)
    _write_json(data, args.output)
    if args.output not in (None, "-"):
        print(f"wrote {kind} framework v={f.v} e={f.e} d={f.d} to {args.output}")
    return EXIT_OK


def _certify_one(path, rel_tol, gap_tol, max_iter):
    f = core.load_framework(path)
    cert = certify_universal_rigidity(f, rel_tol=rel_tol, gap_tol=gap_tol, max_iter=max_iter)
    return certificate_to_dict(cert)


def _certificate_paths(inputs, output):
    if len(inputs) == 1:
        return [output]
    if output is None:
        return [Path(p).with_suffix(".cert.json") for p in inputs]
    out = Path(output)
    out.mkdir(parents=True, exist_ok=True)
    return [out / (Path(p).stem + ".cert.json") for p in inputs]


def cmd_certify(args):
    inputs = args.input
    outputs = _certificate_paths(inputs, args.output)
    work = [(p, args.tol, args.gap_tol, args.max_iter) for p in inputs]
    if args.jobs > 1 and len(inputs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_certify_one, *zip(*work)))
    else:
        results = [_certify_one(*w) for w in work]
    code = EXIT_OK
    for path, out, data in zip(inputs, outputs, results):
        if out is not None:
            _write_json(data, out)
        t = data["t_star"]
        t_txt = "n/a" if t is None else f"{t:.3e}"
        print(f"{data['verdict']} {path} rank={data['achieved_rank']}/{data['target_rank']} t*={t_txt}")
        code = max(code, VERDICT_EXIT[Verdict(data["verdict"])])
    return code


def cmd_verify(args):
    f = core.load_framework(args.input)
    verdict, phi = certificate_from_dict(_read_json(args.certificate))
    if verdict is Verdict.UNIVERSALLY_RIGID:
        ok, problems = check_certificate(f, phi, args.tol)
        reproduced = Verdict.UNIVERSALLY_RIGID if ok else Verdict.INDETERMINATE
    else:
        cert = certify_universal_rigidity(f, rel_tol=args.tol, gap_tol=args.gap_tol, max_iter=args.max_iter)
        reproduced, problems = cert.verdict, list(cert.diagnostics)
    report = {
        "claimed": verdict.value,
        "reproduced": reproduced.value,
        "match": reproduced is verdict,
        "problems": problems,
    }
    if args.output is not None:
        _write_json(report, args.output)
    print(f"{reproduced.value} {args.input} match={report['match']}")
    return VERDICT_EXIT[reproduced]


def cmd_classify(args):
    f = core.load_framework(args.input)
    report = classify_hierarchy(f, seed=args.seed, rel_tol=args.tol, gap_tol=args.gap_tol, max_iter=args.max_iter)
    if args.output is not None:
        _write_json(report.to_dict(), args.output)
    suffix = "" if report.consistent else " (inconsistent)"
    print(f"{report.level.value} {args.input}{suffix}")
    return EXIT_OK if report.consistent else EXIT_UNDECIDED


def cmd_sdp(args):
    if args.action == "embed":
        prob = build_embedding_sdp(core.load_framework(args.input))
        _write_json(problem_to_dict(prob), args.output)
        return EXIT_OK
    if args.action == "check":
        data = _read_json(args.input)
        try:
            X, Omega = np.asarray(data["X"], float), np.asarray(data["Omega"], float)
        except KeyError as exc:
            raise UsageError(f"complementarity input needs key {exc}") from None
        report = check_complementarity(X, Omega, data.get("dim_L"), args.tol)
        if args.output is not None:
            _write_json(report.to_dict(), args.output)
        print(
            f"complementary={report.complementary} strict={report.strictly_complementary} "
            f"rank_x={report.rank_x} rank_omega={report.rank_omega} n={report.n}"
        )
        return EXIT_OK if report.complementary else EXIT_NEGATIVE
    prob = load_problem(args.input)
    sol = solve(prob, gap_tol=args.gap_tol, max_iter=args.max_iter)
    if args.output is not None:
        _write_json(solution_to_dict(sol), args.output)
    print(f"{sol.status} value={sol.primal_objective:.10g} gap={sol.gap:.3e} iterations={sol.iterations}")
    return STATUS_EXIT[sol.status]


def build_parser():
    parser = _Parser(prog="unirigid", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def tol_flags(p):
        p.add_argument("--tol", type=float, default=None, help="relative rank tolerance (default 1e-8 or $RIGIDITY_DEFAULT_TOL)")
        p.add_argument("--gap-tol", type=float, default=1e-10, help="SDP duality-gap tolerance")
        p.add_argument("--max-iter", type=int, default=100, help="SDP iteration limit")

    p = sub.add_parser("gen", help="write a framework JSON file")
    p.add_argument("kind", choices=["complete", "cycle", "path", "trilateration"])
    p.add_argument("n", type=int, help="number of vertices")
    p.add_argument("--dim", "-d", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("certify", help="certify universal rigidity")
    p.add_argument("--input", "-i", action="append", required=True)
    p.add_argument("--output", "-o", default=None)
    p.add_argument("--jobs", "-j", type=int, default=1)
    tol_flags(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("verify", help="re-check a stored certificate")
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--certificate", "-c", required=True)
    p.add_argument("--output", "-o", default=None)
    tol_flags(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("classify", help="place a framework in the rigidity hierarchy")
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--output", "-o", default=None)
    p.add_argument("--seed", type=int, default=0)
    tol_flags(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("sdp", help="solve an SDP, check complementarity, or build an embedding SDP")
    p.add_argument("action", choices=["solve", "check", "embed"])
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--output", "-o", default=None)
    tol_flags(p)
    p.set_defaults(func=cmd_sdp)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "tol", None) is None and hasattr(args, "tol"):
        args.tol = default_tol()
    try:
        return args.func(args)
    except (OSError, ValueError, UsageError, json.JSONDecodeError) as exc:
        print(f"unirigid: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
