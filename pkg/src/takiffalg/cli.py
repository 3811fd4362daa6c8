"""Command-line surface: one verb per library area plus the scenario
runner.  All output is exact; --format json prints the canonical
serializations."""

from __future__ import annotations

import argparse
import json
import sys

from .autos import (eigenspace_grading, identity_automorphism,
                    inner_from_torus, outer_involution)
from .contract import as_quasi, contract
from .invariants import coadjoint_index, invariant_basis, poincare
from .liealg import construct_classical, validate
from .scalars import lcm
from .takiff import takiff
from .verify import run_scenario

EXIT_INPUT_ERROR = 3


def _add_common(p):
    p.add_argument("--kind", choices=("gl", "sl", "so", "sp"), required=True)
    p.add_argument("--size", type=int, required=True,
                   help="defining matrix size n")
    p.add_argument("--conductor", type=int, default=None,
                   help="cyclotomic conductor to compute at")
    p.add_argument("--theta", default=None,
                   help="automorphism: neg_transpose | neg_sympl_transpose | "
                        "conj_by_reflection | torus:w1,w2,...@order | identity")
    p.add_argument("--takiff-m", type=int, default=None,
                   help="replace the algebra by its Takiff algebra of level m")
    p.add_argument("--contracted", action="store_true",
                   help="replace the algebra by the contraction of the "
                        "automorphism eigenspace grading")
    p.add_argument("--format", choices=("text", "json"), default="text")


def _theta_order_hint(spec: str | None) -> int:
    if spec is None or spec == "identity":
        return 1
    if spec.startswith("torus:"):
        return int(spec.rsplit("@", 1)[1])
    return 2


def _build(args):
    conductor = args.conductor or _theta_order_hint(args.theta)
    g = construct_classical(args.kind, args.size).with_conductor(
        lcm(conductor, 1))
    theta = None
    if args.theta and args.theta != "identity":
        if args.theta.startswith("torus:"):
            body = args.theta[len("torus:"):]
            weights, order = body.rsplit("@", 1)
            theta = inner_from_torus(
                g, tuple(int(w) for w in weights.split(",")), int(order))
        else:
            theta = outer_involution(g, args.theta)
    elif args.theta == "identity":
        theta = identity_automorphism(g)
    alg = g
    if args.contracted:
        if theta is None:
            raise SystemExit("--contracted needs --theta")
        alg = contract(as_quasi(eigenspace_grading(theta)))
    if args.takiff_m:
        alg = takiff(alg, args.takiff_m).underlying
    return g, theta, alg


def _emit(args, text_lines, payload):
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        for line in text_lines:
            print(line)


def cmd_construct(args):
    _, _, alg = _build(args)
    rep = validate(alg)
    _emit(args, [f"{args.kind}_{args.size}: dim {alg.dim}, "
                 f"conductor {alg.conductor}, "
                 f"{len(alg.brackets)} bracket pairs, "
                 f"jacobi {'ok' if rep.ok else 'FAILED'}"],
          alg.to_json())
    return 0 if rep.ok else 1


def cmd_grade(args):
    g, theta, _ = _build(args)
    if theta is None:
        raise SystemExit("grade needs --theta")
    grading = eigenspace_grading(theta)
    _emit(args, [f"automorphism order {theta.order}; "
                 f"block dims {grading.block_dims()}"],
          grading.to_json())
    return 0


def cmd_takiff(args):
    g, _, _ = _build(args)
    m = args.takiff_m or 2
    tk = takiff(g, m)
    rep = validate(tk.underlying)
    _emit(args, [f"takiff level {m}: dim {tk.underlying.dim}, "
                 f"jacobi {'ok' if rep.ok else 'FAILED'}"],
          tk.to_json())
    return 0 if rep.ok else 1


def cmd_contract(args):
    g, theta, _ = _build(args)
    if theta is None:
        raise SystemExit("contract needs --theta")
    grading = eigenspace_grading(theta)
    con = contract(as_quasi(grading))
    rep = validate(con)
    _emit(args, [f"contraction: dim {con.dim}, blocks "
                 f"{grading.block_dims()}, "
                 f"jacobi {'ok' if rep.ok else 'FAILED'}"],
          con.to_json())
    return 0 if rep.ok else 1


def cmd_invariants(args):
    _, _, alg = _build(args)
    series = poincare(alg, args.rep, args.degree)
    payload = {"series": series, "degrees": []}
    for m in range(args.degree + 1):
        basis = invariant_basis(alg, args.rep, m)
        payload["degrees"].append(basis.to_json())
    _emit(args, [f"{args.rep} invariant dimensions 0..{args.degree}: "
                 f"{series}"], payload)
    return 0


def cmd_index(args):
    _, _, alg = _build(args)
    rep = coadjoint_index(alg, trials=args.trials, seed=args.seed,
                          coord_bound=args.bound)
    _emit(args, [f"index <= {rep.value} (dim {alg.dim}, {rep.trials} trials, "
                 f"seed {rep.seed}; equality generic)"], rep.to_json())
    return 0


def cmd_verify(args):
    code, report = run_scenario(args.scenario, seed=args.seed)
    if args.format == "json":
        print(json.dumps(report, indent=2, default=str))
    else:
        print(f"scenario {report.get('scenario', '?')}: "
              f"seed {report.get('seed')}")
        for r in report.get("results", []):
            print(f"  [{r['verdict']:>18}] {r['check']}")
        if "error" in report:
            print(f"  error: {report['error']}")
        print(f"exit {code}")
    return code


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="takiffalg",
        description="Exact Takiff/contraction/invariant computations")
    sub = ap.add_subparsers(dest="command", required=True)

    for name, fn in (("construct", cmd_construct), ("grade", cmd_grade),
                     ("takiff", cmd_takiff), ("contract", cmd_contract)):
        p = sub.add_parser(name)
        _add_common(p)
        p.set_defaults(fn=fn)

    p = sub.add_parser("invariants")
    _add_common(p)
    p.add_argument("--rep", choices=("adjoint", "coadjoint"),
                   default="adjoint")
    p.add_argument("--degree", type=int, default=4)
    p.set_defaults(fn=cmd_invariants)

    p = sub.add_parser("index")
    _add_common(p)
    p.add_argument("--trials", type=int, default=5)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--bound", type=int, default=10)
    p.set_defaults(fn=cmd_index)

    p = sub.add_parser("verify")
    p.add_argument("scenario")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(fn=cmd_verify)

    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT_ERROR if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except SystemExit as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
