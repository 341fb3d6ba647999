"""Command-line front end.

Exit codes: 0 = computed (the verdict, favorable or not, lives in the
report), 1 = input error, 2 = internal error. Reports are deterministic
for fixed inputs and seeds, except for the timing fields.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
import time

from . import __version__
from ._rational import format_rational, rational
from .core import DomainError, load_distribution
from .lp import (
    Feasible,
    LinearSystem,
    dump_system,
    solve_feasibility,
    verify_certificate,
)
from .auxiliary import (
    SubspaceModel,
    linear_basis_aux,
    pairwise_aux_for_network,
)
from .network import (
    CapacityTuple,
    FailsCutset,
    FailsFD,
    aux_spec_to_json,
    build_lp_constraints,
    cutset_check,
    example1_aux,
    example1_problem,
    fd_bound,
    load_aux_spec,
    load_problem,
    save_aux_spec,
)
from .recovery import (
    RecoveryInput,
    build_indicator_family,
    check_permutation_equivalence,
    recover_distribution,
    verify_properties,
)


def _digest(path: str) -> str:
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def _witness_json(witness) -> dict:
    g = witness.ground
    return {
        ",".join(g.subset_names(mask)): format_rational(witness.value(mask))
        for mask in g.subsets()
    }


def _certificate_json(cert, system: LinearSystem) -> list:
    return [
        {
            "constraint": system.constraints[i].render(system.ground),
            "index": i,
            "multiplier": format_rational(rational(mult)),
        }
        for i, mult in sorted(cert.items())
    ]


def _emit(report: dict, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(report, indent=2, default=str))
        return
    print(f"status: {report['status']}")
    for key, value in report.items():
        if key in ("status", "command", "version", "inputs", "timing"):
            continue
        if isinstance(value, (list, dict)):
            print(f"{key}:")
            text = json.dumps(value, indent=2, default=str)
            print("\n".join("  " + line for line in text.splitlines()))
        else:
            print(f"{key}: {value}")


def _base_report(args, status: str, **payload) -> dict:
    report = {
        "command": args.command_echo,
        "version": __version__,
        "status": status,
        "inputs": getattr(args, "digests", {}),
    }
    report.update(payload)
    report["timing"] = {"seconds": round(time.time() - args.t0, 3)}
    return report


def _load_problem_arg(args):
    digests = {}
    if getattr(args, "problem", None):
        p = load_problem(args.problem)
        digests[args.problem] = _digest(args.problem)
    else:
        p = example1_problem()
    args.digests = digests
    return p


def _capacities_arg(args, p):
    if getattr(args, "capacities", None):
        return CapacityTuple.parse(args.capacities, p)
    return None


def _run_bound(args) -> dict:
    p = _load_problem_arg(args)
    C = _capacities_arg(args, p)
    if args.bound_command == "check" or args.bound_command == "improve":
        aux = None
        if args.bound_command == "improve":
            if getattr(args, "aux", None):
                aux = load_aux_spec(args.aux)
                args.digests[args.aux] = _digest(args.aux)
            else:
                aux, _ = pairwise_aux_for_network(p, "gk")
        sys_ = build_lp_constraints(p, C, aux=aux)
        res = solve_feasibility(sys_)
        if isinstance(res, Feasible):
            return _base_report(
                args,
                "Feasible (tuple may be achievable)",
                witness=_witness_json(res.witness),
                verified=verify_certificate(sys_, res),
            )
        return _base_report(
            args,
            "Infeasible (tuple is not achievable)",
            certificate=_certificate_json(res.certificate, sys_),
            verified=verify_certificate(sys_, res),
        )
    if args.bound_command == "cutset":
        res = cutset_check(p, C)
        if isinstance(res, FailsCutset):
            return _base_report(
                args,
                "FailsCutset",
                cut_nodes=list(res.cut_nodes),
                sources=list(res.sources),
                lhs=format_rational(rational(res.lhs)),
                rhs=format_rational(rational(res.rhs)),
            )
        return _base_report(args, "PassesCutset", cuts_checked=res.cuts_checked)
    res = fd_bound(p, C)
    if isinstance(res, FailsFD):
        return _base_report(
            args,
            "FailsFD",
            sources=list(res.sources),
            edge_set=list(res.edge_set),
            lhs=format_rational(rational(res.lhs)),
            rhs=format_rational(rational(res.rhs)),
        )
    return _base_report(args, "PassesFD", warnings=list(res.warnings))


def _run_aux(args) -> dict:
    if args.aux_command == "linear":
        with open(args.model) as fh:
            data = json.load(fh)
        args.digests = {args.model: _digest(args.model)}
        model = SubspaceModel(data["q"], data["m"], data["generators"])
        spec, rows = linear_basis_aux(model)
        if args.out:
            save_aux_spec(spec, args.out)
        return _base_report(
            args, "computed", aux=aux_spec_to_json(spec), rows=len(rows), out=args.out
        )
    p = _load_problem_arg(args)
    if args.aux_command == "gk":
        spec, rows = pairwise_aux_for_network(p, "gk")
        if args.out:
            save_aux_spec(spec, args.out)
        return _base_report(args, "computed", aux=aux_spec_to_json(spec), out=args.out)
    spec, rows = pairwise_aux_for_network(
        p,
        "delta",
        seed=args.seed,
        resolution=args.resolution,
        restarts=args.restarts,
    )
    if args.out:
        save_aux_spec(spec, args.out)
    return _base_report(args, "computed", aux=aux_spec_to_json(spec), out=args.out)


def _run_recover(args) -> dict:
    if args.self_test:
        if args.seed is None:
            raise DomainError("--seed is required for --self-test")
        rng = random.Random(args.seed)
        failures = []
        for t in range(args.trials):
            raw = sorted((rng.random() for _ in range(args.n)), reverse=True)
            total = sum(raw)
            p = [v / total for v in raw]
            family = build_indicator_family(p)
            rec = recover_distribution(RecoveryInput.from_family(family, shuffle_seed=t))
            if not check_permutation_equivalence(rec.probabilities, p):
                failures.append({"trial": t, "expected": p, "got": list(rec.probabilities)})
        status = "all trials passed" if not failures else "failures"
        return _base_report(
            args, status, trials=args.trials, n=args.n, failures=failures
        )
    if args.distribution:
        args.digests = {args.distribution: _digest(args.distribution)}
        dist = load_distribution(args.distribution)
        family = build_indicator_family(dist)
        rec = recover_distribution(
            RecoveryInput.from_family(family, shuffle_seed=args.shuffle_seed)
        )
        return _base_report(
            args,
            "recovered",
            probabilities=list(rec.probabilities),
            provenance=dict(rec.provenance),
        )
    if not args.entropies:
        raise DomainError("one of --self-test, --distribution, --entropies is required")
    args.digests = {args.entropies: _digest(args.entropies)}
    with open(args.entropies) as fh:
        data = json.load(fh)
    if args.n is None:
        raise DomainError("--n is required with --entropies")
    inp = RecoveryInput.from_table(
        args.n, tuple(data["members"]), {k: float(v) for k, v in data["entropies"].items()}
    )
    rec = recover_distribution(inp)
    return _base_report(
        args,
        "recovered",
        probabilities=list(rec.probabilities),
        provenance=dict(rec.provenance),
    )


def _run_verify_properties(args) -> dict:
    args.digests = {args.distribution: _digest(args.distribution)}
    dist = load_distribution(args.distribution)
    report = verify_properties(dist)
    return _base_report(
        args,
        "ok" if report.ok else "violations",
        violations=list(report.violations),
        ties=list(report.ties),
    )


def _run_dump_lp(args) -> dict:
    p = _load_problem_arg(args)
    C = _capacities_arg(args, p)
    aux = None
    if getattr(args, "aux", None):
        aux = load_aux_spec(args.aux)
        args.digests[args.aux] = _digest(args.aux)
    sys_ = build_lp_constraints(p, C, aux=aux)
    return _base_report(
        args,
        "dumped",
        variables=list(sys_.ground.names),
        rows=len(sys_.constraints),
        system=dump_system(sys_).splitlines(),
    )


def _run_example1(args) -> dict:
    args.problem = None
    args.bound_command = "improve" if args.improved else "check"
    args.aux = None
    p = example1_problem()
    args.digests = {}
    C = _capacities_arg(args, p)
    aux = None
    if args.improved == "gk":
        aux = example1_aux()
    elif args.improved:
        raise DomainError(f"unknown improvement mode {args.improved!r}")
    sys_ = build_lp_constraints(p, C, aux=aux)
    res = solve_feasibility(sys_)
    if isinstance(res, Feasible):
        return _base_report(
            args,
            "Feasible (tuple may be achievable)",
            witness=_witness_json(res.witness),
            verified=verify_certificate(sys_, res),
        )
    return _base_report(
        args,
        "Infeasible (tuple is not achievable)",
        certificate=_certificate_json(res.certificate, sys_),
        verified=verify_certificate(sys_, res),
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entrolab",
        description="entropy-vector LP bounds for networks with correlated sources",
    )
    parser.add_argument("--format", choices=("json", "text"), default="text")
    sub = parser.add_subparsers(dest="command", required=True)

    bound = sub.add_parser("bound", help="capacity-tuple outer bounds")
    bsub = bound.add_subparsers(dest="bound_command", required=True)
    for name in ("check", "improve", "cutset", "fd"):
        bp = bsub.add_parser(name)
        bp.add_argument("--problem", help="problem JSON (default: bundled example)")
        bp.add_argument("--capacities", help="e1=1,e2=1/2 or positional 1,1/2,...")
        if name == "improve":
            bp.add_argument("--aux", help="aux-spec JSON (default: pairwise gk)")
        bp.set_defaults(run=_run_bound)

    aux = sub.add_parser("aux", help="construct auxiliary variables")
    asub = aux.add_subparsers(dest="aux_command", required=True)
    gk = asub.add_parser("gk")
    gk.add_argument("--problem")
    gk.add_argument("--out")
    gk.set_defaults(run=_run_aux)
    delta = asub.add_parser("delta")
    delta.add_argument("--problem")
    delta.add_argument("--out")
    delta.add_argument("--seed", type=int, required=True)
    delta.add_argument("--resolution", type=int, default=8)
    delta.add_argument("--restarts", type=int, default=4)
    delta.set_defaults(run=_run_aux)
    linear = asub.add_parser("linear")
    linear.add_argument("--model", required=True, help='{"q":2,"m":3,"generators":{...}}')
    linear.add_argument("--out")
    linear.set_defaults(run=_run_aux)

    recover = sub.add_parser("recover", help="distribution from indicator entropies")
    recover.add_argument("--self-test", action="store_true")
    recover.add_argument("--n", type=int)
    recover.add_argument("--trials", type=int, default=100)
    recover.add_argument("--seed", type=int)
    recover.add_argument("--shuffle-seed", type=int)
    recover.add_argument("--distribution")
    recover.add_argument("--entropies")
    recover.set_defaults(run=_run_recover)

    vp = sub.add_parser("verify-properties", help="indicator-family structure checks")
    vp.add_argument("--distribution", required=True)
    vp.set_defaults(run=_run_verify_properties)

    dump = sub.add_parser("dump-lp", help="print the LP rows")
    dump.add_argument("--problem")
    dump.add_argument("--capacities")
    dump.add_argument("--aux")
    dump.set_defaults(run=_run_dump_lp)

    ex = sub.add_parser("example1", help="run the bundled instance")
    ex.add_argument("--capacities", default="1,1,1,1")
    ex.add_argument("--improved", nargs="?", const="gk", default=None)
    ex.set_defaults(run=_run_example1)
    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    args.command_echo = " ".join(argv)
    args.t0 = time.time()
    args.digests = {}
    try:
        report = args.run(args)
    except (ValueError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    _emit(report, args.format)
    return 0


if __name__ == "__main__":
    sys.exit(main())
