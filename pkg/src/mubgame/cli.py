"""Command-line front end.

Exit codes: 0 success, 1 a verification or certification check failed,
2 usage error, 3 an enumeration budget was exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from .errors import BudgetExceeded, ContractError
from .game import (
    CoinKind,
    classical_upper_bound,
    guessing_probability,
    outcome_vectors,
    perfect_strategy,
)
from .linalg import is_projective_povm
from .mub import dpp_set, identity_permutation, standard_set, verify_mub_set
from .numtheory import require_prime
from .optimize import SeesawConfig, default_workers, seesaw
from .search import (
    CLASSICAL_BUDGET,
    EXHAUSTIVE_BUDGET,
    RANDOM_DEFAULT_SAMPLES,
    ScanMode,
    classical_exhaustive,
    scan,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3
CSV_HEADER = ["dim", "bound", "value", "method", "seed", "configs"]
BOUND_KINDS = ("QUB", "QLB", "CLB", "CUB")


@dataclass(frozen=True)
class BoundRow:
    dim: int
    bound: str  # QUB | QLB | CLB | CUB
    value: float
    method: str  # closed-form | exhaustive | seesaw | scan:<mode>
    seed: int | None = None
    configs_evaluated: int | None = None


def default_qlb_mode(d: int) -> ScanMode:
    """Relabelling scan used for the quantum lower bound at dimension ``d``."""
    if d <= 5:
        return ScanMode("exhaustive")
    if d == 7:
        return ScanMode("cyclic")
    return ScanMode("random", RANDOM_DEFAULT_SAMPLES)


def cmd_bounds(
    dims: Sequence[int],
    *,
    seed: int = 0,
    eps: float = 1e-6,
    restarts: int = 50,
    scan_restarts: int = 10,
    qlb_mode: ScanMode | str | dict | None = None,
    classical_budget: int = CLASSICAL_BUDGET,
    exhaustive_budget: int = EXHAUSTIVE_BUDGET,
    workers: int | None = None,
) -> list[BoundRow]:
    """Quantum/classical upper and lower bounds per dimension.

    ``qlb_mode`` overrides the relabelling scan used for QLB, either for all
    dimensions or per dimension via a dict. Random scans always include the
    identity labelling of every subset.
    """
    dims = [require_prime(d) for d in dims]
    rows: list[BoundRow] = []
    for d in dims:
        rows.append(BoundRow(d, "QUB", 1.0, "closed-form"))
        rows.append(BoundRow(d, "CUB", classical_upper_bound(d), "closed-form"))

        wf = standard_set(d, 0)
        if d**d <= classical_budget:
            rows.append(BoundRow(d, "CLB", classical_exhaustive(wf, classical_budget).value, "exhaustive",
                                 None, d**d))
        else:
            res = seesaw(wf, CoinKind.CLASSICAL, SeesawConfig(epsilon=eps, restarts=restarts, master_seed=seed),
                         workers=default_workers() if workers is None else workers)
            rows.append(BoundRow(d, "CLB", res.best_value, "seesaw", seed, restarts))

        if isinstance(qlb_mode, dict):
            mode = ScanMode.parse(qlb_mode.get(d, default_qlb_mode(d)))
        elif qlb_mode is not None:
            mode = ScanMode.parse(qlb_mode)
        else:
            mode = default_qlb_mode(d)
        extras = [[identity_permutation(d)] * d] if mode.kind == "random" else []
        report = scan(
            d,
            CoinKind.QUANTUM,
            mode,
            SeesawConfig(epsilon=eps, restarts=scan_restarts),
            seed=seed,
            confirm_cfg=SeesawConfig(epsilon=eps, restarts=restarts) if restarts > scan_restarts else None,
            extra_tuples=extras,
            budget=exhaustive_budget,
            workers=workers,
        )
        rows.append(BoundRow(d, "QLB", report.min_value, f"scan:{mode}", seed, report.total_configs_evaluated))
    return rows


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def rows_to_csv(rows: Sequence[BoundRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow([r.dim, r.bound, _fmt(r.value), r.method, _fmt(r.seed), _fmt(r.configs_evaluated)])
    return buf.getvalue()


def rows_from_csv(text: str) -> list[BoundRow]:
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames != CSV_HEADER:
        raise ContractError(f"unexpected CSV header {reader.fieldnames}")
    return [
        BoundRow(
            int(r["dim"]),
            r["bound"],
            float(r["value"]),
            r["method"],
            int(r["seed"]) if r["seed"] else None,
            int(r["configs"]) if r["configs"] else None,
        )
        for r in reader
    ]


def rows_to_json(rows: Sequence[BoundRow]) -> str:
    return json.dumps([asdict(r) for r in rows], indent=2)


def rows_from_json(text: str) -> list[BoundRow]:
    return [BoundRow(**r) for r in json.loads(text)]


def cmd_certify(dim: int, tol: float = 1e-9) -> tuple[int, dict]:
    """Check the closed-form perfect strategy against the DPP bases."""
    d = require_prime(dim)
    if d == 2:
        raise ContractError("d = 2 has no closed-form strategy here; run `mubgame seesaw --dim 2` instead")
    bases = dpp_set(d)
    strategy = perfect_strategy(d, bases)
    mub = verify_mub_set(bases, tol)
    phis = outcome_vectors(d, bases)
    gram = phis.conj() @ phis.T
    off = float(np.max(np.abs(gram - np.diag(np.diag(gram)))))
    pg = guessing_probability(bases, strategy, CoinKind.QUANTUM)
    checks = {
        "mub": mub.ok,
        "projective": is_projective_povm(strategy.povm, tol),
        "orthogonal": off < tol,
        "perfect": abs(pg - 1) < tol,
    }
    report = {
        "dim": d,
        "checks": checks,
        "mub_worst_deviation": mub.worst_deviation,
        "phi_max_overlap": off,
        "guessing_probability": pg,
        "pg_deviation": abs(pg - 1),
        "ok": all(checks.values()),
    }
    return (EXIT_OK if report["ok"] else EXIT_FAIL), report


def _dims(values: Sequence[str]) -> list[int]:
    out = []
    for v in values:
        out.extend(int(x) for x in str(v).split(",") if x.strip())
    return out


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--dim", type=int, help="prime dimension")
    common.add_argument("--dims", nargs="+", help="prime dimensions, space or comma separated")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--eps", type=float, default=1e-6, help="see-saw convergence parameter")
    common.add_argument("--restarts", type=int, default=50)
    common.add_argument("--mode", default=None, help="exhaustive | cyclic | random[:N]")
    common.add_argument("--out", default=None, help="write output here instead of stdout")
    common.add_argument("--format", choices=("csv", "json"), default="json")
    common.add_argument("--excluded", type=int, default=0, help="index of the dropped basis (0 = computational)")
    common.add_argument("--dpp", action="store_true", help="use the DPP relabelling of the WF bases")
    common.add_argument("--coin", choices=("quantum", "classical"), default="quantum")

    parser = argparse.ArgumentParser(prog="mubgame", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("verify", parents=[common], help="check mutual unbiasedness of a standard set")
    sub.add_parser("certify", parents=[common], help="certify the perfect strategy")
    sub.add_parser("classical", parents=[common], help="exhaustive classical-coin optimum")
    sub.add_parser("seesaw", parents=[common], help="see-saw lower bound for one set")
    sub.add_parser("scan", parents=[common], help="relabelling scan over all subsets")
    sub.add_parser("bounds", parents=[common], help="QUB/QLB/CLB/CUB table")
    return parser


def _one_dim(args) -> int:
    if args.dim is not None:
        return args.dim
    dims = _dims(args.dims or [])
    if len(dims) != 1:
        raise ContractError("this command needs exactly one --dim")
    return dims[0]


def _selected_set(args):
    d = require_prime(_one_dim(args))
    if args.dpp:
        if args.excluded != 0:
            raise ContractError("--dpp applies to the subset without the computational basis (--excluded 0)")
        return dpp_set(d)
    return standard_set(d, args.excluded)


def _run(args) -> int:
    if args.command == "verify":
        bases = _selected_set(args)
        rep = verify_mub_set(bases)
        payload = {"dim": bases.dim, "family": bases.family, "excluded": bases.excluded,
                   "ok": rep.ok, "worst_deviation": rep.worst_deviation, "offending_pair": rep.offending_pair,
                   "set": bases.to_dict()}
        _emit(json.dumps(payload, indent=2), args.out)
        return EXIT_OK if rep.ok else EXIT_FAIL

    if args.command == "certify":
        dims = [args.dim] if args.dim is not None else _dims(args.dims or [])
        if not dims:
            raise ContractError("certify needs --dim or --dims")
        status, reports = EXIT_OK, []
        for d in dims:
            code, rep = cmd_certify(d)
            status = max(status, code)
            reports.append(rep)
        _emit(json.dumps(reports if len(reports) > 1 else reports[0], indent=2), args.out)
        return status

    if args.command == "classical":
        bases = _selected_set(args)
        opt = classical_exhaustive(bases)
        payload = {"dim": bases.dim, "excluded": bases.excluded, "value": opt.value,
                   "best_map": list(opt.best_map), "upper_bound": classical_upper_bound(bases.dim)}
        _emit(json.dumps(payload, indent=2), args.out)
        return EXIT_OK

    if args.command == "seesaw":
        bases = _selected_set(args)
        cfg = SeesawConfig(epsilon=args.eps, restarts=args.restarts, master_seed=args.seed)
        res = seesaw(bases, args.coin, cfg, workers=default_workers())
        _emit(json.dumps(res.to_dict(), indent=2), args.out)
        return EXIT_OK

    if args.command == "scan":
        d = require_prime(_one_dim(args))
        mode = ScanMode.parse(args.mode) if args.mode else (
            ScanMode("exhaustive") if d <= 3 else ScanMode("random", 100))
        report = scan(d, args.coin, mode, SeesawConfig(epsilon=args.eps, restarts=min(10, args.restarts)),
                      seed=args.seed, confirm_cfg=SeesawConfig(epsilon=args.eps, restarts=args.restarts))
        _emit(report.to_csv() if args.format == "csv" else json.dumps(report.to_dict(), indent=2), args.out)
        return EXIT_OK

    if args.command == "bounds":
        dims = _dims(args.dims or []) or ([args.dim] if args.dim is not None else [])
        if not dims:
            raise ContractError("bounds needs --dims")
        rows = cmd_bounds(dims, seed=args.seed, eps=args.eps, restarts=args.restarts, qlb_mode=args.mode)
        _emit(rows_to_csv(rows) if args.format == "csv" else rows_to_json(rows), args.out)
        return EXIT_OK

    raise ContractError(f"unknown command {args.command}")


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _run(args)
    except BudgetExceeded as err:
        print(f"mubgame: budget exceeded: {err}", file=sys.stderr)
        return EXIT_BUDGET
    except ContractError as err:
        print(f"mubgame: error: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
