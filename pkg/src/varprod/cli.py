"""Command line entry point: ``varprod {bound,compare,sweep,fuzz,validate}``.

Exit codes: 0 success, 1 I/O or parse error, 2 validation error,
3 verification failure.
"""

from __future__ import annotations

import argparse
import io
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import bounds, linalg, states
from .descriptors import DescriptorError, load_json, parse_observables, parse_state, state_matrix
from .fuzz import run_fuzz
from .observables import moment_table
from .sweeps import SweepSpec, columns, sweep_rows, write_csv

EXIT_OK, EXIT_IO, EXIT_INVALID, EXIT_VERIFY = 0, 1, 2, 3

REPORT_COLUMNS = ("bound", "product", "bound_value", "bound_clamped", "target", "gap", "tight")


@dataclass
class RunConfig:
    command: str
    state_source: str | None = None
    observable_source: str | None = None
    bound_names: list[str] = field(default_factory=list)
    seed: int = 0
    trials: int = 1000
    dims: list[int] = field(default_factory=lambda: [2])
    n_obs: list[int] = field(default_factory=lambda: [3])
    tolerance: float = 1e-10
    output_path: str | None = None
    output_format: str = "json"

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("--trials must be >= 1")
        if self.tolerance <= 0:
            raise ValueError("--tol must be positive")
        if any(d < 2 for d in self.dims):
            raise ValueError("--dims must all be >= 2")


def _emit(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _records_text(records: list[dict], fmt: str) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        write_csv(buf, REPORT_COLUMNS, records)
        return buf.getvalue()
    return _dump_json(records)


def _applicable(t, parsed, obs) -> list[str]:
    names = ["theorem2_det", "sum_amgm"] if t.n >= 2 else ["theorem2_det"]
    if 2 <= t.n <= bounds.MAX_CYCLE_N:
        names.insert(1, "theorem2_cycles")
    if t.n >= 2:
        names += ["heisenberg_pair", "schrodinger_pair"]
    if t.n == 3:
        names += ["theorem1", "theorem1_commutator_form", "schrodinger_triple"]
        if parsed.bloch is not None and len(parsed.bloch) == 3 and [o.label for o in obs] == ["sx", "sy", "sz"]:
            names += ["pauli_closed_form", "pauli_triple_tight"]
    if parsed.qutrit_params is not None and t.n == 8:
        names.append("gellmann_closed_form")
    return names


def _load(cfg: RunConfig):
    if cfg.state_source is None or cfg.observable_source is None:
        raise DescriptorError("--state and --obs are required")
    rho, parsed = parse_state(load_json(cfg.state_source))
    obs = parse_observables(load_json(cfg.observable_source))
    return rho, parsed, obs


def cmd_bound(cfg: RunConfig) -> int:
    rho, parsed, obs = _load(cfg)
    t = moment_table(rho, obs)
    names = cfg.bound_names or _applicable(t, parsed, obs)
    reports = [
        bounds.evaluate_bound(t, name, bloch=parsed.bloch, qutrit_params=parsed.qutrit_params)
        for name in names
    ]
    _emit(_records_text([r.as_dict() for r in reports], cfg.output_format), cfg.output_path)
    return EXIT_OK


def cmd_compare(cfg: RunConfig) -> int:
    """All applicable bounds on one state, plus the ordering verdicts."""
    rho, parsed, obs = _load(cfg)
    t = moment_table(rho, obs)
    reports = [
        bounds.evaluate_bound(t, name, bloch=parsed.bloch, qutrit_params=parsed.qutrit_params)
        for name in _applicable(t, parsed, obs)
    ]
    values = {r.bound_name: r.bound_value for r in reports}
    out = {"product": t.product, "reports": [r.as_dict() for r in reports], "orderings": {}}
    if "pauli_closed_form" in values:
        l7, l10, l11 = values["pauli_closed_form"], values["pauli_triple_tight"], values["schrodinger_triple"]
        out["orderings"]["product>=L7>=max(L10,L11)"] = bool(
            t.product >= l7 - bounds.tightness_tol(t.product) and l7 >= max(l10, l11) - 1e-11
        )
    if "theorem1" in values:
        out["orderings"]["theorem1>=schrodinger_triple"] = bool(
            values["theorem1"] >= values["schrodinger_triple"] - 1e-11
        )
    if cfg.output_format == "csv":
        text = _records_text(out["reports"], "csv")
    else:
        text = _dump_json(out)
    _emit(text, cfg.output_path)
    ok = all(out["orderings"].values())
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_sweep(spec: SweepSpec, output_path: str | None) -> int:
    buf = io.StringIO()
    write_csv(buf, columns(spec.figure), sweep_rows(spec))
    _emit(buf.getvalue(), output_path)
    return EXIT_OK


def cmd_fuzz(cfg: RunConfig) -> int:
    summary = run_fuzz(cfg.seed, cfg.trials, cfg.dims, cfg.n_obs, cfg.tolerance)
    _emit(_dump_json(summary), cfg.output_path)
    return EXIT_OK if summary["pass"] else EXIT_VERIFY


def validation_report(desc: dict, tol: float = linalg.HERMITIAN_TOL) -> dict:
    parsed = state_matrix(desc)
    m = parsed.matrix
    asym = linalg.max_asymmetry(m)
    tr = linalg.trace(m)
    report = {
        "kind": parsed.kind,
        "dim": m.shape[0],
        "hermiticity_residue": asym,
        "trace": [tr.real, tr.imag],
        "eigenvalues": linalg.hermitian_eigenvalues(m, tol).tolist() if asym <= tol else None,
    }
    violations = [f"{e.invariant}: {e}" for e in states.diagnose(m, tol)]
    if parsed.bloch is not None:
        norm = states.bloch_norm(parsed.bloch)
        report["bloch_norm"] = norm
        if parsed.kind == "bloch_qubit" and norm > 1 + states.BLOCH_NORM_SLACK:
            violations.append(f"Bloch norm {norm:.12g} exceeds 1")
        if parsed.kind != "bloch_qubit":
            norm_ok = norm <= 1 + states.BLOCH_NORM_SLACK
            eig_ok = report["eigenvalues"] is not None and report["eigenvalues"][0] >= -tol
            report["norm_condition"] = norm_ok
            report["eigenvalue_condition"] = eig_ok
            report["conditions_agree"] = norm_ok == eig_ok
    report["violations"] = violations
    report["valid"] = not violations
    return report


def cmd_validate(cfg: RunConfig) -> int:
    if cfg.state_source is None:
        raise DescriptorError("--state is required")
    report = validation_report(load_json(cfg.state_source), min(cfg.tolerance, 1e-10))
    _emit(_dump_json(report), cfg.output_path)
    return EXIT_OK if report["valid"] else EXIT_INVALID


def _int_list(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        if "-" in part:
            lo, hi = part.split("-")
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="varprod", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, fmt_default="json"):
        sp.add_argument("--out", help="output file (default: stdout)")
        sp.add_argument("--format", choices=("csv", "json"), default=fmt_default)

    for name in ("bound", "compare"):
        sp = sub.add_parser(name)
        sp.add_argument("--state", required=True, help="state descriptor: inline JSON or path")
        sp.add_argument("--obs", required=True, help="observable descriptor: inline JSON or path")
        if name == "bound":
            sp.add_argument("--bound", action="append", default=[], choices=bounds.BOUND_NAMES)
        common(sp)

    sp = sub.add_parser("sweep")
    sp.add_argument("--figure", required=True, choices=("fig1", "fig2", "fig3"))
    sp.add_argument("--steps", type=int, default=None)
    sp.add_argument("--a2", type=float, default=1.0 / 3.0)
    common(sp, "csv")

    sp = sub.add_parser("fuzz")
    sp.add_argument("--trials", type=int, default=1000)
    sp.add_argument("--dims", type=_int_list, default=[2], help="e.g. 2,3 or 2-5")
    sp.add_argument("--n-obs", type=_int_list, default=[3], help="e.g. 3 or 2-6")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--tol", type=float, default=1e-10)
    common(sp)

    sp = sub.add_parser("validate")
    sp.add_argument("--state", required=True)
    sp.add_argument("--tol", type=float, default=1e-10)
    common(sp)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "sweep":
            default_steps = {"fig1": 360, "fig2": 50, "fig3": 360}[args.figure]
            spec = SweepSpec(args.figure, args.steps or default_steps, {"a2": args.a2})
            return cmd_sweep(spec, args.out)
        cfg = RunConfig(
            command=args.command,
            state_source=getattr(args, "state", None),
            observable_source=getattr(args, "obs", None),
            bound_names=getattr(args, "bound", []),
            seed=getattr(args, "seed", 0),
            trials=getattr(args, "trials", 1000),
            dims=getattr(args, "dims", [2]),
            n_obs=getattr(args, "n_obs", [3]),
            tolerance=getattr(args, "tol", 1e-10),
            output_path=args.out,
            output_format=args.format,
        )
        handler = {"bound": cmd_bound, "compare": cmd_compare, "fuzz": cmd_fuzz, "validate": cmd_validate}
        return handler[args.command](cfg)
    except (DescriptorError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (states.StateError, linalg.HermiticityError, linalg.DimensionError, ValueError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
