"""Parameter sweeps behind the three figures, written as CSV."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import IO, Iterable, Sequence

import numpy as np

from .bounds import (
    gellmann_printed_bound,
    gram_det_bound,
    pauli_closed_form,
    pauli_triple_tight_bound,
    schrodinger_triple_bound,
)
from .observables import gellmann_set, moment_table, pauli_set
from .states import StateError, qubit_from_bloch, qutrit_from_params

GELLMANN_SCALE = 3.0**8

FIG1_COLUMNS = ("theta", "product", "L7", "L10", "L11")
FIG2_COLUMNS = (
    "alpha", "beta", "valid", "delta_scaled", "bound_scaled",
    "printed_bound_scaled", "printed_bound_sin2beta_scaled",
)
FIG3_COLUMNS = (
    "alpha", "valid", "product_scaled", "bound_scaled",
    "printed_bound_scaled", "printed_bound_sin2beta_scaled",
)


@dataclass(frozen=True)
class SweepSpec:
    figure: str
    steps: int = 360
    fixed_params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.figure not in ("fig1", "fig2", "fig3"):
            raise ValueError(f"unknown figure {self.figure!r}")
        if self.steps < 2:
            raise ValueError("steps must be at least 2")

    @property
    def a(self) -> float:
        return math.sqrt(self.fixed_params.get("a2", 1.0 / 3.0))


def fig1_bloch(theta: float) -> np.ndarray:
    return np.array([1 / 3, 2 / 3 * math.cos(theta), 2 / 3 * math.sin(theta)])


def fig1_row(theta: float) -> dict:
    r = fig1_bloch(theta)
    t = moment_table(qubit_from_bloch(r), pauli_set())
    return {
        "theta": theta,
        "product": t.product,
        "L7": pauli_closed_form(r)[1],
        "L10": pauli_triple_tight_bound(r),
        "L11": schrodinger_triple_bound(t),
    }


@lru_cache(maxsize=1)
def _gellmann():
    return gellmann_set()


def gellmann_row(a: float, alpha: float, beta: float) -> dict:
    """Scaled product and bounds at one qutrit parameter point.

    Invalid parameter points come back with ``valid=False`` and no values.
    """
    try:
        rho = qutrit_from_params(a, alpha, beta)
    except StateError:
        return {"valid": False, "product_scaled": None, "bound_scaled": None,
                "printed_bound_scaled": None, "printed_bound_sin2beta_scaled": None}
    t = moment_table(rho, _gellmann())
    return {
        "valid": True,
        "product_scaled": GELLMANN_SCALE * t.product,
        "bound_scaled": GELLMANN_SCALE * gram_det_bound(t),
        "printed_bound_scaled": GELLMANN_SCALE * gellmann_printed_bound(a, alpha, beta),
        "printed_bound_sin2beta_scaled": GELLMANN_SCALE
        * gellmann_printed_bound(a, alpha, beta, reading="sin2beta"),
    }


def _grid(steps: int) -> np.ndarray:
    return np.linspace(0.0, 2.0 * math.pi, steps)


def sweep_rows(spec: SweepSpec) -> list[dict]:
    if spec.figure == "fig1":
        return [fig1_row(th) for th in _grid(spec.steps)]
    a = spec.a
    if spec.figure == "fig2":
        rows = []
        for alpha in _grid(spec.steps):
            for beta in _grid(spec.steps):
                row = gellmann_row(a, alpha, beta)
                row["delta_scaled"] = row.pop("product_scaled")
                rows.append({"alpha": alpha, "beta": beta, **row})
        return rows
    beta = spec.fixed_params.get("beta", math.pi / 4)
    return [{"alpha": alpha, **gellmann_row(a, alpha, beta)} for alpha in _grid(spec.steps)]


def columns(figure: str) -> Sequence[str]:
    return {"fig1": FIG1_COLUMNS, "fig2": FIG2_COLUMNS, "fig3": FIG3_COLUMNS}[figure]


def format_cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.15e}"


def write_csv(stream: IO[str], header: Sequence[str], rows: Iterable[dict]) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_cell(row.get(col)) for col in header])


def write_sweep(spec: SweepSpec, path: str | Path) -> list[dict]:
    rows = sweep_rows(spec)
    with open(path, "w", newline="") as fh:
        write_csv(fh, columns(spec.figure), rows)
    return rows
