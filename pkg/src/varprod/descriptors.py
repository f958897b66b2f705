"""JSON descriptors for states and observables.

State descriptors::

    {"kind": "dense", "dim": d, "entries": [[re, im], ...]}   # row-major
    {"kind": "bloch_qubit", "r": [r1, r2, r3]}
    {"kind": "bloch_qutrit", "r": [r1, ..., r8]}
    {"kind": "bloch_qutrit_param", "a": a, "alpha": alpha, "beta": beta}

Observable descriptors are a single object or a list of objects::

    {"kind": "dense", "dim": d, "entries": [...], "label": "A"}
    {"kind": "pauli"}
    {"kind": "gellmann"}
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import states
from .observables import Observable, gellmann_set, pauli_set


class DescriptorError(ValueError):
    """Malformed descriptor (as opposed to a well-formed but invalid state)."""


@dataclass(frozen=True)
class ParsedState:
    """A validated state plus the parameterization it was given in, if any."""

    kind: str
    matrix: np.ndarray
    bloch: np.ndarray | None = None
    qutrit_params: tuple[float, float, float] | None = None


def load_json(source: str):
    """Parse ``source`` as inline JSON, or as a path to a JSON file."""
    text = source.strip()
    if not text.startswith(("{", "[")):
        try:
            text = Path(source).read_text()
        except OSError as exc:
            raise DescriptorError(f"cannot read descriptor {source!r}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DescriptorError(f"invalid JSON: {exc}") from exc


def _dense(desc: dict) -> np.ndarray:
    try:
        dim = int(desc["dim"])
        entries = np.asarray(desc["entries"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise DescriptorError(f"dense descriptor needs 'dim' and 'entries': {exc}") from exc
    if entries.shape != (dim * dim, 2):
        raise DescriptorError(f"expected {dim * dim} [re, im] pairs, got shape {entries.shape}")
    return (entries[:, 0] + 1j * entries[:, 1]).reshape(dim, dim)


def _floats(desc: dict, key: str, length: int) -> np.ndarray:
    try:
        r = np.asarray(desc[key], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise DescriptorError(f"descriptor needs numeric '{key}': {exc}") from exc
    if r.shape != (length,):
        raise DescriptorError(f"'{key}' must have {length} components, got {r.shape}")
    return r


def state_matrix(desc: dict) -> ParsedState:
    """Build the matrix described by ``desc`` without validating it as a state."""
    if not isinstance(desc, dict) or "kind" not in desc:
        raise DescriptorError("state descriptor must be an object with a 'kind'")
    kind = desc["kind"]
    if kind == "dense":
        return ParsedState(kind, _dense(desc))
    if kind == "bloch_qubit":
        r = _floats(desc, "r", 3)
        m = 0.5 * (np.eye(2) + np.einsum("i,ijk->jk", r, states.pauli_matrices()))
        return ParsedState(kind, m, bloch=r)
    if kind == "bloch_qutrit":
        r = _floats(desc, "r", 8)
        return ParsedState(kind, states.qutrit_matrix(r), bloch=r)
    if kind == "bloch_qutrit_param":
        try:
            params = (float(desc["a"]), float(desc["alpha"]), float(desc["beta"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise DescriptorError(f"bloch_qutrit_param needs a, alpha, beta: {exc}") from exc
        r = states.qutrit_param_bloch(*params)
        return ParsedState(kind, states.qutrit_matrix(r), bloch=r, qutrit_params=params)
    raise DescriptorError(f"unknown state kind {kind!r}")


def parse_state(desc: dict, tol: float = states.HERMITIAN_TOL) -> tuple[states.DensityMatrix, ParsedState]:
    parsed = state_matrix(desc)
    if parsed.kind == "bloch_qubit":
        rho = states.qubit_from_bloch(parsed.bloch)
    else:
        rho = states.from_matrix(parsed.matrix, tol)
    return rho, parsed


def parse_observables(desc) -> list[Observable]:
    items = desc if isinstance(desc, list) else [desc]
    out: list[Observable] = []
    for i, item in enumerate(items):
        if not isinstance(item, dict) or "kind" not in item:
            raise DescriptorError("observable descriptor must be an object with a 'kind'")
        kind = item["kind"]
        if kind == "pauli":
            out.extend(pauli_set())
        elif kind == "gellmann":
            out.extend(gellmann_set())
        elif kind == "dense":
            out.append(Observable.from_matrix(_dense(item), item.get("label", f"A{i + 1}")))
        else:
            raise DescriptorError(f"unknown observable kind {kind!r}")
    return out
