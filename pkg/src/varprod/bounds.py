"""Lower bounds on products of variances.

Every bound is a function of a :class:`~varprod.observables.MomentTable`,
except the closed forms for the Pauli triple (functions of a Bloch vector)
and the Gell-Mann family (functions of ``a, alpha, beta``).

The n-observable bound is computed twice. ``gram_det_bound`` is simply
``prod(variances) - det(gram)``. ``theorem2_bound_cycles`` expands the same
quantity over permutation cycle types: fixed points contribute variances,
every longer cycle (j1 ... jm) contributes the cycle term
``c[j1,j2] c[j2,j3] ... c[jm,j1]`` of centered moments. A cycle and its
reversal are conjugate, so each pair enters as ``2 Re`` of one of them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from typing import Iterator, Sequence

import numpy as np

from . import linalg
from .observables import MomentTable, moment_table, pauli_set
from .states import qubit_from_bloch, qutrit_from_params

TIGHT_RTOL = 1e-9
IMAG_TOL = 1e-10
MAX_CYCLE_N = 10
PAULI_TAU = 8.0 / (3.0 * math.sqrt(3.0))

BOUND_NAMES = (
    "theorem1",
    "theorem1_commutator_form",
    "theorem2_cycles",
    "theorem2_det",
    "heisenberg_pair",
    "schrodinger_pair",
    "pauli_triple_tight",
    "schrodinger_triple",
    "pauli_closed_form",
    "gellmann_closed_form",
    "sum_amgm",
)


def tightness_tol(product: float) -> float:
    return TIGHT_RTOL * max(1.0, abs(product))


@dataclass(frozen=True)
class BoundReport:
    """One bound evaluated against the quantity it bounds.

    ``target`` is the bounded quantity: the variance product for every bound
    except ``sum_amgm``, where it is the sum of variances.
    """

    bound_name: str
    product: float
    bound_value: float
    target: float

    @property
    def gap(self) -> float:
        return self.target - self.bound_value

    @property
    def tight(self) -> bool:
        return self.gap <= tightness_tol(self.target)

    @property
    def bound_clamped(self) -> float:
        return max(self.bound_value, 0.0)

    def as_dict(self) -> dict:
        return {
            "bound": self.bound_name,
            "product": self.product,
            "bound_value": self.bound_value,
            "bound_clamped": self.bound_clamped,
            "target": self.target,
            "gap": self.gap,
            "tight": self.tight,
        }


def _require_n(t: MomentTable, n: int) -> None:
    if t.n != n:
        raise ValueError(f"bound needs exactly {n} observables, got {t.n}")


def _check_index(t: MomentTable, *idx: int) -> None:
    for i in idx:
        if not 0 <= i < t.n:
            raise IndexError(f"observable index {i} out of range for {t.n} observables")


def heisenberg_pair_bound(t: MomentTable, i: int, j: int) -> float:
    """|<[A_i, A_j]>|^2 / 4."""
    _check_index(t, i, j)
    if i == j:
        return 0.0
    return 0.25 * abs(t.commutator(i, j)) ** 2


def schrodinger_pair_bound(t: MomentTable, i: int, j: int) -> float:
    _check_index(t, i, j)
    if i == j:
        return float(t.variances[i]) ** 2
    comm = t.commutator(i, j)
    anti = t.anticommutator(i, j)
    return 0.25 * abs(comm) ** 2 + abs(0.5 * anti - t.means[i] * t.means[j]) ** 2


def theorem1_bound(t: MomentTable) -> float:
    _require_n(t, 3)
    c, v = t.centered, t.variances
    ab, bc, ca = c[0, 1], c[1, 2], c[2, 0]
    return float(
        v[0] * abs(bc) ** 2
        + v[1] * abs(ca) ** 2
        + v[2] * abs(ab) ** 2
        - 2.0 * (ab * bc * ca).real
    )


def theorem1_bound_commutator_form(t: MomentTable) -> float:
    """Three-observable bound written with commutator and anticommutator means."""
    _require_n(t, 3)
    m, v = t.means, t.variances

    def comm(j, k):
        return t.commutator(j, k)

    def shifted(j, k):
        # <{A_j, A_k}> - 2 <A_j><A_k>
        return t.anticommutator(j, k) - 2.0 * m[j] * m[k]

    def pair(j, k):
        return 0.25 * abs(comm(j, k)) ** 2 + abs(0.5 * shifted(j, k)) ** 2

    a, b, c = 0, 1, 2
    total = v[a] * pair(b, c) + v[b] * pair(c, a) + v[c] * pair(a, b)
    total -= 0.25 * shifted(a, b) * shifted(b, c) * shifted(c, a)
    total -= 0.25 * shifted(a, b) * comm(b, c) * comm(c, a)
    total -= 0.25 * comm(a, b) * shifted(b, c) * comm(c, a)
    total -= 0.25 * comm(a, b) * comm(b, c) * shifted(c, a)
    return float(np.real(total))


def gram_det_bound(t: MomentTable) -> float:
    """prod(variances) - det(M); nonnegativity of det(M) makes this a bound."""
    det = linalg.determinant(t.gram)
    scale = max(1.0, float(np.prod(np.linalg.norm(t.gram, axis=0))))
    if abs(det.imag) > IMAG_TOL * scale:
        raise ArithmeticError(f"Gram determinant has imaginary part {det.imag:.3e}")
    return t.product - det.real


@dataclass(frozen=True)
class CycleTerm:
    """One cycle type in the expansion of prod(variances) - det(M).

    ``value`` already includes the sign and the reversal pairing, so the
    bound is the plain sum of values over all non-identity cycle types.
    """

    fixed_set: tuple[int, ...]
    cycle_partition: tuple[tuple[int, ...], ...]
    value: float


def _cycle_types(n: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    """All permutations of range(n) as cycle lists, up to reversing cycles of
    length >= 3. Recursion places the smallest unplaced index each step."""

    def place(remaining: tuple[int, ...]):
        if not remaining:
            yield ()
            return
        s, rest = remaining[0], remaining[1:]
        for size in range(0, len(rest) + 1):
            for order in permutations(rest, size):
                if size >= 2 and order[0] > order[-1]:
                    continue
                cycle = (s,) + order
                left = tuple(i for i in rest if i not in order)
                for tail in place(left):
                    yield (cycle,) + tail

    yield from place(tuple(range(n)))


@lru_cache(maxsize=None)
def _expansion(n: int):
    """Precomputed bookkeeping for the cycle expansion at size n.

    Returns ``(cycles_by_len, term_index, signs, fixed_counts, structures)``.
    Cycle ids are global across lengths; ``term_index`` rows list the cycle
    ids of one term, padded with the id of a constant-one slot.
    """
    cycle_id: dict[tuple[int, ...], int] = {}
    by_len: dict[int, list[tuple[int, ...]]] = {}
    rows, signs, fixed_counts, structures = [], [], [], []
    for ctype in _cycle_types(n):
        long_cycles = [c for c in ctype if len(c) >= 2]
        if not long_cycles:
            continue
        k = n - sum(len(c) for c in long_cycles)
        # -sgn(sigma) with sgn = (-1)^(n - #cycles)
        signs.append((-1.0) ** (n - k - len(long_cycles) + 1))
        fixed_counts.append(k)
        structures.append(ctype)
        row = []
        for c in ctype:
            if c not in cycle_id:
                cycle_id[c] = len(cycle_id)
                by_len.setdefault(len(c), []).append(c)
            row.append(cycle_id[c])
        rows.append(row)
    one = len(cycle_id)
    width = max(len(r) for r in rows)
    term_index = np.full((len(rows), width), one, dtype=np.intp)
    for r, row in enumerate(rows):
        term_index[r, : len(row)] = row
    order = sorted(cycle_id, key=cycle_id.get)
    grouped = {
        m: (np.array([cycle_id[c] for c in cs]), np.array(cs, dtype=np.intp))
        for m, cs in by_len.items()
    }
    return grouped, term_index, np.array(signs), np.array(fixed_counts), structures, order


def _cycle_values(t: MomentTable, grouped, size: int) -> np.ndarray:
    vals = np.ones(size + 1)
    c = t.centered
    for m, (ids, members) in grouped.items():
        if m == 1:
            vals[ids] = t.variances[members[:, 0]]
        elif m == 2:
            vals[ids] = np.abs(c[members[:, 0], members[:, 1]]) ** 2
        else:
            nxt = np.roll(members, -1, axis=1)
            e = np.prod(c[members, nxt], axis=1)
            vals[ids] = 2.0 * e.real
    return vals


def _term_values(t: MomentTable) -> tuple[np.ndarray, np.ndarray, list]:
    if t.n < 2:
        raise ValueError("the cycle expansion needs at least 2 observables")
    if t.n > MAX_CYCLE_N:
        raise ValueError(
            f"cycle expansion is capped at n = {MAX_CYCLE_N}; use gram_det_bound for n = {t.n}"
        )
    grouped, term_index, signs, fixed_counts, structures, order = _expansion(t.n)
    vals = _cycle_values(t, grouped, len(order))
    terms = signs * np.prod(vals[term_index], axis=1)
    return terms, fixed_counts, structures


def theorem2_bound_cycles(t: MomentTable) -> float:
    terms, _, _ = _term_values(t)
    return float(math.fsum(terms))


def theorem2_g(t: MomentTable) -> dict[int, float]:
    """Per-k pieces g(k) with bound = sum_k (-1)^(n-k) g(k), k = number of
    fixed points (observables entering only through their variance)."""
    terms, fixed_counts, _ = _term_values(t)
    n = t.n
    out = {}
    for k in range(n):
        s = math.fsum(terms[fixed_counts == k])
        out[k] = (-1.0) ** (n - k) * s
    return out


def cycle_terms(t: MomentTable) -> list[CycleTerm]:
    terms, _, structures = _term_values(t)
    out = []
    for value, ctype in zip(terms, structures):
        fixed = tuple(c[0] for c in ctype if len(c) == 1)
        cycles = tuple(c for c in ctype if len(c) >= 2)
        out.append(CycleTerm(fixed, cycles, float(value)))
    return out


def schrodinger_triple_bound(t: MomentTable) -> float:
    _require_n(t, 3)
    c = t.centered
    return float(abs(c[0, 1]) * abs(c[1, 2]) * abs(c[2, 0]))


def sum_amgm_bound(t: MomentTable) -> float:
    """Lower bound on the sum of variances from the product bound via AM-GM."""
    if t.n < 2:
        raise ValueError("need at least 2 observables")
    return t.n * max(gram_det_bound(t), 0.0) ** (1.0 / t.n)


def _bloch3(r) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    if r.shape != (3,):
        raise ValueError(f"expected 3 Bloch components, got {r.shape}")
    if np.linalg.norm(r) > 1.0 + 1e-12:
        raise ValueError(f"Bloch vector norm {np.linalg.norm(r):.12g} exceeds 1")
    return r


def pauli_triple_tight_bound(r) -> float:
    r = _bloch3(r)
    return PAULI_TAU * abs(r[0] * r[1] * r[2])


def pauli_closed_form(r) -> tuple[float, float]:
    """(prod(1 - r_i^2), polynomial lower bound) for the Pauli triple."""
    r = _bloch3(r)
    s = r**2
    product = float(np.prod(1.0 - s))
    pairs = s[0] * s[1] + s[1] * s[2] + s[2] * s[0]
    bound = float(s.sum() - (s**2).sum() - pairs - s[0] * s[1] * s[2])
    return product, bound


def gellmann_product(a: float, alpha: float, beta: float) -> float:
    sa, ca = math.sin(alpha), math.cos(alpha)
    return (2.0 / 3.0) ** 8 * (1 - 2 * a * a * ca * ca) * (
        1 - 2 * a * a * sa * sa + a**4 * sa**4 * math.sin(2 * beta) ** 2
    )


def gellmann_printed_bound(a: float, alpha: float, beta: float, reading: str = "printed") -> float:
    """The published closed-form lower bound for the eight Gell-Mann matrices.

    ``reading="printed"`` keeps sin(beta)^2 in the first bracket exactly as
    published; ``reading="sin2beta"`` substitutes sin(2 beta)^2, matching the
    product formula.
    """
    if reading == "printed":
        sb = math.sin(beta) ** 2
    elif reading == "sin2beta":
        sb = math.sin(2 * beta) ** 2
    else:
        raise ValueError(f"unknown reading {reading!r}")
    sa = math.sin(alpha)
    a2 = a * a
    bracket = (
        2**8 * (1 - 2 * a2 * sa**2 + a2 * a2 * sa**4 * sb)
        + (-2048 + 7168 * a2 - 6144 * a2**2 + 1359 * a2**3) / 8
        + a2 * (4096 - 6144 * a2 + 2385 * a2**2) * math.cos(2 * alpha) / 16
        + 9 / 8 * a2**2 * (-108 + 105 * a2) * math.cos(4 * alpha)
        - 81 / 16 * a**5 * (
            math.cos(6 * alpha) - 32 * math.cos(alpha) ** 2 * sa**4 * math.cos(4 * beta)
        )
    )
    tail = (2 / 3) ** 8 * 2 * a2 * sa**2 * (
        1 - 2 * a2 * sa**2 + a2 * a2 * sa**4 * math.sin(2 * beta) ** 2
    )
    return (1 / 3) ** 8 * (1 - 2 * a2) * bracket + tail


def gellmann_closed_form(a: float, alpha: float, beta: float) -> tuple[float, float]:
    """(closed-form product, published bound) for the qutrit family.

    Raises :class:`~varprod.states.StateError` if the parameters do not give
    a valid density matrix.
    """
    qutrit_from_params(a, alpha, beta)
    return gellmann_product(a, alpha, beta), gellmann_printed_bound(a, alpha, beta)


def evaluate_bound(
    t: MomentTable,
    name: str,
    pair: tuple[int, int] = (0, 1),
    bloch: Sequence[float] | None = None,
    qutrit_params: tuple[float, float, float] | None = None,
) -> BoundReport:
    """Evaluate one named bound from a shared moment table.

    ``bloch`` is required by the Pauli closed forms and ``qutrit_params`` by
    the Gell-Mann closed form.
    """
    product = t.product
    target = product
    if name == "theorem1":
        value = theorem1_bound(t)
    elif name == "theorem1_commutator_form":
        value = theorem1_bound_commutator_form(t)
    elif name == "theorem2_cycles":
        value = theorem2_bound_cycles(t)
    elif name == "theorem2_det":
        value = gram_det_bound(t)
    elif name == "heisenberg_pair":
        value = heisenberg_pair_bound(t, *pair)
        target = float(t.variances[pair[0]] * t.variances[pair[1]])
    elif name == "schrodinger_pair":
        value = schrodinger_pair_bound(t, *pair)
        target = float(t.variances[pair[0]] * t.variances[pair[1]])
    elif name == "schrodinger_triple":
        value = schrodinger_triple_bound(t)
    elif name == "sum_amgm":
        value = sum_amgm_bound(t)
        target = float(np.sum(t.variances))
    elif name in ("pauli_triple_tight", "pauli_closed_form"):
        if bloch is None:
            raise ValueError(f"{name} needs a qubit Bloch vector")
        _require_n(t, 3)
        if name == "pauli_triple_tight":
            value = pauli_triple_tight_bound(bloch)
        else:
            value = pauli_closed_form(bloch)[1]
    elif name == "gellmann_closed_form":
        if qutrit_params is None:
            raise ValueError("gellmann_closed_form needs (a, alpha, beta)")
        _require_n(t, 8)
        value = gellmann_printed_bound(*qutrit_params)
    else:
        raise ValueError(f"unknown bound {name!r}; choose from {', '.join(BOUND_NAMES)}")
    return BoundReport(name, product, float(value), float(target))


def compare_pauli_bounds(r) -> list[BoundReport]:
    """Reports for the polynomial bound, the tau-scaled commutator bound and the
    triple Schrödinger bound, all on the qubit state with Bloch vector ``r``."""
    r = _bloch3(r)
    t = moment_table(qubit_from_bloch(r), pauli_set())
    return [
        evaluate_bound(t, name, bloch=r)
        for name in ("pauli_closed_form", "pauli_triple_tight", "schrodinger_triple")
    ]
