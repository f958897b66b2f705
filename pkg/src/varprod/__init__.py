"""Product-form variance uncertainty relations for several observables."""

from .bounds import (
    BoundReport,
    compare_pauli_bounds,
    evaluate_bound,
    gram_det_bound,
    theorem1_bound,
    theorem2_bound_cycles,
)
from .observables import MomentTable, Observable, gellmann_set, moment_table, pauli_set
from .states import DensityMatrix, from_matrix, qubit_from_bloch, qutrit_from_bloch

__version__ = "0.1.0"
