"""Approximating continuous functions by conditional expectations of random vectors."""

from .approximant import (
    Approximant,
    ClosedFormWeights,
    ErrorReport,
    ResidualReport,
    build_approximant,
    convergence_study,
    error_report,
    eval_approximant,
    residual_report,
)
from .basis import (
    TriangularBasisX,
    TriangularBasisY,
    TrigBasisX,
    TrigBasisY,
    tri_x_eval,
    tri_y_eval,
    trig_x_eval,
    trig_y_eval,
)
from .expression import ExpressionError, parse_expression
from .grid import ConstructionError, EquidistantGrid, Interval, NodeValues, make_grid, sample_nodes
from .kernel import (
    JointDensity,
    MaxProductKernel,
    NumericalError,
    QuadratureSpec,
    build_kernel,
    kernel_eval,
    normalize,
    y_slice_integrals,
)
from .ordering import GapReport, SortedOrder, gap_report, sort_and_screen
from .well import (
    DescendantLedger,
    WellState,
    adam_wave,
    complex_wave,
    descendant_ledger,
    duality_numbers,
    energy,
    eve_wave,
    local_ground_state,
)

__all__ = [name for name in dir() if not name.startswith("_")]
