"""Single-element laboratory for plane-wave Trefftz discretizations of
the 2-D Helmholtz equation: exact and assembled boundary Gram matrices,
circulant spectral analysis, seven diagonalized preconditioners, and
direct/GMRES solve experiments."""

from .basis import PlaneWaveBasis, directions, fan_basis, uniform_basis
from .circulant import (
    CirculantOperator,
    SingularOperatorError,
    circ_best,
    circ_first_row,
    circulant_from_row,
    cyclic_best_limit,
    delta_measure,
    disk_condition_estimate,
    disk_spectrum,
    spectrum_report,
    toeplitz_average,
    unitary_dft,
)
from .geometry import (
    AreaRule,
    CyclicAngles,
    Disk,
    Polygon,
    QuadratureRule,
    area_quadrature,
    cyclic_polygon,
    edge_quadrature,
    radial_param,
    regular_polygon,
)
from .matrices import (
    DenseComplexMatrix,
    SystemMatrix,
    UnderResolvedRuleError,
    assemble_boundary_matrix,
    disk_cross,
    disk_mass,
    disk_stiffness,
    disk_system_matrix,
    impedance_rhs,
    system_matrix,
)
from .precond import (
    DiagonalizedOperator,
    PreconditionerContext,
    PreconditionerSpec,
    build_preconditioner,
    make_context,
    preconditioned_condition,
)
from .problems import (
    BesselPoint,
    Combination,
    ErrorReport,
    PlaneWave,
    boundary_data,
    l2_relative_error,
    run_experiment,
    skinny_triangle,
)
from .solver import SolveConfig, SolveReport, direct_solve, gmres, solve_preconditioned
from .special import bessel_j, bessel_j_prime, bessel_j_small_arg, bessel_j_table, ln_gamma

__version__ = "0.1.0"
