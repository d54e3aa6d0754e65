"""Boundary-reduced quadrature for implicitly defined finite element
functions on curvilinear polygons.

Volume integrals of products (and gradient products) of functions that are
only known through polynomial Poisson data are reduced to boundary
quadratures: graded trapezoid rules on each edge, second-kind integral
equations for the Neumann-to-Dirichlet map, and anti-Laplacian
constructions for polynomials and harmonic functions.
"""

from .cellgeom import (
    ArcEdge,
    Cell,
    FuncEdge,
    LineEdge,
    build_circle,
    build_pacman,
    build_puzzle,
    build_square,
    cell_from_file,
    validate_cell,
)
from .harmonic import (
    HarmonicAntiLaplacian,
    TraceSamples,
    anti_laplacian_harmonic,
    dirichlet_to_neumann,
    harmonic_conjugate,
    tangential_derivative,
)
from .kressquad import BoundaryGrid, build_grid, integrate_boundary, kress_lambda, kress_lambda_prime
from .nystrom import (
    CompatibilityError,
    NeumannProblem,
    NystromSolver,
    SolveReport,
    SolverError,
    kernel_dGdn,
    single_layer_apply,
    solve_neumann,
)
from .polyalg import (
    Poly2,
    anti_laplacian_poly,
    index_to_mi,
    mi_to_index,
    poly_eval,
    poly_grad,
    poly_laplacian,
    poly_mul,
    poly_normal_derivative_trace,
    poly_trace,
    poly_volume_integral,
)
from .vmspace import (
    LocalMatrix,
    VmFunction,
    Workspace,
    assemble_local_matrix,
    constant_one,
    from_polynomial,
    h1_product,
    l2_product,
    make_arc_linear_fn,
    make_bubble,
    make_edge_fn_product,
    make_vertex_fn,
)

__version__ = "0.1.0"
