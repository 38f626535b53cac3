"""Unit-area cyclic quadrilaterals in sets of positive measure, and a set of
infinite measure whose equilateral convex polygons all have area below 1."""

from .errors import (
    AnchorNotFoundError,
    CertificationError,
    ConvergenceError,
    DegenerateCircleError,
    DegenerateError,
    DegenerateTriangleError,
    EmptyRegionError,
    ExhaustedCandidatesError,
    InputError,
    InvalidPolygonError,
    NoSliceError,
    NoSolutionError,
    NotFoundError,
    OutOfDomainError,
    ParseError,
    UnitPolyError,
    UnrealizableDistanceError,
    ValidationError,
)
from .geometry import (
    Circle,
    PlanarPoint,
    Polygon,
    RigidMotion,
    circumcircle,
    concyclicity_residual,
    is_convex_ccw,
    polygon_area,
    triangle_angles,
    triangle_signed_area,
)
from .perturbation import (
    AnchorTriangle,
    SolverConfig,
    jacobian_f_at_C,
    phi,
    phi_jacobians,
    solve_partner,
)
from .regions import CellRegion, QuadrantAxes, local_density, pair_at_distance, quadrant_select, slice_at
from .finder import (
    AnchorSearchConfig,
    FinderConfig,
    QuadCertificate,
    find_anchor_triangle,
    find_unit_cyclic_quad,
    verify_certificate,
)
from .hyperbola import (
    CaseCertificate,
    EquilateralPolygon,
    certify_area_bound,
    region_contains,
    secant_triangle,
    tangent_triangle,
    validate_polygon,
)
from .annealing import search_max_area

__version__ = "0.1.0"
