"""Extensions of rational maps of the Riemann sphere over hyperbolic 3-space.

The package provides the commutative star-product on the closed upper
half-space (pushforward of addition through an extended exponential),
product / radial / open-book / barycentric extensions of rational maps,
an escape-time renderer for the spatial filled Julia sets of the
extended quadratic family, and a CLI over all of it.
"""

from .geometry import (
    INF,
    ball_to_halfspace,
    geodesic_interpolate,
    halfspace_to_ball,
    hyperbolic_distance,
    is_inf,
    stereographic_lift,
    stereographic_project,
)
from .mobius import (
    MobiusTransform,
    OpenBookCoords,
    mobius,
    page_decompose,
    poincare_extend,
    preserves_unit_circle,
    tau_phi,
)
from .maps import (
    BlaschkeProduct,
    MobiusFactor,
    MobiusFactorization,
    PowerSeries,
    RationalMap,
    blaschke_to_rational,
    compose_rational,
    critical_points,
    enumerate_pairings,
    eval_rational,
    factor_rational,
    is_power_conjugate,
    linearizer_series,
    polynomial_roots,
    rational,
)
from .star import (
    exp_hat,
    exp_hat_inverse,
    product_extension,
    q_hat,
    q_hat_c,
    star_product,
    vertical_extension,
)
from .extensions import (
    ExtensionMethod,
    SphericalQuadrature,
    ball_poincare_extend,
    conformal_barycenter,
    conformal_natural_extension,
    extension_operator,
    fibonacci_quadrature,
    homotopy_interpolate,
    naturality_deviation,
    open_book_extension,
    radial_extension,
    ring_quadrature,
    visual_extension,
)
from .julia3d import (
    EscapeGrid,
    SliceSpec,
    VolumeGrid,
    VolumeSpec,
    classical_escape_count,
    escape_count,
    render_boundary,
    render_slice,
    render_volume,
    slice_stats,
)

__version__ = "0.1.0"
