"""Coupling-aware beamforming for dense planar antenna arrays.

Lengths are in wavelengths and directions are ``(theta, phi)`` with
``theta`` measured from +z and ``phi`` from +x.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ConfigurationError,
    DegenerateDirectionError,
    DomainError,
    HolosurfError,
    InvariantError,
    MeasurementError,
    NumericalError,
    SearchError,
)
from .geometry import (  # noqa: E402
    ENDFIRE,
    NORMAL,
    ArrayGeometry,
    Direction,
    Layout,
    angles_to_units,
    build_ula,
    build_ura,
    direction_to_unit,
)
from .radiation import (  # noqa: E402
    PatternKind,
    RadiationPattern,
    SphericalQuadrature,
    default_quadrature,
    dipole_pattern,
    directional_pattern,
    isotropic_pattern,
    make_pattern,
    spherical_integral,
    spherical_quadrature,
)
from .coupling import (  # noqa: E402
    DEFAULT_GAMMA,
    CouplingMatrix,
    CouplingMethod,
    TransferMatrix,
    coupling_along_axis,
    coupling_entry_iso,
    coupling_entry_quadrature,
    coupling_matrix,
    min_uncoupling_distance,
    transfer_matrix,
)
from .beamform import (  # noqa: E402
    BeamformingVector,
    BeamKind,
    GainResult,
    SteeringVector,
    batch_gains,
    batch_gains_multi,
    conventional_bf,
    gain,
    optimal_bf,
    optimal_gain_bound,
    steering_vector,
    steering_vectors,
    surface_pattern,
    surface_pattern_units,
    two_element_closed_form,
    zero_point_beamwidth,
)
