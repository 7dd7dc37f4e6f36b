"""Algebraic number theory over Q at desk scale: field descriptions,
prime splitting, class groups, principality, effective bounds, and
per-prime density scans."""

from .classgroup import (  # noqa: F401
    ClassGroupData,
    class_group,
    ideal_class,
    is_principal,
    principal_certificate,
    principal_order,
    principality_bound,
)
from .fields import (  # noqa: F401
    FieldDescription,
    bach_sorenson_bound,
    build_generic,
    build_multiquadratic,
    build_quadratic,
    field_from_config,
    lenstra_class_bound,
    minkowski_bound,
)
from .ideals import (  # noqa: F401
    PrimeIdeal,
    frobenius,
    ideal_norm,
    ideal_power,
    ideal_product,
    principal_ideal_basis,
    split_prime,
)
from .scan import (  # noqa: F401
    DensityReport,
    ScanRecord,
    empirical_density,
    scan_primes,
)
