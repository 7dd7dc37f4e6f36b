"""Principal splitting densities for class field extensions.

The package computes, for an extension E of a finite group G by a finite
abelian kernel A, the densities of fibers whose elements trivialize under
prescribed power maps, and applies the resulting criteria to decide (under
GRH) that the extension attached to a Hilbert class field does not split,
by scanning primes up to an explicit bound.
"""

__version__ = "0.1.0"

from .abelian import AbelianGroup, AbelianElement, Subgroup  # noqa: F401
from .errors import (  # noqa: F401
    DataError,
    ExcludedPrime,
    FormulaInapplicable,
    InputError,
    InternalCheckError,
    PreconditionError,
    Undecided,
)
from .extension import (  # noqa: F401
    Extension,
    FiniteGroup,
    GAction,
    TwoCocycle,
)
from .density import (  # noqa: F401
    DensitySpec,
    DensityValue,
    class_group_from_densities,
    closed_form_density,
    closed_form_density_base,
    exact_order_density,
    find_nonsplit_with_positive_classes,
    genus_degree,
    norm_map_kernel,
    positivity,
    principal_density,
    tate_h1,
)
from .numberfield import (  # noqa: F401
    ClassGroupData,
    DensityReport,
    FieldDescription,
    PrimeIdeal,
    ScanRecord,
    bach_sorenson_bound,
    build_generic,
    build_multiquadratic,
    build_quadratic,
    class_group,
    empirical_density,
    field_from_config,
    frobenius,
    ideal_class,
    is_principal,
    lenstra_class_bound,
    minkowski_bound,
    principal_certificate,
    principal_order,
    principality_bound,
    scan_primes,
    split_prime,
)
from .verifier import (  # noqa: F401
    INCONCLUSIVE,
    NONSPLIT,
    ClassWitness,
    Verdict,
    example_4_1_regression,
    gold_certificate,
    hes_nonsplit_test,
)
