"""Exact toolkit for patterns of marginal independence.

For an n-party quantum system with purifier: enumerate the mutual
information arrangement, compute the subset of vanishing patterns compatible
with entropy-inequality families via exact extreme-ray enumeration, and
decide tensor-product realizability against catalogs of known states.
"""

from .indices import dim
from .vectors import EntropyVector, eval_functional, zero_vector
from .mia import (
    MIInstance,
    Pattern,
    closure,
    compare,
    enumerate_mia,
    join,
    make_instance,
    meet,
    mia_context,
    pattern_from_names,
    pattern_of_vector,
    permute_pattern,
)
from .inequalities import FAMILY_NAMES, generate_inequalities, parse_families
from .dd import (
    Cone,
    Face,
    NonPointedConeError,
    brute_force_rays,
    build_cone,
    extreme_rays,
    minimal_face_containing,
)
from .lp import lp_feasible
from .gset import (
    PatternSet,
    admits_monotone_representative,
    compare_g,
    compute_g,
    compute_g_oracle,
)
from .states import (
    Catalog,
    CheckMatrix,
    GeneratorSpec,
    bell_vector,
    build_catalog,
    ghz_vector,
    perfect_vector,
    realize_pattern,
    stabilizer_entropy_vector,
    standard_specs,
)

__version__ = "0.1.0"

__all__ = [
    "dim",
    "EntropyVector",
    "eval_functional",
    "zero_vector",
    "MIInstance",
    "Pattern",
    "closure",
    "compare",
    "enumerate_mia",
    "join",
    "make_instance",
    "meet",
    "mia_context",
    "pattern_from_names",
    "pattern_of_vector",
    "permute_pattern",
    "FAMILY_NAMES",
    "generate_inequalities",
    "parse_families",
    "Cone",
    "Face",
    "NonPointedConeError",
    "brute_force_rays",
    "build_cone",
    "extreme_rays",
    "minimal_face_containing",
    "lp_feasible",
    "PatternSet",
    "admits_monotone_representative",
    "compare_g",
    "compute_g",
    "compute_g_oracle",
    "Catalog",
    "CheckMatrix",
    "GeneratorSpec",
    "bell_vector",
    "build_catalog",
    "ghz_vector",
    "perfect_vector",
    "realize_pattern",
    "stabilizer_entropy_vector",
    "standard_specs",
    "__version__",
]
