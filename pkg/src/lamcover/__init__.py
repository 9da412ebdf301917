"""Finite triangulated laminations-by-planes toolkit.

Builds, at desk scale, the chain from a hyperfinite filtration of a
triangulated planar window to an explicit verified covering map onto the
flat torus, together with envelope, pile and discrete uniformization
utilities.
"""

from .complexes import (ComplexError, Region, TriangulatedComplex, boundary,
                        build_complex, classify_leaf, retract, star,
                        subdivide, triangulate_from_cover)
from .relations import (FinitePartition, Filtration, check_filtration,
                        class_cardinality, fundamental_domain,
                        induced_relation, saturate)
from .filtration import (Skeleton, associated_region, finite_volume_check,
                         hypercompact_filtration, interior_triangles,
                         skeleton)
from .envelope import (EnvelopeResult, envelope, envelope_bounded,
                       envelope_component, integral_decomposition,
                       strong_filtration)
from .pile import (Family, Pile, canonical_form, is_full_subpile,
                   pile_decompose, relative_decompose, semi_simple_decompose)
from .covering import (CoveringResult, Development, SuspensionInstance,
                       build_covering, covering_from_hyperfinite,
                       extend_development, fiber_relation, orbit_relation,
                       refine_development, retract_filtration, suspend,
                       validate_local_homeo)
from .uniformize import (DirichletProblem, conformal_residual,
                         cotangent_weights, dirichlet_solve, uniform_weights,
                         uniformizing_sequence)

__version__ = "0.1.0"
