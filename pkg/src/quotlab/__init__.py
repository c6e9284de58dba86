"""Exact computations with commuting matrices and finite-degree modules over k[y1..yn]."""

from .admodules import (StablePair, hilbert_function, local_hilbert_function, perp_of_dual_gens,
                        quot_point, tuple_from_module)
from .catalog import (enumerate_components, enumerate_quot_components, replay_tables,
                      verify_witness, witness)
from .deform import (elementary_smoothness, ext1_graded, has_trivial_negative_tangents, hom_graded,
                     local_tangent_report)
from .errors import QuotlabError
from .field import QQ, default_field, prime_field
from .modules import ModulePresentation
from .obstruct import (dim_upper_certificate, nonreducedness_verdict, obstruction_identities,
                       obstruction_quadrics, primary_obstruction)
from .resolution import betti_table, dual_resolution_check, minimal_free_resolution
from .tuples import CommTuple, joint_eigenspaces, support_points, tangent_dimension, tangent_space

__version__ = "0.1.0"
