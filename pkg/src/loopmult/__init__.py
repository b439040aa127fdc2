"""Exact computations with three-dimensional loops: group models, sections,
translation fields, multiplication-group closure and transversal solving."""

from .groups import Amalg, F4, Filiform, FiliformR, G5, make_model
from .loops import LoopSpec, loop_ldiv, loop_mul, loop_rdiv, make_spec, reference_spec, verify_axioms
from .mult import identify_mult, map_exp, map_log
from .poly import Poly, translate_span_dim
from .sections import SectionSpec, induced_mul, sharp_transitivity_check
from .vfield import ClosureCapExceeded, VectorField, bracket, lie_closure

__version__ = "0.1.0"
