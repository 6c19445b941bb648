"""Quotient quandles and FLAG invariants of classical and virtual knots."""

from .diagram import DiagramError, KnotDiagram, mirror, parse_gauss, parse_pd, unknot
from .flag import alexander_poly, flag_ideal, flag_invariant, knot_determinant
from .groebner import Ideal, canonicalize, ideal_equal, rational_groebner, strong_groebner
from .planar import planarize
from .polyring import DEFAULT_ORDER, MonomialOrder, Polynomial, parse_poly
from .presentation import Budget, CompletionResult, PresentationMatrix, complete, from_relations, quotient
from .quandle import AxiomSet, FiniteQuandle, are_isomorphic, verify_axioms
from .tables import load_knot

__version__ = "0.1.0"
