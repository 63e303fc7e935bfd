"""Exact tools for quadric ideals: Groebner bases, regular sequences,
Betti tables, regularity and strength, plus the equivariant family
``f_{n,i,j} = sum_s x[s,i] x[s,j]``."""

from .field import DEFAULT_PRIME, QQ, FieldError, FieldSpec
from .groebner import Caps, GroebnerBasis, ResourceCapExceeded, buchberger, initial_ideal, normal_form
from .invariants import HilbertSeries, hilbert_ci_check, hilbert_series, is_regular_sequence, krull_dimension
from .koszul import BettiTable, ci_betti_analytic, compute_betti, koszul_tor, regularity
from .parser import ParseError, parse_poly
from .poly import Frame, MonomialOrder, PolyRing, Polynomial, format_poly, specialize
from .strength import (
    collective_strength_exact,
    collective_strength_family,
    collective_strength_sampled,
    gram_matrix,
    quadric_strength,
)
from .family import FamilySpec, g_sweep, generator, orbit_generators, sequence_F, verify_theorem

__version__ = "0.1.0"
