"""Strong Weil curves over rational function fields of finite fields.

Exact arithmetic for elliptic curves over F_q(T) with conductor of degree 3
at the finite places plus split multiplicative reduction at infinity.
"""

from .catalog import instantiate, load_catalog, verify_entry
from .curves import Curve, reduction_profile
from .errors import DomainError, StrongWeilError, UsageError
from .gf import field_create, field_for_q
from .homology import analyze, build_graph, strong_weil_curve

__all__ = [
    "Curve", "DomainError", "StrongWeilError", "UsageError", "analyze", "build_graph",
    "field_create", "field_for_q", "instantiate", "load_catalog", "reduction_profile",
    "strong_weil_curve", "verify_entry",
]
__version__ = "0.1.0"
