"""Gray codes for combinatorial structures described by stable succession rules."""
from .dsl import DSLSyntaxError, parse_rule, to_dsl
from .dyck import is_dyck, next_dyck, word_to_dyck
from .graylist import (
    GrayIterState,
    bfs_list,
    build_list,
    format_word,
    hamming,
    iter_advance,
    iter_bfs,
    iter_gray,
    iter_init,
    parse_word,
)
from .perm import generate_sn, label_of, theta
from .rules import (
    Label,
    NotStableError,
    Production,
    RuleError,
    StabilityCertificate,
    StabilityRefusal,
    SuccessionRule,
    builtin,
    check_stability,
)
from .shifted import Branch, ShiftedList, next_in_shifted, shifted_catalan, shifted_general

__all__ = [
    "Branch",
    "DSLSyntaxError",
    "GrayIterState",
    "Label",
    "NotStableError",
    "Production",
    "RuleError",
    "ShiftedList",
    "StabilityCertificate",
    "StabilityRefusal",
    "SuccessionRule",
    "bfs_list",
    "build_list",
    "builtin",
    "check_stability",
    "format_word",
    "generate_sn",
    "hamming",
    "is_dyck",
    "iter_advance",
    "iter_bfs",
    "iter_gray",
    "iter_init",
    "label_of",
    "next_dyck",
    "next_in_shifted",
    "parse_rule",
    "parse_word",
    "shifted_catalan",
    "shifted_general",
    "theta",
    "to_dsl",
    "word_to_dyck",
]
