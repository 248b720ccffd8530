"""Cellular automata on groups: constructive automata with mutually
erasable patterns but no Garden of Eden, and the finite checks behind them."""

__version__ = "0.1.0"

from .automata import (LazyConfiguration, LocalRule, Pattern, check_mep_certificate, evolve, evolve_at,
                       is_goe_bruteforce)
from .converse import (FieldRule, GeneralRule, build_theta, build_theta_general, mep_witness,
                       mep_witness_general, preimage, preimage_general)
from .correspondence import double_field, verify_correspondence
from .flow import build_correspondence, expansion_profile
from .groups import FreeGroup, FreeProduct, GenSet, Lattice, ball, group_from_name
from .linear import AlgebraElement, build_linear_rule, convolve, goe_witness_linear, kernel_scan, muller_rule
from .oracle import find_goe, find_mep, moore_sweep
from .treefield import build_tree_field, verify_field
