"""Finite information systems with witnesses: states, approximable mappings,
products and function spaces, checked exhaustively at small sizes."""
from .approx import ApproxMapping, check_approx, compose, enumerate_mappings, identity, make_mapping
from .closure import Closure, am, check_ccc, enumerate_mappings_by_image, fct, fct_st_iso, roundtrips, st
from .config import DEFAULT_BUDGET, Budget, budget_from_env
from .core import (AXIOMS, ConsPair, InfoSystem, Verdict, build_system, check_alg, check_axioms, check_bc,
                   check_gip)
from .errors import BudgetExceeded, IswError, ParseError
from .fixtures import FIXTURES, bfly, bfly_poset, flat2, flat2_poset, term
from .function_space import Arrow, Exponent, ExpToken, materialize_exponent
from .io import export_dot, parse_mapping, parse_poset, parse_system, serialize_mapping, serialize_poset, \
    serialize_system
from .posets import FinitePoset, check_lpo, info_from_domain, make_poset, order_iso, pointed_posets
from .products import ProductSystem, pairing, product, terminal, terminal_mediator
from .states import StatePoset, check_ldomain, enumerate_states, is_state, local_lub

__version__ = "0.1.0"
