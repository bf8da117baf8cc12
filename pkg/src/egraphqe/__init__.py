"""Egraph-based quantifier reduction and model-based projection.

Conjunctions of equality literals over uninterpreted functions, arrays, and
non-recursive algebraic datatypes are loaded into an egraph; quantifier
reduction picks ground class representatives and extracts an equivalent
conjunction over fewer variables, while model-based projection saturates
theory rules under a model to eliminate array/datatype variables entirely.
"""

from .egraph import EGraph, InconsistentFormulaError
from .extraction import (ExtractionBudgetError, InadmissibleReprError, ReprFn,
                         build_repr_graph, is_admissible, is_admissible_partial,
                         to_expr, to_formula)
from .mbp import MbpResult, ModelMismatchError, SaturationBudgetError, mbp
from .model import (AdtVal, ArrayVal, BoolVal, Elem, IntVal, Model, eval_term,
                    extend, holds, mk_array, parse_model, satisfies)
from .oracle import (Bounds, SearchSpaceError, Verdict, equiv_exists,
                     find_model, implies_exists)
from .parser import ParseError, Problem, parse_formula, parse_problem
from .qel import (CGroundInfo, compute_cground, core_reachable_nodes,
                  find_core, find_defs, is_maximally_ground, process, qel,
                  refine_defs)
from .terms import (Formula, InputError, Literal, Signature, Sort, SortKind,
                    Term, TermStore, formula_to_sexpr, literal_to_sexpr,
                    term_to_sexpr)

__all__ = [
    "AdtVal", "ArrayVal", "BoolVal", "Bounds", "CGroundInfo", "EGraph",
    "Elem", "ExtractionBudgetError", "Formula", "InadmissibleReprError",
    "InconsistentFormulaError", "InputError", "IntVal", "Literal",
    "MbpResult", "Model", "ModelMismatchError", "ParseError", "Problem",
    "ReprFn", "SaturationBudgetError", "SearchSpaceError", "Signature",
    "Sort", "SortKind", "Term", "TermStore", "Verdict", "build_repr_graph",
    "compute_cground", "core_reachable_nodes", "equiv_exists", "eval_term",
    "extend", "find_core",
    "find_defs", "find_model", "formula_to_sexpr", "holds", "implies_exists",
    "is_admissible", "is_admissible_partial", "is_maximally_ground",
    "literal_to_sexpr", "mbp", "mk_array", "parse_formula", "parse_model",
    "parse_problem", "process", "qel", "refine_defs", "satisfies",
    "term_to_sexpr", "to_expr", "to_formula",
]
