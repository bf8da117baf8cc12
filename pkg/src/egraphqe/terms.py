"""Sorts, signatures, and hash-consed terms.

The fragment handled everywhere in this package is a conjunction of
equality-shaped literals: t = u, t != u, and explicit equality ueq(t, u).
Predicate applications are encoded as P(args) = true / P(args) = false, so
the only Boolean structure is the top-level conjunction.  Arithmetic symbols
(numerals, +, -, *, >, ...) are ordinary function symbols here; they only
acquire meaning in the model evaluator and the finite-model oracle.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional, Sequence


class InputError(Exception):
    """A problem with the user-supplied input (syntax, sorts, consistency)."""


class SortMismatchError(InputError):
    pass


class UnknownSymbolError(InputError):
    pass


class DuplicateDeclarationError(InputError):
    pass


class SortKind(Enum):
    UNINTERPRETED = "uninterpreted"
    BOOL = "bool"
    INT = "int"
    ARRAY = "array"
    ADT = "adt"


@dataclass(frozen=True)
class Constructor:
    name: str
    selectors: tuple  # tuple of (selector name, Sort)

    @property
    def tester(self):
        return "is-" + self.name

    @property
    def arity(self):
        return len(self.selectors)


@dataclass(frozen=True)
class Sort:
    name: str
    kind: SortKind
    index: Optional["Sort"] = None
    value: Optional["Sort"] = None
    constructors: tuple = ()

    def __repr__(self):
        return self.name


BOOL = Sort("Bool", SortKind.BOOL)
INT = Sort("Int", SortKind.INT)

# Polymorphic builtins resolved structurally in mk_app rather than held in
# the function table: array access, disequality, explicit equality, and the
# partial-equality bookkeeping predicate used by array projection.
POLYMORPHIC = ("read", "write", "distinct", "ueq", "peq")

ARITH_FUNS = {
    "+": ((INT, INT), INT),
    "-": ((INT, INT), INT),
    "*": ((INT, INT), INT),
    ">": ((INT, INT), BOOL),
    "<": ((INT, INT), BOOL),
    ">=": ((INT, INT), BOOL),
    "<=": ((INT, INT), BOOL),
}


def array_sort(index: Sort, value: Sort) -> Sort:
    return Sort(f"(Array {index.name} {value.name})", SortKind.ARRAY,
                index=index, value=value)


class Signature:
    """Symbol table: sorts, functions, and the variables to eliminate.

    Constants are 0-ary functions.  Names flagged via declare_var are the
    free variables a reduction is allowed to remove; every other symbol is
    kept.  Numerals are auto-declared nullary Int functions on first use.
    """

    def __init__(self):
        self.sorts = {"Bool": BOOL, "Int": INT}
        self.functions = {"true": ((), BOOL), "false": ((), BOOL)}
        self.functions.update(ARITH_FUNS)
        self.variables = {}

    def _check_fresh(self, name):
        if name in self.functions or name in self.variables:
            raise DuplicateDeclarationError(f"'{name}' is already declared")
        if name in POLYMORPHIC:
            raise DuplicateDeclarationError(f"'{name}' is reserved")

    def declare_sort(self, name) -> Sort:
        if name in self.sorts:
            raise DuplicateDeclarationError(f"sort '{name}' is already declared")
        sort = Sort(name, SortKind.UNINTERPRETED)
        self.sorts[name] = sort
        return sort

    def ensure_array_sort(self, index: Sort, value: Sort) -> Sort:
        sort = array_sort(index, value)
        return self.sorts.setdefault(sort.name, sort)

    def declare_datatype(self, name, constructors) -> Sort:
        """constructors: iterable of (ctor name, [(selector name, Sort), ...])."""
        if name in self.sorts:
            raise DuplicateDeclarationError(f"sort '{name}' is already declared")
        ctors = tuple(Constructor(cn, tuple(sels)) for cn, sels in constructors)
        sort = Sort(name, SortKind.ADT, constructors=ctors)
        self.sorts[name] = sort
        for ctor in ctors:
            self._check_fresh(ctor.name)
            self.functions[ctor.name] = (tuple(s for _, s in ctor.selectors), sort)
            self._check_fresh(ctor.tester)
            self.functions[ctor.tester] = ((sort,), BOOL)
            for sel_name, sel_sort in ctor.selectors:
                self._check_fresh(sel_name)
                self.functions[sel_name] = ((sort,), sel_sort)
        return sort

    def declare_fun(self, name, arg_sorts: Sequence[Sort], result: Sort):
        self._check_fresh(name)
        self.functions[name] = (tuple(arg_sorts), result)

    def declare_const(self, name, sort: Sort):
        self.declare_fun(name, (), sort)

    def declare_var(self, name, sort: Sort):
        self._check_fresh(name)
        self.variables[name] = sort

    def is_variable(self, name) -> bool:
        return name in self.variables

    def _ensure_numeral(self, name):
        if name not in self.functions:
            self.functions[name] = ((), INT)

    def sort_of(self, name) -> Sort:
        """Sort of a nullary symbol (variable, constant, or numeral)."""
        if name in self.variables:
            return self.variables[name]
        if name.isdigit():
            self._ensure_numeral(name)
        if name in self.functions:
            args, result = self.functions[name]
            if args:
                raise SortMismatchError(f"'{name}' expects arguments")
            return result
        raise UnknownSymbolError(f"unknown symbol '{name}'")


@dataclass(frozen=True, eq=False)
class Term:
    """Hash-consed term; identity comparison is structural equality."""
    id: int
    label: str
    children: tuple
    sort: Sort
    ground: bool

    def __repr__(self):
        return term_to_sexpr(self)


class TermStore:
    """Hash-consing arena; one shared store per problem instance."""

    def __init__(self, sig: Signature):
        self.sig = sig
        self._table = {}
        self.terms = []
        self._var_cache = {}

    def mk_app(self, label: str, args: Sequence[Term] = ()) -> Term:
        args = tuple(args)
        sort = self._resolve_sort(label, args)
        key = (label, tuple(a.id for a in args))
        hit = self._table.get(key)
        if hit is not None:
            return hit
        ground = label not in self.sig.variables and all(a.ground for a in args)
        term = Term(len(self.terms), label, args, sort, ground)
        self.terms.append(term)
        self._table[key] = term
        return term

    def mk_const(self, label: str) -> Term:
        return self.mk_app(label, ())

    @property
    def top(self) -> Term:
        return self.mk_const("true")

    @property
    def bot(self) -> Term:
        return self.mk_const("false")

    def _resolve_sort(self, label, args) -> Sort:
        sig = self.sig
        if label == "read":
            arr = self._need_array(label, args, 2)
            self._check(label, args[1].sort, arr.index)
            return arr.value
        if label == "write":
            arr = self._need_array(label, args, 3)
            self._check(label, args[1].sort, arr.index)
            self._check(label, args[2].sort, arr.value)
            return arr
        if label in ("distinct", "ueq"):
            if len(args) != 2 or args[0].sort != args[1].sort:
                raise SortMismatchError(f"'{label}' needs two arguments of one sort")
            return BOOL
        if label == "peq":
            if len(args) < 2 or args[0].sort != args[1].sort \
                    or args[0].sort.kind is not SortKind.ARRAY:
                raise SortMismatchError("'peq' needs two array arguments")
            for ix in args[2:]:
                self._check(label, ix.sort, args[0].sort.index)
            return BOOL
        if label in sig.variables:
            if args:
                raise SortMismatchError(f"variable '{label}' applied to arguments")
            return sig.variables[label]
        if label.isdigit():
            sig._ensure_numeral(label)
        if label not in sig.functions:
            raise UnknownSymbolError(f"unknown symbol '{label}'")
        arg_sorts, result = sig.functions[label]
        if len(arg_sorts) != len(args):
            raise SortMismatchError(
                f"'{label}' expects {len(arg_sorts)} arguments, got {len(args)}")
        for got, want in zip(args, arg_sorts):
            self._check(label, got.sort, want)
        return result

    def _need_array(self, label, args, arity) -> Sort:
        if len(args) != arity or args[0].sort.kind is not SortKind.ARRAY:
            raise SortMismatchError(f"'{label}' expects an array first argument")
        return args[0].sort

    @staticmethod
    def _check(label, got, want):
        if got != want:
            raise SortMismatchError(f"'{label}': expected {want}, got {got}")

    def free_vars(self, term: Term) -> frozenset:
        """Names of the to-eliminate variables occurring in term."""
        cached = self._var_cache.get(term.id)
        if cached is not None:
            return cached
        if not term.children:
            out = frozenset((term.label,)) if term.label in self.sig.variables \
                else frozenset()
        else:
            out = frozenset().union(*(self.free_vars(c) for c in term.children))
        self._var_cache[term.id] = out
        return out


@dataclass(frozen=True)
class Literal:
    kind: str  # "eq" | "diseq" | "ueq"
    lhs: Term
    rhs: Term

    def __repr__(self):
        return literal_to_sexpr(self)


@dataclass(frozen=True)
class Formula:
    literals: tuple
    free_vars: tuple  # variable names, first-occurrence order

    def __repr__(self):
        return formula_to_sexpr(self)


def mk_formula(store: TermStore, literals: Iterable[Literal]) -> Formula:
    literals = tuple(literals)
    ordered = []
    for lit in literals:
        for side in (lit.lhs, lit.rhs):
            ordered.extend(v for v in _var_occurrences(store, side) if v not in ordered)
    return Formula(literals, tuple(ordered))


def _var_occurrences(store, term):
    if not term.children:
        return [term.label] if term.label in store.sig.variables else []
    out = []
    for c in term.children:
        out.extend(_var_occurrences(store, c))
    return out


def term_to_sexpr(term: Term) -> str:
    if not term.children:
        return term.label
    return "(" + " ".join([term.label] + [term_to_sexpr(c) for c in term.children]) + ")"


def literal_to_sexpr(lit: Literal) -> str:
    lhs, rhs = lit.lhs, lit.rhs
    if lit.kind == "diseq":
        return f"(distinct {term_to_sexpr(lhs)} {term_to_sexpr(rhs)})"
    if lit.kind == "ueq":
        return f"(ueq {term_to_sexpr(lhs)} {term_to_sexpr(rhs)})"
    # equalities with a Bool constant print in predicate form
    for a, b in ((lhs, rhs), (rhs, lhs)):
        if a.label == "true" and not a.children and b is not a:
            return _pred_to_sexpr(b)
        if a.label == "false" and not a.children and b is not a:
            return f"(not {_pred_to_sexpr(b)})"
    return f"(= {term_to_sexpr(lhs)} {term_to_sexpr(rhs)})"


def _pred_to_sexpr(term):
    if term.label == "distinct":
        return ("(distinct " + term_to_sexpr(term.children[0]) + " "
                + term_to_sexpr(term.children[1]) + ")")
    return term_to_sexpr(term)


def formula_to_sexpr(formula: Formula) -> str:
    if not formula.literals:
        return "true"
    return "(and " + " ".join(literal_to_sexpr(l) for l in formula.literals) + ")"
