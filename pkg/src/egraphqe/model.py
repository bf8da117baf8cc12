"""Finite first-order models and literal evaluation.

A model gives values to constants and variables, finite tables with a
default to functions, and sizes to uninterpreted sorts.  Arrays are finite
maps plus a default (entries equal to the default are normalized away, so
structural equality is extensional equality); datatype values are
constructor trees.  Applying a selector to the wrong constructor returns a
fixed per-sort default value.
"""
from __future__ import annotations

from dataclasses import dataclass

from .sexpr import Atom, SExprError, read_all
from .terms import InputError, Literal, Signature, Sort, SortKind, Term


class ModelError(InputError):
    pass


@dataclass(frozen=True)
class Value:
    pass


@dataclass(frozen=True)
class IntVal(Value):
    n: int

    def __repr__(self):
        return str(self.n)


@dataclass(frozen=True)
class BoolVal(Value):
    b: bool

    def __repr__(self):
        return "true" if self.b else "false"


@dataclass(frozen=True)
class Elem(Value):
    sort: str
    k: int

    def __repr__(self):
        return f"(elem {self.sort} {self.k})"


@dataclass(frozen=True)
class ArrayVal(Value):
    default: Value
    entries: tuple  # sorted ((key, value), ...) with value != default

    def __repr__(self):
        inner = " ".join(f"({k!r} {v!r})" for k, v in self.entries)
        sep = " " + inner if inner else ""
        return f"(array (default {self.default!r}){sep})"


@dataclass(frozen=True)
class AdtVal(Value):
    ctor: str
    args: tuple

    def __repr__(self):
        if not self.args:
            return f"({self.ctor})"
        return f"({self.ctor} " + " ".join(repr(a) for a in self.args) + ")"


def mk_array(default: Value, mapping) -> ArrayVal:
    entries = tuple(sorted(((k, v) for k, v in dict(mapping).items()
                            if v != default), key=lambda kv: repr(kv[0])))
    return ArrayVal(default, entries)


def array_read(arr: ArrayVal, key: Value) -> Value:
    for k, v in arr.entries:
        if k == key:
            return v
    return arr.default


def array_write(arr: ArrayVal, key: Value, val: Value) -> ArrayVal:
    mapping = dict(arr.entries)
    mapping[key] = val
    return mk_array(arr.default, mapping)


def default_value(sort: Sort) -> Value:
    if sort.kind is SortKind.INT:
        return IntVal(0)
    if sort.kind is SortKind.BOOL:
        return BoolVal(False)
    if sort.kind is SortKind.UNINTERPRETED:
        return Elem(sort.name, 0)
    if sort.kind is SortKind.ARRAY:
        return ArrayVal(default_value(sort.value), ())
    if sort.kind is SortKind.ADT:
        ctor = sort.constructors[0]
        return AdtVal(ctor.name,
                      tuple(default_value(s) for _, s in ctor.selectors))
    raise ModelError(f"no default for sort {sort}")


@dataclass(frozen=True)
class Model:
    constants: dict       # name -> Value (covers variables as well)
    functions: dict       # name -> (default Value, {arg tuple: Value})
    universes: dict       # uninterpreted sort name -> size

    def with_constant(self, name, value: Value) -> "Model":
        if name in self.constants:
            raise ModelError(f"'{name}' is already interpreted")
        consts = dict(self.constants)
        consts[name] = value
        return Model(consts, self.functions, self.universes)


def extend(model: Model, name, value: Value) -> Model:
    return model.with_constant(name, value)


def eval_term(model: Model, sig: Signature, term: Term) -> Value:
    label = term.label
    args = [eval_term(model, sig, c) for c in term.children]
    if label.isdigit():
        return IntVal(int(label))
    if label == "true":
        return BoolVal(True)
    if label == "false":
        return BoolVal(False)
    if label in ("+", "-", "*", ">", "<", ">=", "<="):
        a, b = args
        if not isinstance(a, IntVal) or not isinstance(b, IntVal):
            raise ModelError(f"arithmetic on non-integers in {term!r}")
        if label == "+":
            return IntVal(a.n + b.n)
        if label == "-":
            return IntVal(a.n - b.n)
        if label == "*":
            return IntVal(a.n * b.n)
        if label == ">":
            return BoolVal(a.n > b.n)
        if label == "<":
            return BoolVal(a.n < b.n)
        if label == ">=":
            return BoolVal(a.n >= b.n)
        return BoolVal(a.n <= b.n)
    if label == "read":
        return array_read(args[0], args[1])
    if label == "write":
        return array_write(args[0], args[1], args[2])
    if label == "ueq":
        return BoolVal(args[0] == args[1])
    if label == "distinct":
        return BoolVal(args[0] != args[1])
    if label == "peq":
        return BoolVal(_partial_eq(args[0], args[1], args[2:]))
    ctor = _constructor_of(sig, term)
    if ctor is not None:
        return AdtVal(label, tuple(args))
    hit = _selector_or_tester(sig, term)
    if hit is not None:
        return hit(args[0])
    if label in model.constants:
        return model.constants[label]
    if label in model.functions:
        default, table = model.functions[label]
        return table.get(tuple(args), default)
    raise ModelError(f"symbol '{label}' has no interpretation")


def _partial_eq(a: ArrayVal, b: ArrayVal, off) -> bool:
    keys = {k for k, _ in a.entries} | {k for k, _ in b.entries} | set(off)
    if a.default != b.default:
        return False
    for k in keys:
        if k in off:
            continue
        if array_read(a, k) != array_read(b, k):
            return False
    return True


def _constructor_of(sig, term):
    decl = sig.functions.get(term.label)
    if decl is None:
        return None
    _, result = decl
    if result.kind is SortKind.ADT:
        for ctor in result.constructors:
            if ctor.name == term.label:
                return ctor
    return None


def _selector_or_tester(sig, term):
    if not term.children:
        return None
    arg_sort = term.children[0].sort
    if arg_sort.kind is not SortKind.ADT:
        return None
    label = term.label
    for ctor in arg_sort.constructors:
        if label == ctor.tester:
            return lambda v: BoolVal(isinstance(v, AdtVal) and v.ctor == ctor.name)
        for i, (sel, sel_sort) in enumerate(ctor.selectors):
            if label == sel:
                def apply(v, i=i, ctor=ctor, sel_sort=sel_sort):
                    if isinstance(v, AdtVal) and v.ctor == ctor.name:
                        return v.args[i]
                    return default_value(sel_sort)
                return apply
    return None


def holds(model: Model, sig: Signature, lit: Literal) -> bool:
    lhs = eval_term(model, sig, lit.lhs)
    rhs = eval_term(model, sig, lit.rhs)
    if lit.kind == "diseq":
        return lhs != rhs
    return lhs == rhs


def satisfies(model: Model, sig: Signature, formula) -> bool:
    return all(holds(model, sig, lit) for lit in formula.literals)


# -- model files -------------------------------------------------------------

def parse_model(text: str, sig: Signature) -> Model:
    """Read a model file
    ``(define-value name value)`` / ``(define-fun-values name (default v)
    ((arg ...) v) ...)`` / ``(universe S k)``."""
    try:
        forms = read_all(text)
    except SExprError as e:
        raise ModelError(str(e)) from e
    constants = {}
    functions = {}
    universes = {}
    for form in forms:
        if not isinstance(form, list) or not form or not isinstance(form[0], Atom):
            raise ModelError("expected a model command")
        head = form[0].text
        if head == "define-value" and len(form) == 3:
            name = _name(form[1])
            if name in constants:
                raise ModelError(f"duplicate value for '{name}'")
            constants[name] = parse_value(form[2], sig)
        elif head == "define-fun-values" and len(form) >= 3:
            name = _name(form[1])
            default = _parse_default(form[2], sig)
            table = {}
            for entry in form[3:]:
                if not isinstance(entry, list) or len(entry) != 2 \
                        or not isinstance(entry[0], list):
                    raise ModelError(f"bad table entry for '{name}'")
                key = tuple(parse_value(a, sig) for a in entry[0])
                if key in table:
                    raise ModelError(f"duplicate table entry for '{name}'")
                table[key] = parse_value(entry[1], sig)
            functions[name] = (default, table)
        elif head == "universe" and len(form) == 3:
            universes[_name(form[1])] = int(_name(form[2]))
        else:
            raise ModelError(f"unknown model command '{head}'")
    return Model(constants, functions, universes)


def parse_value(form, sig: Signature) -> Value:
    if isinstance(form, Atom):
        t = form.text
        if t == "true":
            return BoolVal(True)
        if t == "false":
            return BoolVal(False)
        if t.lstrip("-").isdigit():
            return IntVal(int(t))
        raise ModelError(f"bad value '{t}' at {form.line}:{form.col}")
    if not form or not isinstance(form[0], Atom):
        raise ModelError("bad value")
    head = form[0].text
    if head == "elem" and len(form) == 3:
        sort = _name(form[1])
        if sort not in sig.sorts:
            raise ModelError(f"unknown sort '{sort}' in element value")
        return Elem(sort, int(_name(form[2])))
    if head == "array" and len(form) >= 2:
        default = _parse_default(form[1], sig)
        mapping = {}
        for entry in form[2:]:
            if not isinstance(entry, list) or len(entry) != 2:
                raise ModelError("array entry must be (key value)")
            key = parse_value(entry[0], sig)
            if key in mapping:
                raise ModelError(f"duplicate array key {key!r}")
            mapping[key] = parse_value(entry[1], sig)
        return mk_array(default, mapping)
    # constructor application
    for sort in sig.sorts.values():
        for ctor in sort.constructors:
            if ctor.name == head:
                if len(form) != 1 + ctor.arity:
                    raise ModelError(f"constructor '{head}' expects {ctor.arity} values")
                return AdtVal(head, tuple(parse_value(a, sig) for a in form[1:]))
    raise ModelError(f"bad value head '{head}'")


def _parse_default(form, sig):
    if not isinstance(form, list) or len(form) != 2 or _name(form[0]) != "default":
        raise ModelError("expected (default value)")
    return parse_value(form[1], sig)


def _name(form) -> str:
    if not isinstance(form, Atom):
        raise ModelError("expected a symbol")
    return form.text
