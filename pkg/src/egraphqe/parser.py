"""SMT-LIB-subset reader for problem files.

Supported commands:

    (declare-sort S 0)
    (declare-datatype P ((ctor (sel Sort) ...) ...))     ; non-recursive
    (declare-fun f (Sort ...) Sort)
    (declare-const c Sort)
    (declare-var x Sort)          ; marks x as a variable to eliminate
    (assert LIT)
    (qel) | (mbp)                 ; optional trailing command marker

Literals are (= t u), (distinct t u), (ueq t u), Bool applications, and
negated Bool applications.  Terms use read/write for array access and the
usual prefix arithmetic symbols; numerals are auto-declared.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .sexpr import Atom, SExprError, read_all
from .terms import (BOOL, Formula, InputError, Literal, Signature,
                    TermStore, mk_formula)


class ParseError(InputError):
    pass


@dataclass
class Problem:
    sig: Signature
    store: TermStore
    formula: Formula
    command: Optional[str]  # "qel" | "mbp" | None


def parse_problem(text: str) -> Problem:
    try:
        forms = read_all(text)
    except SExprError as e:
        raise ParseError(str(e)) from e
    sig = Signature()
    store = TermStore(sig)
    literals = []
    command = None
    for form in forms:
        if command is not None:
            raise ParseError(f"content after ({command})")
        if not isinstance(form, list) or not form or not isinstance(form[0], Atom):
            raise ParseError(f"expected a command, got {_show(form)}")
        head = form[0].text
        if head == "declare-sort":
            name, arity = _exact(form, 2, "declare-sort (name arity)")
            if _atom(arity) != "0":
                raise ParseError("only 0-ary sorts are supported")
            sig.declare_sort(_atom(name))
        elif head == "declare-datatype":
            name, ctors = _exact(form, 2, "declare-datatype (name ctor-list)")
            sig.declare_datatype(_atom(name), _parse_ctors(sig, ctors))
        elif head == "declare-fun":
            name, args, res = _exact(form, 3, "declare-fun (name args result)")
            if not isinstance(args, list):
                raise ParseError("declare-fun needs an argument sort list")
            sig.declare_fun(_atom(name), [_sort(sig, s) for s in args],
                            _sort(sig, res))
        elif head == "declare-const":
            name, srt = _exact(form, 2, "declare-const (name sort)")
            sig.declare_const(_atom(name), _sort(sig, srt))
        elif head == "declare-var":
            name, srt = _exact(form, 2, "declare-var (name sort)")
            sig.declare_var(_atom(name), _sort(sig, srt))
        elif head == "assert":
            (body,) = _exact(form, 1, "assert (literal)")
            literals.append(_literal(store, body))
        elif head in ("qel", "mbp"):
            if len(form) != 1:
                raise ParseError(f"({head}) takes no arguments")
            command = head
        else:
            raise ParseError(f"unknown command '{head}' at {form[0].line}:{form[0].col}")
    return Problem(sig, store, mk_formula(store, literals), command)


def parse_formula(text: str):
    """Convenience entry point: (Signature, Formula) of the input."""
    prob = parse_problem(text)
    return prob.sig, prob.formula


def _parse_ctors(sig, ctors):
    if not isinstance(ctors, list) or not ctors:
        raise ParseError("declare-datatype needs a non-empty constructor list")
    out = []
    for c in ctors:
        if not isinstance(c, list) or not c:
            raise ParseError("constructor must be (name (sel Sort) ...)")
        cname = _atom(c[0])
        sels = []
        for s in c[1:]:
            if not isinstance(s, list) or len(s) != 2:
                raise ParseError(f"selector of '{cname}' must be (name Sort)")
            sels.append((_atom(s[0]), _sort(sig, s[1])))
        out.append((cname, sels))
    return out


def _sort(sig, form):
    if isinstance(form, Atom):
        try:
            return sig.sorts[form.text]
        except KeyError:
            raise ParseError(f"unknown sort '{form.text}' at {form.line}:{form.col}")
    if isinstance(form, list) and len(form) == 3 and _atom(form[0]) == "Array":
        return sig.ensure_array_sort(_sort(sig, form[1]), _sort(sig, form[2]))
    raise ParseError(f"bad sort {_show(form)}")


def _literal(store, form) -> Literal:
    if isinstance(form, list) and form and isinstance(form[0], Atom):
        head = form[0].text
        if head == "=" and len(form) == 3:
            return Literal("eq", _term(store, form[1]), _term(store, form[2]))
        if head == "distinct" and len(form) == 3:
            return Literal("diseq", _term(store, form[1]), _term(store, form[2]))
        if head == "ueq" and len(form) == 3:
            return Literal("ueq", _term(store, form[1]), _term(store, form[2]))
        if head == "not" and len(form) == 2:
            inner = form[1]
            if isinstance(inner, list) and inner and _atom(inner[0]) == "distinct":
                return Literal("eq", _term(store, inner[1]), _term(store, inner[2]))
            app = _term(store, inner)
            _need_bool(app, form[0])
            return Literal("eq", app, store.bot)
    app = _term(store, form)
    _need_bool(app, None)
    return Literal("eq", app, store.top)


def _need_bool(term, where):
    if term.sort != BOOL:
        raise ParseError(f"literal '{term!r}' is not Bool-sorted")


def _term(store, form):
    if isinstance(form, Atom):
        store.sig.sort_of(form.text)  # raises for unknowns; auto-declares numerals
        return store.mk_const(form.text)
    if isinstance(form, list) and form and isinstance(form[0], Atom):
        head = form[0].text
        if head == "=":
            raise ParseError(f"nested '=' at {form[0].line}:{form[0].col}")
        args = [_term(store, f) for f in form[1:]]
        return store.mk_app(head, args)
    raise ParseError(f"bad term {_show(form)}")


def _exact(form, n, what):
    if len(form) != n + 1:
        raise ParseError(f"malformed {what}")
    return form[1:]


def _atom(form) -> str:
    if not isinstance(form, Atom):
        raise ParseError(f"expected a symbol, got {_show(form)}")
    return form.text


def _show(form):
    if isinstance(form, Atom):
        return f"'{form.text}'"
    inner = " ".join(_show(f) for f in form) if isinstance(form, list) else str(form)
    return f"({inner})"
