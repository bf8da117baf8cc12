"""Minimal s-expression reader shared by the problem and model parsers."""
from __future__ import annotations

from typing import NamedTuple, Union


class Atom(NamedTuple):
    text: str
    line: int
    col: int

    def __str__(self):
        return self.text


SExpr = Union[Atom, list]


class SExprError(Exception):
    def __init__(self, msg, line=None, col=None):
        if line is not None:
            msg = f"{msg} at {line}:{col}"
        super().__init__(msg)
        self.line = line
        self.col = col


def tokenize(text):
    """Yield Atom tokens plus bare '(' / ')' markers; ';' starts a comment."""
    line, col = 1, 0
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 0
            i += 1
        elif ch in " \t\r":
            col += 1
            i += 1
        elif ch == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif ch in "()":
            yield Atom(ch, line, col)
            col += 1
            i += 1
        else:
            start = i
            startcol = col
            while i < n and text[i] not in " \t\r\n();":
                i += 1
                col += 1
            yield Atom(text[start:i], line, startcol)


def read_all(text):
    """Parse the whole input into a list of nested s-expressions."""
    stack = [[]]
    opens = []
    for tok in tokenize(text):
        if tok.text == "(":
            stack.append([])
            opens.append(tok)
        elif tok.text == ")":
            if len(stack) == 1:
                raise SExprError("unbalanced ')'", tok.line, tok.col)
            done = stack.pop()
            opens.pop()
            stack[-1].append(done)
        else:
            stack[-1].append(tok)
    if len(stack) != 1:
        tok = opens[-1]
        raise SExprError("unclosed '('", tok.line, tok.col)
    return stack[0]
