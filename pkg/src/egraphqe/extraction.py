"""Representative functions and node-to-term / egraph-to-formula extraction.

A representative function picks one node per class; extraction rebuilds a
term for a node by recursively replacing every child with the extraction of
its representative.  That recursion terminates exactly when the induced
graph (node -> representative of child) is acyclic, which together with
per-class uniqueness and root-consistency makes the function admissible.
Extraction depth is capped at the class count: an admissible function can
never exceed it, so blowing the budget doubles as a cycle detector.
"""
from __future__ import annotations

from typing import Iterable, Mapping, Optional

from .egraph import EGraph
from .terms import Formula, Literal, Term, mk_formula

# labels that are internal bookkeeping of the projection rules; their
# content is always present elsewhere in the graph (see mbp), so extraction
# never emits literals for them
_INTERNAL_LABELS = ("peq",)


class InadmissibleReprError(Exception):
    pass


class ExtractionBudgetError(InadmissibleReprError):
    pass


class ReprFn:
    """Partial map node id -> representative node id (absent = undefined)."""

    def __init__(self, assignment=None):
        self.assignment = dict(assignment) if assignment else {}

    def get(self, n) -> Optional[int]:
        return self.assignment.get(n)

    def defined(self, n) -> bool:
        return n in self.assignment

    def set_class(self, g: EGraph, rep: int):
        for m in g.class_of(rep):
            self.assignment[m] = rep

    def is_rep(self, n) -> bool:
        return self.assignment.get(n) == n

    def reps(self) -> set:
        return set(self.assignment.values())

    def copy(self) -> "ReprFn":
        return ReprFn(self.assignment)

    def __repr__(self):
        return f"ReprFn({self.assignment})"


def build_repr_graph(g: EGraph, r: ReprFn) -> set:
    """Edge set {(n, repr(c)) | c child of n, repr(c) defined}."""
    edges = set()
    for node in g.nodes:
        for c in node.children:
            rep = r.get(c)
            if rep is not None:
                edges.add((node.id, rep))
    return edges


def has_cycle(g: EGraph, r: ReprFn) -> bool:
    succ = {}
    for a, b in build_repr_graph(g, r):
        succ.setdefault(a, set()).add(b)
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {n: WHITE for n in g.node_ids()}
    for start in g.node_ids():
        if color[start] != WHITE:
            continue
        stack = [(start, iter(succ.get(start, ())))]
        color[start] = GRAY
        while stack:
            n, it = stack[-1]
            advanced = False
            for nxt in it:
                if color[nxt] == GRAY:
                    return True
                if color[nxt] == WHITE:
                    color[nxt] = GRAY
                    stack.append((nxt, iter(succ.get(nxt, ()))))
                    advanced = True
                    break
            if not advanced:
                color[n] = BLACK
                stack.pop()
    return False


def _class_consistent(g: EGraph, r: ReprFn, require_total: bool) -> bool:
    for root in g.roots():
        members = g.class_of(root)
        assigned = [m for m in members if r.defined(m)]
        if require_total and len(assigned) != len(members):
            return False
        if not assigned:
            continue
        reps = {r.get(m) for m in assigned}
        if len(reps) != 1:
            return False
        rep = reps.pop()
        if rep not in members:
            return False
        if not require_total and len(assigned) != len(members):
            return False  # partially assigned class
    return True


def is_admissible(g: EGraph, r: ReprFn) -> bool:
    """Total admissibility: unique in-class representative per class,
    representative equivalence = root equivalence, acyclic repr graph."""
    if not _class_consistent(g, r, require_total=True):
        return False
    return not has_cycle(g, r)


def is_admissible_partial(g: EGraph, r: ReprFn) -> bool:
    """Admissibility for partial functions: defined classes are fully and
    consistently assigned, the defined repr graph is acyclic, and every
    representative has all children defined."""
    if not _class_consistent(g, r, require_total=False):
        return False
    for rep in r.reps():
        if any(not r.defined(c) for c in g.nodes[rep].children):
            return False
    return not has_cycle(g, r)


def to_expr(g: EGraph, n: int, r: ReprFn, _memo=None) -> Term:
    """Term of node n with every child replaced by its representative's
    extraction.  Raises ExtractionBudgetError when recursion exceeds the
    class count, which signals an inadmissible representative function."""
    budget = g.num_classes()
    memo = _memo if _memo is not None else {}

    def rec(m, depth):
        if depth > budget:
            raise ExtractionBudgetError(
                f"extraction exceeded depth {budget}; repr graph has a cycle")
        hit = memo.get(m)
        if hit is not None:
            return hit
        node = g.nodes[m]
        if not node.children:
            out = node.term
        else:
            args = []
            for c in node.children:
                rep = r.get(c)
                if rep is None:
                    raise InadmissibleReprError(
                        f"representative undefined for node {c}")
                args.append(rec(rep, depth + 1))
            out = g.store.mk_app(node.label, args)
        memo[m] = out
        return out

    return rec(n, 0)


def extract_terms(g: EGraph, r: ReprFn, nodes: Iterable[int]) -> Mapping[int, Term]:
    memo = {}
    return {n: to_expr(g, n, r, _memo=memo) for n in nodes}


def to_formula(g: EGraph, r: ReprFn, exclude=frozenset()) -> Formula:
    """Formula of the egraph under r, omitting literals for excluded nodes.

    Per class, emits representative-extraction = member-extraction for each
    non-excluded member; recorded disequalities are emitted over the
    representative extractions whenever both endpoint classes keep at least
    one non-excluded node.  Duplicate and reflexive literals are dropped.
    With an empty exclusion set the result's existential closure matches the
    input formula's.
    """
    if not _class_consistent(g, r, require_total=True):
        raise InadmissibleReprError("not a unique in-class assignment per class")
    exclude = set(exclude)
    memo = {}
    literals = []
    seen_pairs = set()

    def emit(kind, lhs, rhs):
        if lhs is rhs and kind == "eq":
            return
        key = (kind, frozenset((lhs.id, rhs.id)))
        if key in seen_pairs:
            return
        seen_pairs.add(key)
        literals.append(Literal(kind, lhs, rhs))

    for node in g.nodes:
        if r.get(node.id) != node.id:
            continue
        members = g.class_of(node.id)
        rep_term = to_expr(g, node.id, r, _memo=memo)
        for m in members:
            if m == node.id or m in exclude:
                continue
            mnode = g.nodes[m]
            if mnode.label in _INTERNAL_LABELS:
                continue
            if mnode.label == "distinct":
                # a recorded disequality held in the true-class; emit it in
                # disequality form so it merges with the channel below
                lhs = to_expr(g, r.get(mnode.children[0]), r, _memo=memo)
                rhs = to_expr(g, r.get(mnode.children[1]), r, _memo=memo)
                emit("diseq", lhs, rhs)
                continue
            emit("eq", rep_term, to_expr(g, m, r, _memo=memo))

    for a, b in g.diseqs:
        if _class_all_excluded(g, a, exclude) or _class_all_excluded(g, b, exclude):
            continue
        lhs = to_expr(g, r.get(a), r, _memo=memo)
        rhs = to_expr(g, r.get(b), r, _memo=memo)
        emit("diseq", lhs, rhs)

    return mk_formula(g.store, literals)


def _class_all_excluded(g, n, exclude):
    return all(m in exclude for m in g.class_of(n))
