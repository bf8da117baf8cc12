"""Egraph: a term DAG plus a congruence-closed equivalence on its nodes.

Nodes are created in term order and never removed.  The union-find always
keeps the oldest node id as class root, so class enumeration is
deterministic.  Disequalities are recorded as node pairs; they never drive
merging but make the graph reject inconsistent inputs, and they survive
into formula extraction.
"""
from __future__ import annotations

from .terms import Formula, InputError, Signature, Term, TermStore


class InconsistentFormulaError(InputError):
    pass


class ENode:
    __slots__ = ("id", "label", "children", "term")

    def __init__(self, id, label, children, term):
        self.id = id
        self.label = label
        self.children = children  # tuple of node ids, fixed at creation
        self.term = term

    def __repr__(self):
        return f"ENode({self.id}: {self.label})"


class EGraph:
    def __init__(self, sig: Signature, store: TermStore):
        self.sig = sig
        self.store = store
        self.nodes = []
        self._uf = []          # union-find parent per node id
        self._members = {}     # root id -> list of member ids
        self._parents = {}     # node id -> set of structural parent ids
        self._cong = {}        # (label, child root ids) -> node id
        self._term_node = {}   # term id -> node id
        self.diseqs = []       # recorded (node id, node id) pairs

    # -- construction ------------------------------------------------------

    @classmethod
    def from_formula(cls, sig, store, formula: Formula) -> "EGraph":
        g = cls(sig, store)
        for lit in formula.literals:
            if lit.kind == "eq":
                g.assert_eq(lit.lhs, lit.rhs)
            elif lit.kind == "ueq":
                g.add_term(store.mk_app("ueq", (lit.lhs, lit.rhs)))
                g.assert_eq(lit.lhs, lit.rhs)
            elif lit.kind == "diseq":
                g.assert_diseq(lit.lhs, lit.rhs)
            else:
                raise InputError(f"unknown literal kind '{lit.kind}'")
        return g

    def add_term(self, term: Term) -> int:
        """Ensure a node exists for term and all subterms; return its id."""
        hit = self._term_node.get(term.id)
        if hit is not None:
            return hit
        child_ids = tuple(self.add_term(c) for c in term.children)
        nid = len(self.nodes)
        node = ENode(nid, term.label, child_ids, term)
        self.nodes.append(node)
        self._uf.append(nid)
        self._members[nid] = [nid]
        self._parents[nid] = set()
        self._term_node[term.id] = nid
        for c in child_ids:
            self._parents[c].add(nid)
        key = self._canon_key(node)
        other = self._cong.setdefault(key, nid)
        if other != nid:
            self._merge(nid, other)
        return nid

    def assert_eq(self, t1: Term, t2: Term):
        a, b = self.add_term(t1), self.add_term(t2)
        self._merge(a, b)
        self._check_consistent()

    def assert_diseq(self, t1: Term, t2: Term):
        a, b = self.add_term(t1), self.add_term(t2)
        if (a, b) not in self.diseqs and (b, a) not in self.diseqs:
            self.diseqs.append((a, b))
        marker = self.store.mk_app("distinct", (t1, t2))
        self.assert_eq(marker, self.store.top)

    # -- union-find + congruence closure ------------------------------------

    def find(self, n: int) -> int:
        root = n
        while self._uf[root] != root:
            root = self._uf[root]
        while self._uf[n] != root:
            self._uf[n], n = root, self._uf[n]
        return root

    def _merge(self, a, b):
        queue = [(a, b)]
        while queue:
            x, y = queue.pop()
            rx, ry = self.find(x), self.find(y)
            if rx == ry:
                continue
            if rx > ry:
                rx, ry = ry, rx  # the older id stays root
            absorbed = self._members.pop(ry)
            self._uf[ry] = rx
            self._members[rx].extend(absorbed)
            # re-canonicalize parents of the absorbed class
            for m in absorbed:
                for p in self._parents[m]:
                    key = self._canon_key(self.nodes[p])
                    q = self._cong.setdefault(key, p)
                    if self.find(q) != self.find(p):
                        queue.append((q, p))

    def congruence_key(self, n: int):
        """(label, child class roots): equal keys mean congruent nodes."""
        return self._canon_key(self.nodes[n])

    def _canon_key(self, node: ENode):
        return (node.label, tuple(self.find(c) for c in node.children))

    def _check_consistent(self):
        top = self._term_node.get(self.store.top.id)
        bot = self._term_node.get(self.store.bot.id)
        if top is not None and bot is not None and self.find(top) == self.find(bot):
            raise InconsistentFormulaError("true and false were merged")
        for a, b in self.diseqs:
            if self.find(a) == self.find(b):
                na, nb = self.nodes[a], self.nodes[b]
                raise InconsistentFormulaError(
                    f"disequal terms merged: {na.term!r} and {nb.term!r}")

    # -- views ---------------------------------------------------------------

    def class_of(self, n: int) -> list:
        """Member ids of n's class, in creation order."""
        return sorted(self._members[self.find(n)])

    def parents(self, n: int) -> set:
        return set(self._parents[n])

    def node_ids(self) -> range:
        return range(len(self.nodes))

    def roots(self) -> list:
        return sorted(self._members.keys())

    def num_classes(self) -> int:
        return len(self._members)

    def node_of_term(self, term: Term):
        return self._term_node.get(term.id)

    def var_names(self) -> list:
        """Variable labels present in the graph, in node-id order."""
        out = []
        for node in self.nodes:
            if node.label in self.sig.variables and node.label not in out:
                out.append(node.label)
        return out

    def check_congruence(self) -> bool:
        """Exhaustive Def-style congruence scan, for tests."""
        by_key = {}
        for node in self.nodes:
            if not node.children:
                continue
            key = self._canon_key(node)
            other = by_key.setdefault(key, node.id)
            if self.find(other) != self.find(node.id):
                return False
        return True

    def dump_dot(self, repr_fn=None) -> str:
        """DOT rendering: solid child edges, dashed red root edges, and
        dotted blue representative edges when a repr function is given."""
        lines = ["digraph egraph {"]
        for node in self.nodes:
            lines.append(f'  n{node.id} [label="{node.id}: {node.label}"];')
        for node in self.nodes:
            for c in node.children:
                lines.append(f"  n{node.id} -> n{c};")
        for node in self.nodes:
            root = self.find(node.id)
            if root != node.id:
                lines.append(f"  n{node.id} -> n{root} [style=dashed, color=red];")
        if repr_fn is not None:
            for node in self.nodes:
                for c in node.children:
                    rep = repr_fn.get(c)
                    if rep is not None:
                        lines.append(
                            f"  n{node.id} -> n{rep} [style=dotted, color=blue];")
        lines.append("}")
        return "\n".join(lines)
