"""Quantifier reduction over egraphs.

The pipeline: build the egraph of the input conjunction, pick an admissible
representative function that is maximally ground (ground classes get a
constructively ground representative), refine variable representatives into
variable-free ones where acyclicity allows it, shrink the node set to a
core whose extraction keeps the existential closure, and extract.  Every
variable equated (even implicitly, through transitivity and congruence) to
a ground term is guaranteed to disappear.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional

from .egraph import EGraph
from .extraction import ReprFn, to_formula
from .terms import Formula, Signature, TermStore


@dataclass
class CGroundInfo:
    cground: set        # node ids that rewrite into ground terms
    ground_class: set   # roots of classes containing such a node

    def is_ground_class(self, g: EGraph, n: int) -> bool:
        return g.find(n) in self.ground_class


def compute_cground(g: EGraph) -> CGroundInfo:
    """Least fixpoint of: a node is constructively ground if its own term is
    ground, or it has children and every child's class contains one."""
    info = CGroundInfo(set(), set())
    pending = deque()

    def mark(n):
        info.cground.add(n)
        root = g.find(n)
        if root not in info.ground_class:
            info.ground_class.add(root)
            for m in g.class_of(root):
                pending.extend(g.parents(m))

    for node in g.nodes:
        if node.term.ground:
            mark(node.id)
    while pending:
        p = pending.popleft()
        node = g.nodes[p]
        if p in info.cground or not node.children:
            continue
        if all(g.find(c) in info.ground_class for c in node.children):
            mark(p)
    return info


def process(g: EGraph, r: ReprFn, todo: Iterable[int]) -> ReprFn:
    """Assign representatives bottom-up starting from the given nodes.

    Work proceeds in waves: the seed list in order, then the parents whose
    children all became assigned, newest node first within a wave.  A popped
    node whose class is already assigned is skipped, so only nodes with all
    children assigned ever become representatives, which keeps the partial
    assignment admissible at every step.
    """
    current = deque(todo)
    while current:
        ready = []
        while current:
            n = current.popleft()
            if r.defined(n):
                continue
            r.set_class(g, n)
            for m in g.class_of(n):
                for p in sorted(g.parents(m)):
                    if not r.defined(p) and \
                            all(r.defined(c) for c in g.nodes[p].children):
                        ready.append(p)
        seen = set()
        for p in sorted(ready, reverse=True):
            if p not in seen:
                seen.add(p)
                current.append(p)
    return r


def find_defs(g: EGraph) -> ReprFn:
    """Total admissible representative function, maximally ground: ground
    leaves are processed first so every ground class ends up with a
    constructively ground representative."""
    r = ReprFn()
    process(g, r, [n.id for n in g.nodes if not n.children and n.term.ground])
    process(g, r, [n.id for n in g.nodes if not n.children])
    return r


def refine_defs(g: EGraph, r: ReprFn, var_names) -> ReprFn:
    """Retarget variable-labeled representatives to a non-variable class
    member whenever that keeps the representative graph acyclic.  Ground
    class representatives are never variables, so ground maximality is
    preserved."""
    var_names = set(var_names)
    for node in g.nodes:
        if r.get(node.id) != node.id or node.label not in var_names:
            continue
        for m in g.class_of(node.id):
            if m == node.id or g.nodes[m].label in var_names:
                continue
            if not _makes_cycle(g, r, m):
                r.set_class(g, m)
                break
    return r


def _makes_cycle(g: EGraph, r: ReprFn, candidate: int) -> bool:
    """Would retargeting candidate's class onto candidate close a cycle?
    All new edges point into the candidate, so it suffices to look for a
    path from the candidate back to itself in the updated graph."""
    trial = r.copy()
    trial.set_class(g, candidate)
    succ = {}
    for node in g.nodes:
        for c in node.children:
            rep = trial.get(c)
            if rep is not None:
                succ.setdefault(node.id, set()).add(rep)
    stack = list(succ.get(candidate, ()))
    visited = set()
    while stack:
        n = stack.pop()
        if n == candidate:
            return True
        if n in visited:
            continue
        visited.add(n)
        stack.extend(succ.get(n, ()))
    return False


def find_core(g: EGraph, r: ReprFn, var_names) -> set:
    """Node subset whose extraction already carries the existential closure:
    all representatives, minus non-representative variable nodes and minus
    nodes congruent to a node already kept (same label, child classes)."""
    var_names = set(var_names)
    core = set()
    keys = set()
    for node in g.nodes:
        if r.get(node.id) != node.id:
            continue
        core.add(node.id)
        keys.add(g.congruence_key(node.id))
        for m in g.class_of(node.id):
            if m == node.id:
                continue
            if g.nodes[m].label in var_names:
                continue
            key = g.congruence_key(m)
            if key in keys:
                continue
            keys.add(key)
            core.add(m)
    return core


def core_reachable_nodes(g: EGraph, r: ReprFn, core) -> set:
    """Nodes reachable in the representative graph from classes that keep
    two or more core nodes.  Only such classes contribute output literals,
    so a variable node outside this set never appears in the result -- a
    diagnostic for the second elimination condition."""
    from .extraction import build_repr_graph
    succ = {}
    for a, b in build_repr_graph(g, r):
        succ.setdefault(a, set()).add(b)
    seeds = set()
    for root in g.roots():
        kept = [m for m in g.class_of(root) if m in core]
        if len(kept) >= 2:
            seeds.update(kept)
    reached = set(seeds)
    stack = list(seeds)
    while stack:
        n = stack.pop()
        for m in succ.get(n, ()):
            if m not in reached:
                reached.add(m)
                stack.append(m)
    return reached


def is_maximally_ground(g: EGraph, r: ReprFn,
                        info: Optional[CGroundInfo] = None) -> bool:
    """Every node of a ground class has a constructively ground
    representative (diagnostic used by the property suites)."""
    info = info or compute_cground(g)
    for node in g.nodes:
        if g.find(node.id) in info.ground_class:
            rep = r.get(node.id)
            if rep is None or rep not in info.cground:
                return False
    return True


def qel(sig: Signature, store: TermStore, formula: Formula,
        var_names=None) -> Formula:
    """Quantifier reduction: returns a conjunction over a subset of the
    input's variables whose existential closure is equivalent."""
    if var_names is None:
        var_names = formula.free_vars
    g = EGraph.from_formula(sig, store, formula)
    r = find_defs(g)
    r = refine_defs(g, r, var_names)
    core = find_core(g, r, var_names)
    exclude = set(g.node_ids()) - core
    return to_formula(g, r, exclude)
