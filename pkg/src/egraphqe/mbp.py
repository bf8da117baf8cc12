"""Model-based projection of array and datatype variables.

Saturates theory projection rules over the egraph of the input under a
satisfying model, then runs the quantifier-reduction tail and drops every
node whose extraction still mentions a projected array/datatype variable.
Rules only ever add terms, merges, and disequalities; marking each node,
pair, and disequality as seen keeps saturation terminating.

The array rules rewrite read-over-write patterns, turn array equalities
into partial-equality obligations, unwind writes out of those obligations,
solve them for projected variables with fresh write values, and Ackermannize
pairs of reads over one projected array.  The datatype rules split
projected-variable equalities into selector equalities and resolve
disequalities by the model, except that a disequality whose both sides sit
in ground classes is skipped: its operands are rewritten to ground terms in
the output, so no splitting is necessary.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .egraph import EGraph
from .extraction import ReprFn, extract_terms, to_formula
from .model import Model, eval_term, extend, satisfies
from .qel import compute_cground, find_core, find_defs, refine_defs
from .terms import Formula, InputError, Signature, SortKind, Term, TermStore


class ModelMismatchError(InputError):
    pass


class SaturationBudgetError(Exception):
    pass


@dataclass
class MbpResult:
    formula: Formula
    model: Model              # input model plus any fresh constants
    rule_fires: dict          # rule name -> number of applications
    graph: EGraph             # the saturated egraph
    repr_fn: ReprFn           # representative function used for extraction


@dataclass
class _State:
    g: EGraph
    model: Model
    budget: int
    fires: dict = field(default_factory=dict)
    total: int = 0
    fresh: int = 0
    marks: dict = field(default_factory=dict)  # rule name -> set of keys

    @property
    def sig(self):
        return self.g.sig

    @property
    def store(self):
        return self.g.store

    def fired(self, rule):
        self.fires[rule] = self.fires.get(rule, 0) + 1
        self.total += 1
        if self.total > self.budget:
            raise SaturationBudgetError(
                f"more than {self.budget} rule applications")

    def mark(self, rule, key) -> bool:
        """True (and remembers the key) when (rule, key) is new."""
        done = self.marks.setdefault(rule, set())
        if key in done:
            return False
        done.add(key)
        return True

    def meval(self, term: Term):
        return eval_term(self.model, self.sig, term)

    def projected(self, label) -> bool:
        return label in self.sig.variables

    def term_has_projected(self, term: Term) -> bool:
        return not term.ground

    def fresh_name(self) -> str:
        while True:
            name = f"d!{self.fresh}"
            self.fresh += 1
            if name not in self.sig.functions and name not in self.sig.variables:
                return name


@dataclass
class SeenSets:
    nodes: set = field(default_factory=set)
    pairs: set = field(default_factory=set)


def mbp(sig: Signature, store: TermStore, formula: Formula, var_names,
        model: Model, budget: int = 10_000) -> MbpResult:
    """Project the given array/datatype variables out of the conjunction.

    The result implies the input's existential closure, is satisfied by the
    (possibly extended) model, and contains no projected array or datatype
    variable.  Variables the rules introduce along the way are eliminated by
    the same pipeline.
    """
    var_names = list(var_names)
    for v in var_names:
        sort = sig.variables.get(v)
        if sort is None:
            raise InputError(f"'{v}' is not a declared variable")
        if sort.kind not in (SortKind.ARRAY, SortKind.ADT):
            raise InputError(f"variable '{v}' is neither array- nor ADT-sorted")
    if not satisfies(model, sig, formula):
        raise ModelMismatchError("the given model does not satisfy the input")

    g = EGraph.from_formula(sig, store, formula)
    state = _State(g, model, budget)
    _saturate(state)

    all_vars = g.var_names()  # original plus rule-introduced variables
    r = find_defs(g)
    r = refine_defs(g, r, all_vars)
    core = find_core(g, r, all_vars)
    adts_arrays = {v for v in all_vars
                   if sig.variables[v].kind in (SortKind.ARRAY, SortKind.ADT)}
    extractions = extract_terms(g, r, core)
    keep = set()
    for n in core:
        rep = r.get(n)
        if store.free_vars(extractions[n]) & adts_arrays:
            continue
        if rep != n and store.free_vars(extractions[rep]) & adts_arrays:
            continue
        keep.add(n)
    out = to_formula(g, r, set(g.node_ids()) - keep)
    return MbpResult(out, state.model, state.fires, g, r)


# -- saturation loop ----------------------------------------------------------

_ARRAY_RULES = ("elim_wr_rd", "partial_eq", "elim_wr", "elim_eq")
_ADT_RULES = ("adt_deconstruct_eq",)


def _saturate(state: _State):
    array_seen = SeenSets()
    adt_seen = SeenSets()
    while True:
        p1 = _saturate_family(state, _ARRAY_RULES, ("ackermann",), (),
                              array_seen)
        p2 = _saturate_family(state, _ADT_RULES, (), ("adt_split_diseq",),
                              adt_seen)
        if not (p1 or p2):
            return


def _saturate_family(state, unary, pairwise, diseq_rules, seen) -> bool:
    progress = False
    while apply_rules(state, unary, pairwise, diseq_rules, seen):
        progress = True
    return progress


def apply_rules(state: _State, unary, pairwise, diseq_rules,
                seen: SeenSets) -> bool:
    """One pass: offer unseen nodes (equality bookkeeping always, others
    only when not constructively ground) to unary rules, unseen pairs to
    pairwise rules, and unresolved disequalities to the splitting rules."""
    g = state.g
    progress = False
    snapshot = list(g.node_ids())
    info = compute_cground(g)
    offered = [n for n in snapshot
               if n not in seen.nodes
               and (g.nodes[n].label == "peq" or n not in info.cground)]
    for n in offered:
        for rule in unary:
            if _UNARY[rule](state, n):
                progress = True
    for rule in pairwise:
        fn = _PAIRWISE[rule]
        for i, a in enumerate(snapshot):
            for b in snapshot[i + 1:]:
                if (a, b) in seen.pairs:
                    continue
                if fn(state, a, b):
                    progress = True
    for rule in diseq_rules:
        fn = _DISEQ[rule]
        for a, b in list(g.diseqs):
            if g.find(a) in info.ground_class and \
                    g.find(b) in info.ground_class:
                continue  # both sides become ground terms; no split needed
            if fn(state, a, b):
                progress = True
    seen.nodes.update(snapshot)
    seen.pairs.update((a, b) for i, a in enumerate(snapshot)
                      for b in snapshot[i + 1:])
    return progress


# -- array rules --------------------------------------------------------------

def _rule_elim_wr_rd(state: _State, n: int) -> bool:
    """read over a write whose array part mentions a projected variable:
    merge with the written value or with a read of the inner array,
    depending on whether the model equates the two indices."""
    g = state.g
    node = g.nodes[n]
    if node.label != "read":
        return False
    arr, j = node.children
    fired = False
    for w in g.class_of(arr):
        wnode = g.nodes[w]
        if wnode.label != "write":
            continue
        s, i, v = (g.nodes[c] for c in wnode.children)
        if not state.term_has_projected(s.term):
            continue
        if not state.mark("elim_wr_rd", (n, w)):
            continue
        jterm = g.nodes[j].term
        if state.meval(i.term) == state.meval(jterm):
            g.assert_eq(i.term, jterm)
            g.assert_eq(node.term, v.term)
        else:
            g.assert_diseq(i.term, jterm)
            g.assert_eq(node.term, state.store.mk_app("read", (s.term, jterm)))
        state.fired("elim_wr_rd")
        fired = True
    return fired


def _rule_partial_eq(state: _State, n: int) -> bool:
    """An array equality (two array nodes in one class) involving a
    projected variable becomes a partial-equality obligation with an empty
    exception set."""
    g = state.g
    node = g.nodes[n]
    if node.term.sort.kind is not SortKind.ARRAY:
        return False
    fired = False
    for m in g.class_of(n):
        if m == n:
            continue
        a, b = min(n, m), max(n, m)
        if not (state.term_has_projected(g.nodes[a].term)
                or state.term_has_projected(g.nodes[b].term)):
            continue
        if not state.mark("partial_eq", (a, b)):
            continue
        peq = state.store.mk_app("peq", (g.nodes[a].term, g.nodes[b].term))
        g.assert_eq(peq, state.store.top)
        state.fired("partial_eq")
        fired = True
    return fired


def _rule_elim_wr(state: _State, n: int) -> bool:
    """Unwind a write inside a partial equality: peq(s, write(u, i, v), I)
    yields read(s, i) = v plus peq(s, u, I + [i]) when i is fresh w.r.t. I
    under the model; otherwise only the write is dropped, recording the
    index equality the model used."""
    g = state.g
    node = g.nodes[n]
    if node.label != "peq":
        return False
    store = state.store
    fired = False
    for s_id, w_id in ((node.children[0], node.children[1]),
                       (node.children[1], node.children[0])):
        wnode = g.nodes[w_id]
        if wnode.label != "write":
            continue
        if not state.term_has_projected(wnode.term):
            continue
        if not state.mark("elim_wr", (n, w_id)):
            continue
        sterm = g.nodes[s_id].term
        uterm, iterm, vterm = (g.nodes[c].term for c in wnode.children)
        idx_terms = [g.nodes[c].term for c in node.children[2:]]
        ival = state.meval(iterm)
        clash = next((ix for ix in idx_terms if state.meval(ix) == ival), None)
        if clash is None:
            g.assert_eq(store.mk_app("read", (sterm, iterm)), vterm)
            new_idx = idx_terms + [iterm]
        else:
            g.assert_eq(iterm, clash)
            new_idx = idx_terms
        g.assert_eq(store.mk_app("peq", (sterm, uterm, *new_idx)), store.top)
        state.fired("elim_wr")
        fired = True
    return fired


def _rule_elim_eq(state: _State, n: int) -> bool:
    """Solve a partial equality for a projected array variable: the variable
    equals the other side overwritten at the exception indices with fresh
    values, and the model is extended to keep satisfying the result."""
    g = state.g
    node = g.nodes[n]
    if node.label != "peq":
        return False
    store, sig = state.store, state.sig
    lhs, rhs = g.nodes[node.children[0]], g.nodes[node.children[1]]
    for v, e in ((lhs, rhs), (rhs, lhs)):
        if not (state.projected(v.label) and not v.children):
            continue
        if v.label in store.free_vars(e.term):
            continue
        if not state.mark("elim_eq", (n, v.id)):
            return False
        idx_terms = [g.nodes[c].term for c in node.children[2:]]
        chosen = []
        seen_vals = []
        for ix in idx_terms:
            val = state.meval(ix)
            if val not in seen_vals:  # duplicates modulo the model collapse
                seen_vals.append(val)
                chosen.append(ix)
        chain = e.term
        for ix in chosen:
            name = state.fresh_name()
            value_sort = v.term.sort.value
            if value_sort.kind in (SortKind.ARRAY, SortKind.ADT):
                sig.declare_var(name, value_sort)
            else:
                sig.declare_const(name, value_sort)
            dterm = store.mk_const(name)
            state.model = extend(
                state.model, name,
                state.meval(store.mk_app("read", (v.term, ix))))
            chain = store.mk_app("write", (chain, ix, dterm))
        g.assert_eq(v.term, chain)
        state.fired("elim_eq")
        return True
    return False


def _rule_ackermann(state: _State, a: int, b: int) -> bool:
    """Two reads of one projected array variable at syntactically distinct
    indices: record the index (dis)equality the model chooses; on equality
    the reads merge by congruence."""
    g = state.g
    na, nb = g.nodes[a], g.nodes[b]
    if na.label != "read" or nb.label != "read":
        return False
    if na.children[0] != nb.children[0]:
        return False
    base = g.nodes[na.children[0]]
    if not (state.projected(base.label) and not base.children):
        return False
    e1, e2 = g.nodes[na.children[1]].term, g.nodes[nb.children[1]].term
    if e1 is e2:
        return False
    if state.meval(e1) == state.meval(e2):
        g.assert_eq(e1, e2)
    else:
        g.assert_diseq(e1, e2)
    state.fired("ackermann")
    return True


# -- datatype rules -----------------------------------------------------------

def _rule_adt_deconstruct_eq(state: _State, n: int) -> bool:
    """A projected datatype variable equal to a constructor application:
    assert one selector equality per constructor argument."""
    g = state.g
    node = g.nodes[n]
    if not (state.projected(node.label) and not node.children):
        return False
    sort = node.term.sort
    if sort.kind is not SortKind.ADT:
        return False
    store = state.store
    fired = False
    for m in g.class_of(n):
        mnode = g.nodes[m]
        ctor = next((c for c in sort.constructors if c.name == mnode.label), None)
        if ctor is None or ctor.arity == 0:
            continue
        if not state.mark("adt_deconstruct_eq", (n, m)):
            continue
        for (sel, _), arg in zip(ctor.selectors, mnode.children):
            g.assert_eq(store.mk_app(sel, (node.term,)), g.nodes[arg].term)
        state.fired("adt_deconstruct_eq")
        fired = True
    return fired


def _rule_adt_split_diseq(state: _State, a: int, b: int) -> bool:
    """Resolve a datatype disequality on a projected variable using the
    model: different constructors yield tester literals, equal constructors
    yield a selector disequality at an argument where the values differ."""
    g = state.g
    na, nb = g.nodes[a], g.nodes[b]
    for v, t in ((na, nb), (nb, na)):
        if not (state.projected(v.label) and not v.children):
            continue
        sort = v.term.sort
        if sort.kind is not SortKind.ADT:
            continue
        if not state.mark("adt_split_diseq", (min(a, b), max(a, b))):
            return False
        store = state.store
        vv = state.meval(v.term)
        tv = state.meval(t.term)
        if vv == tv:
            raise ModelMismatchError(
                f"model equates disequal terms {v.term!r} and {t.term!r}")
        vctor = next(c for c in sort.constructors if c.name == vv.ctor)
        if vv.ctor != tv.ctor:
            g.assert_eq(store.mk_app(vctor.tester, (v.term,)), store.top)
            g.assert_eq(store.mk_app(vctor.tester, (t.term,)), store.bot)
        else:
            i = next(i for i in range(vctor.arity) if vv.args[i] != tv.args[i])
            sel = vctor.selectors[i][0]
            g.assert_diseq(store.mk_app(sel, (v.term,)),
                           store.mk_app(sel, (t.term,)))
        state.fired("adt_split_diseq")
        return True
    return False


_UNARY = {
    "elim_wr_rd": _rule_elim_wr_rd,
    "partial_eq": _rule_partial_eq,
    "elim_wr": _rule_elim_wr,
    "elim_eq": _rule_elim_eq,
    "adt_deconstruct_eq": _rule_adt_deconstruct_eq,
}
_PAIRWISE = {"ackermann": _rule_ackermann}
_DISEQ = {"adt_split_diseq": _rule_adt_split_diseq}
