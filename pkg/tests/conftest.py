import random
from collections import Counter
from pathlib import Path

import pytest

from egraphqe import (EGraph, Literal, Signature, TermStore, parse_model,
                      parse_problem, term_to_sexpr)
from egraphqe.terms import mk_formula

DEMOS = Path(__file__).resolve().parent.parent / "demos"


def load(name):
    return parse_problem((DEMOS / name).read_text())


def load_mbp(problem="nested_pair_array.smt2", model="nested_pair_array.model"):
    prob = load(problem)
    m = parse_model((DEMOS / model).read_text(), prob.sig)
    return prob, m


def literal_key(lit):
    return (lit.kind, frozenset((term_to_sexpr(lit.lhs), term_to_sexpr(lit.rhs))))


def same_literals(f1, f2):
    """Equal as literal multisets, ignoring order and equality orientation."""
    return Counter(map(literal_key, f1.literals)) == \
        Counter(map(literal_key, f2.literals))


def formula_of(store, pairs):
    """Build an equality conjunction from (lhs, rhs) term pairs."""
    return mk_formula(store, [Literal("eq", a, b) for a, b in pairs])


@pytest.fixture
def rng():
    return random.Random(20240811)


# -- random instance generators (shared by the property suites) ---------------

def random_euf_instance(rng, max_nodes=8):
    """Random EUF conjunction over one uninterpreted sort, with its egraph.

    Keeps the interpretation space small (a couple of constants, at most two
    unary functions) so the finite-model oracle stays fast.
    """
    while True:
        sig = Signature()
        u = sig.declare_sort("U")
        consts = [f"c{i}" for i in range(rng.randint(1, 2))]
        for c in consts:
            sig.declare_const(c, u)
        funs = ["f", "g"][: 1 if rng.random() < 0.8 else 2]
        for f in funs:
            sig.declare_fun(f, [u], u)
        variables = [f"v{i}" for i in range(rng.randint(1, 3))]
        for v in variables:
            sig.declare_var(v, u)
        store = TermStore(sig)
        pool = [store.mk_const(s) for s in consts + variables]
        for _ in range(rng.randint(1, 4)):
            pool.append(store.mk_app(rng.choice(funs), [rng.choice(pool)]))
        lits = []
        for _ in range(rng.randint(1, 4)):
            lits.append(Literal("eq", rng.choice(pool), rng.choice(pool)))
        formula = mk_formula(store, lits)
        g = EGraph.from_formula(sig, store, formula)
        if len(g.nodes) <= max_nodes:
            return sig, store, formula, g


def random_total_repr(rng, g):
    """Random total node map; half the time class-respecting, half arbitrary."""
    from egraphqe import ReprFn
    r = ReprFn()
    if rng.random() < 0.5:
        for root in g.roots():
            members = g.class_of(root)
            rep = rng.choice(members)
            for m in members:
                r.assignment[m] = rep
    else:
        ids = list(g.node_ids())
        for n in ids:
            r.assignment[n] = rng.choice(ids)
    return r


def random_grounded_var_instance(rng):
    """Random conjunction in which variable v0 is equated, possibly through
    other variables and congruence, to a ground term."""
    sig = Signature()
    u = sig.declare_sort("U")
    for c in ("c0", "c1"):
        sig.declare_const(c, u)
    sig.declare_fun("f", [u], u)
    variables = [f"v{i}" for i in range(rng.randint(1, 3))]
    for v in variables:
        sig.declare_var(v, u)
    store = TermStore(sig)
    v0 = store.mk_const("v0")
    ground_leaf = store.mk_const(rng.choice(("c0", "c1")))
    ground = ground_leaf
    for _ in range(rng.randint(0, 2)):
        ground = store.mk_app("f", [ground])
    lits = []
    style = rng.randrange(3)
    if style == 0:
        lits.append(Literal("eq", v0, ground))
    elif style == 1 and len(variables) > 1:
        mid = store.mk_const(variables[1])
        lits.append(Literal("eq", v0, mid))
        lits.append(Literal("eq", mid, ground))
    else:
        # congruence route: v0 = f(w), w = ground  =>  f(w) rewrites ground
        if len(variables) > 1:
            w = store.mk_const(variables[1])
            lits.append(Literal("eq", v0, store.mk_app("f", [w])))
            lits.append(Literal("eq", w, ground))
        else:
            lits.append(Literal("eq", v0, store.mk_app("f", [ground])))
    for _ in range(rng.randint(0, 2)):  # noise
        side = [store.mk_const(rng.choice(variables)),
                store.mk_const(rng.choice(("c0", "c1")))]
        rng.shuffle(side)
        lits.append(Literal("eq", side[0], side[1]))
    return sig, store, mk_formula(store, lits)


def random_projection_instance(rng):
    """Random array/datatype projection instance within the rule set's reach:
    projected variables occur only under read/write, constructor equalities,
    selector positions, and disequalities."""
    sig = Signature()
    idx = sig.declare_sort("I")
    val = sig.declare_sort("V")
    arr = sig.ensure_array_sort(idx, val)
    rec = sig.declare_datatype(
        "Rec", [("mk", [("fld", val), ("pos", idx)]), ("unit", [])])
    sig.declare_const("b", arr)
    sig.declare_const("i0", idx)
    sig.declare_const("i1", idx)
    sig.declare_const("e0", val)
    sig.declare_const("r0", rec)
    n_arr = rng.randint(0, 2)
    n_adt = rng.randint(0 if n_arr else 1, 2)
    arr_vars = [f"av{i}" for i in range(n_arr)]
    adt_vars = [f"pv{i}" for i in range(n_adt)]
    for v in arr_vars:
        sig.declare_var(v, arr)
    for v in adt_vars:
        sig.declare_var(v, rec)
    store = TermStore(sig)
    lits = []
    idx_terms = [store.mk_const("i0"), store.mk_const("i1")]
    val_terms = [store.mk_const("e0")]
    b = store.mk_const("b")
    for v in arr_vars:
        vt = store.mk_const(v)
        shape = rng.randrange(4)
        if shape == 0:
            lits.append(Literal(
                "eq", vt, store.mk_app(
                    "write", (b, rng.choice(idx_terms), rng.choice(val_terms)))))
        elif shape == 1:
            lits.append(Literal(
                "eq", store.mk_app("read", (vt, idx_terms[0])), val_terms[0]))
            lits.append(Literal(
                "eq", store.mk_app("read", (vt, idx_terms[1])),
                store.mk_app("read", (b, idx_terms[1]))))
        elif shape == 2:
            lits.append(Literal("eq", vt, b))
        else:
            lits.append(Literal(
                "eq",
                store.mk_app("read", (store.mk_app(
                    "write", (vt, idx_terms[0], val_terms[0])),
                    rng.choice(idx_terms))),
                val_terms[0]))
    for v in adt_vars:
        vt = store.mk_const(v)
        shape = rng.randrange(3)
        if shape == 0:
            lits.append(Literal(
                "eq", vt, store.mk_app(
                    "mk", (rng.choice(val_terms), rng.choice(idx_terms)))))
        elif shape == 1:
            lits.append(Literal("diseq", vt, store.mk_const("r0")))
        else:
            lits.append(Literal(
                "eq", vt, store.mk_app("mk", (val_terms[0], idx_terms[0]))))
            lits.append(Literal("diseq", vt, store.mk_const("r0")))
    return sig, store, mk_formula(store, lits)
