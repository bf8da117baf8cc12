"""Walkthrough: checking reductions with the brute-force finite-model oracle.

The oracle enumerates every interpretation of the kept symbols over small
finite universes and compares satisfiability of the existential closures.
It is the independent referee the test suite uses against the egraph
pipeline.
"""
from pathlib import Path

from egraphqe import (Bounds, equiv_exists, find_model, implies_exists,
                      parse_problem, qel, satisfies)

HERE = Path(__file__).resolve().parent

prob = parse_problem((HERE / "read_chain.smt2").read_text())
out = qel(prob.sig, prob.store, prob.formula)
print("input: ", prob.formula)
print("output:", out)

# equivalence of existential closures, checked over all arrays/integers in a
# four-value window (the window keeps the array enumeration tractable)
verdict = equiv_exists(prob.sig, prob.store, prob.formula, out,
                       Bounds(int_window=(0, 3)))
print("closures equivalent:", verdict.ok,
      f"({verdict.skipped} interpretations skipped by the arithmetic window)")

# the oracle can also hunt for models; useful to seed projections
prob2 = parse_problem("""
(declare-sort U 0)
(declare-const c U)
(declare-fun f (U) U)
(declare-var x U)
(assert (= (f x) c))
(assert (distinct x c))
""")
model = find_model(prob2.sig, prob2.store, prob2.formula, Bounds(universe=2))
print("\nfound model:", model.constants)
print("satisfies:", satisfies(model, prob2.sig, prob2.formula))

# one-directional entailment between closures
weaker = qel(prob2.sig, prob2.store, prob2.formula)
print("reduction implies input:",
      implies_exists(prob2.sig, prob2.store, weaker, prob2.formula,
                     Bounds(universe=2)).ok)
