#!/usr/bin/env python
# coding: utf-8

# # Single-input walkthrough
#
# A four-state chain driven at state 1, with a feedback loop at state 4.
# Two perturbation structures are compared: one that only touches row 1
# of A, and one that touches a33 and b4.

# In[ ]:


from ptsc.oracle import is_controllable_numeric, pssc_oracle_single, sample_realization, witness_for_trace
from ptsc.pattern import Pattern, PerturbStructure, SystemPattern
from ptsc.ptsc1 import is_ptsc

A = [[0, 0, 0, 0], [1, 0, 0, 0], [0, 1, 0, 0], [1, 1, 0, 1]]
b = [[1], [0], [0], [0]]
sys_ = SystemPattern.from_matrices(A, b)
F1 = PerturbStructure(Pattern(4, 5, [(1, 3), (1, 4)]))
F2 = PerturbStructure(Pattern(4, 5, [(3, 3), (4, 5)]))
print(sys_)


# ## Verdicts
#
# Each perturbed entry is checked on its own, with the other perturbed
# entries folded into the pattern as ordinary free entries.

# In[ ]:


for name, f in [("F1", F1), ("F2", F2)]:
    v = is_ptsc(sys_, f, full_trace=True)
    print(name, v.status)
    for t in v.traces:
        print("   entry", t.entry, "zero-mode ok:", t.zero_mode_ok, "| i* =", t.i_star, "omega =", t.omega,
              "| nonzero mode:", t.nonzero_mode)


# The F2 traces show why: with column 5 removed, the pencil splits into
# four 1x1 blocks, and the two blocks carrying a diagonal entry of A can
# vanish at a nonzero lambda.

# In[ ]:


t = is_ptsc(sys_, F2, full_trace=True).traces[1]
g = t.pencil_graph
for k, comp in enumerate(t.pencil_decomp.components, start=1):
    rows = [g.left_labels[u] for u in comp.rows]
    cols = [g.right_labels[v] for v in comp.cols]
    print(f"block {k}: rows {rows} cols {cols} gamma (min, max, self-loop) = {t.gamma.get(k, 'not needed past i*')}")


# ## Cross-check by interpolation
#
# The oracle fixes random integers for everything except one perturbed
# entry and interpolates det C(A, b) as a polynomial in that entry.

# In[ ]:


for name, f in [("F1", F1), ("F2", F2)]:
    res = pssc_oracle_single(sys_, f, seed=1)
    print(name, res.status, [(p.entry, p.degree) for p in res.polynomials])


# ## A concrete attack
#
# For F2 a witness gives a numeric perturbation together with the mode
# lambda and left vector q that certify the loss of controllability.

# In[ ]:


r = sample_realization(sys_, seed=3)
assert is_controllable_numeric(r)
v = is_ptsc(sys_, F2)
w = witness_for_trace(r, F2, v.failing_trace, seed=3)
print("lambda =", w.lam, " (a44 =", r.values[(4, 4)], ")")
print("delta  =", w.delta)
print("residual =", w.residual)
print("still controllable after the attack?", is_controllable_numeric(r.plus(w.delta)))
