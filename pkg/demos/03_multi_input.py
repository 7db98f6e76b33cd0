#!/usr/bin/env python
# coding: utf-8

# # Two inputs
#
# With more than one input only sufficient conditions are available. The
# search tries column sets K and reports PSSC with the certifying K, or
# UNKNOWN.

# In[ ]:


from ptsc.mptsc import is_pssc_sufficient
from ptsc.oracle import is_controllable_numeric, sample_realization, synth_witness_multi
from ptsc.pattern import Pattern, PerturbStructure, SystemPattern

F = PerturbStructure(Pattern(2, 4, [(1, 2)]))
generic = SystemPattern.from_matrices([[1, 1], [1, 1]], [[1, 0], [0, 1]])
sparse = SystemPattern.from_matrices([[1, 1], [1, 1]], [[0, 0], [0, 1]])


# ## Full A, both inputs wired in
#
# No choice of K certifies an attack through a12. (This system is in fact
# tolerant, but the search can only say UNKNOWN.)

# In[ ]:


v = is_pssc_sufficient(generic, F)
print(v.status, v.to_json_obj())


# ## First input disconnected
#
# Now state 1 is reached only through a12. Cancelling a12 leaves x1
# isolated, and the search finds this as a nonzero mode at lambda = a11.

# In[ ]:


v = is_pssc_sufficient(sparse, F)
print(v.status, "via", v.condition, "K =", v.K, "rows =", v.result.rows)

r = sample_realization(sparse, seed=1)
assert is_controllable_numeric(r)
w = synth_witness_multi(r, F, v.K, v.result.rows, (v.result.block_rows, v.result.block_cols))
print("a12 =", r.values[(1, 2)], " delta a12 =", w.delta[(1, 2)])
print("lambda =", w.lam, " a11 =", r.values[(1, 1)], " residual =", w.residual)
