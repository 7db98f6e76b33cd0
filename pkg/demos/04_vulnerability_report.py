#!/usr/bin/env python
# coding: utf-8

# # Vulnerability report
#
# Structured controllability-radius problems ask for the smallest
# perturbation on a given support that destroys controllability. Whether
# such a perturbation exists at all is decided by the structural verdict.

# In[ ]:


from fractions import Fraction

from ptsc.oracle import Realization
from ptsc.pattern import Pattern, PerturbStructure, SystemPattern
from ptsc.scrp import full_perturbation, min_pssc_support, scrp_feasibility

A = [["0", "0", "0", "0"], ["5.3165", "0", "0", "0"], ["0", "9.0428", "0", "0"], ["0.5454", "6.3018", "0", "9.6296"]]
b = [["5.3401"], ["0"], ["0"], ["0"]]
r = Realization.from_matrices([[Fraction(x) for x in row] for row in A], [[Fraction(x) for x in row] for row in b])
sys_ = SystemPattern(4, 1, r.pattern)
F1 = PerturbStructure(Pattern(4, 5, [(1, 3), (1, 4)]))
F2 = PerturbStructure(Pattern(4, 5, [(3, 3), (4, 5)]))


# ## Feasibility for a numeric system
#
# The numeric matrices only enter through the controllability margin; the
# feasibility statement itself is structural.

# In[ ]:


for name, f in [("F1", F1), ("F2", F2)]:
    rep = scrp_feasibility(sys_, f, r)
    print(name, "->", rep.feasibility, "| critical entries:", rep.critical_edges)
print("sigma_min of the controllability matrix:", round(rep.realization["sigma_min_controllability"], 4))


# ## Smallest vulnerable supports
#
# Subsets are enumerated by size. Inside F2 either entry alone suffices;
# with every entry perturbable a single entry always suffices.

# In[ ]:


print(min_pssc_support(sys_, F2).to_json_obj())
print(min_pssc_support(sys_, F1).to_json_obj()["result"])
print("unconstrained optimum:", min_pssc_support(sys_, full_perturbation(sys_)).size)
