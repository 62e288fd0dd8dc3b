# %% [markdown]
# # Can an agent gain by lying?
#
# All mechanisms here ignore the reported locations, so misreporting changes
# nothing. The midpoint rule and the average-of-reports rule do react to
# reports, and the random tester catches agents exploiting them.

# %%
from envyline import Kind, LocationProfile, MechanismSpec
from envyline.analysis import lower_bound_certificate
from envyline.verify import NEGATIVE_CONTROLS, grid_sp_violation, strategyproofness_test

for spec in (MechanismSpec(Kind.BAM), MechanismSpec.lrm_optimal()):
    print(spec, strategyproofness_test(spec, 500, seed=1).passed)
for name, mech in NEGATIVE_CONTROLS.items():
    v = grid_sp_violation(mech, LocationProfile([0.3, 0.6]))
    print(name, "agent", v.agent, "reports", v.misreport, "and gains", round(v.gain, 4))

# %% [markdown]
# No randomised strategyproof mechanism can go below about 1.1258; the
# certificate behind that number comes from one root-solve.

# %%
print(lower_bound_certificate())
