# %% [markdown]
# # Trusting a prediction, but only so far
#
# The bounding-interval mechanism follows a predicted location but clamps it
# into [1 - 1/alpha, 1/alpha]. Small alpha trusts the prediction; alpha = 2
# ignores it and always picks 1/2.

# %%
import numpy as np

from envyline import Kind, MechanismSpec
from envyline.analysis import bim_guarantees
from envyline.verify import SearchConfig, empirical_guarantees

for alpha in (1.0, 1.2, 1.5, 2.0):
    g = bim_guarantees(alpha)
    print(f"alpha={alpha}: consistency={g.consistency:.3f} robustness={g.robustness:.3f}")

# %% [markdown]
# Every point satisfies 1/consistency + 1/robustness = 1, the best trade-off
# any deterministic strategyproof rule can reach.

# %%
alphas = np.linspace(1.01, 2, 6)
print([round(1 / bim_guarantees(a).consistency + 1 / bim_guarantees(a).robustness, 12) for a in alphas])

# %% [markdown]
# A brute-force adversary over two-agent profiles and predictions recovers
# both numbers and shows which instances are worst.

# %%
emp, (w_cons, w_rob) = empirical_guarantees(MechanismSpec(Kind.ALPHA_BIM, alpha=1.5), SearchConfig())
print(emp)
print("worst accurate case:", w_cons.profile.positions, "prediction", w_cons.prediction)
print("worst adversarial case:", w_rob.profile.positions, "prediction", w_rob.prediction)
