# %% [markdown]
# # Randomising around the centre
#
# Without predictions, no deterministic rule beats ratio 2. A three-point
# lottery at 1/2 - alpha, 1/2, 1/2 + alpha with side probability p does
# better; we tune (alpha, p) numerically.

# %%
from envyline import MechanismSpec
from envyline.analysis import LRM_OPTIMAL_RATIO, lrm_instance_ratios
from envyline.verify import PredictionMode, SearchConfig, optimize_lrm, worst_case_ratio

best = optimize_lrm(SearchConfig())
print(f"alpha*={best.alpha:.5f} p*={best.p:.5f} ratio={best.ratio:.6f} (closed form {LRM_OPTIMAL_RATIO:.6f})")
for level, a, p, r in best.trace:
    print(f"  level {level}: alpha={a:.5f} p={p:.5f} ratio={r:.7f}")

# %% [markdown]
# At the optimum the two critical profiles (0, 1/2) and (0, 1/2 + alpha)
# score the same, and in fact every profile (0, x2) between them does.

# %%
print(lrm_instance_ratios(5 ** 0.5 / 2 - 1, 0.4))
res = worst_case_ratio(MechanismSpec.lrm_optimal(), PredictionMode.adversarial(), SearchConfig())
for w in res.witnesses[:4]:
    print(w.profile.positions, round(w.value, 9))

# %% [markdown]
# Pushing the side atoms further than 1/4 from the centre never helps.

# %%
print(optimize_lrm(SearchConfig(), alpha_bounds=(0.3, 0.5)).ratio)
