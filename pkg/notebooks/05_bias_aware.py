# %% [markdown]
# # Mixing a prediction with the centre
#
# The bias-aware mechanism puts the facility on the prediction with
# probability 1/2 - c, where c is the prediction's distance from 1/2, and at
# 1/2 otherwise. Predictions near the edge are trusted less.

# %%
import numpy as np

from envyline.analysis import bam_guarantees, bam_prediction_ratios, balrm_guarantees
from envyline.verify import SearchConfig, balrm_dominance_check, bam_bias_guarantees, dominance_check

cfg = SearchConfig()
for c in (0.0, 0.1, 0.25, 0.3, 0.4, 0.5):
    emp, _ = bam_bias_guarantees(c, cfg)
    print(f"c={c}: guarantee={tuple(bam_guarantees(c))} single prediction={tuple(bam_prediction_ratios(c))} searched={tuple(round(v, 4) for v in emp)}")

# %% [markdown]
# At equal consistency its robustness beats the deterministic frontier, and
# the variant that mixes with the LRM lottery is never strictly better.

# %%
print(dominance_check(np.arange(0.25, 0.5, 1e-3)).passed)
print(balrm_dominance_check(np.linspace(0, 0.5, 501)).passed)
print([tuple(round(v, 4) for v in balrm_guarantees(c)) for c in (0.1, 0.3, 0.45)])
