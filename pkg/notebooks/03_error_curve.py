# %% [markdown]
# # How bad predictions degrade the bounding-interval mechanism
#
# If the prediction is off by at most eta, the worst-case ratio rises from
# alpha (perfect prediction) to alpha/(alpha - 1) (arbitrary prediction)
# along a piecewise curve.

# %%
import numpy as np

from envyline.analysis import bim_error_curve
from envyline.verify import SearchConfig, empirical_error_curve

cfg = SearchConfig(coarse_step=0.02, refine_step=1e-4)
for alpha in (1.3, 1.8):
    curve = bim_error_curve(alpha)
    print(f"alpha={alpha}: pieces", [(p.kind, round(p.hi, 4)) for p in curve.pieces])
    etas = np.linspace(0, 0.5, 6)
    for eta, measured in empirical_error_curve(alpha, etas, cfg):
        print(f"  eta={eta:.2f} closed={curve(eta):.4f} searched={measured:.4f}")

# %% [markdown]
# With alpha at the golden ratio the ratio stays at about 1.618 as long as the
# error is below roughly 0.118.

# %%
golden = bim_error_curve((1 + 5 ** 0.5) / 2)
print(golden(0.0), golden(0.118))
