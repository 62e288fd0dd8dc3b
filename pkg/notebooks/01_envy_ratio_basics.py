# %% [markdown]
# # Envy ratio on the unit line
#
# Agents sit on [0, 1] and each gets utility 1 - |y - x| from a facility at y.
# The envy ratio compares the happiest agent to the least happy one. Here we
# look at how it behaves and why the midpoint of the two extreme agents is
# the best place for the facility.

# %%
import numpy as np

from envyline import LocationProfile, PlacementDistribution, approximation_ratio, envy_ratio
from envyline.core import optimal_location, reduce_to_two_agents

profile = LocationProfile([0.1, 0.35, 0.8])
ys = np.linspace(0, 1, 11)
for y in ys:
    print(f"y={y:.1f}  ER={envy_ratio(float(y), profile):.4f}")

# %% [markdown]
# The minimum sits at the midpoint of the outermost agents; interior agents
# never change it.

# %%
print("midpoint:", optimal_location(profile), "ER there:", envy_ratio(optimal_location(profile), profile))

# %% [markdown]
# Putting the facility on the far edge leaves one agent with zero utility, so
# the ratio is unbounded and is reported as `inf`.

# %%
print(envy_ratio(1.0, LocationProfile([0.0, 1.0])))

# %% [markdown]
# Collapsing a profile onto its two extremes never makes a lottery look
# better. That is why every worst-case search later only looks at two agents.

# %%
lottery = PlacementDistribution([(0.3, 0.5), (0.7, 0.5)])
wide = LocationProfile([0.0, 0.5, 1.0])
print(approximation_ratio(lottery, wide), "<=", approximation_ratio(lottery, reduce_to_two_agents(wide)))
