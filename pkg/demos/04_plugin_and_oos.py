"""
Parameter estimates and held-out layers
=======================================

Given memberships, degree corrections and block matrices have simple
plug-in estimates.  Fitting memberships on all but one layer and scoring
the reconstruction of the left-out one gives a criterion for choosing K.
"""

import numpy as np

from dcmase import plugin_estimates
from dcmase.clustering import KMeansConfig
from dcmase.estimation import mse_table, to_community_sum
from dcmase.simulation import Scenario, generate_scenario_model

model = generate_scenario_model(Scenario(n=120, B_mode="different", theta_mode="different",
                                         target_degree=20), 6, 0)
layers = model.sample(seed=3)

params = plugin_estimates(layers, model.labels)
print("estimated B, layer 0:\n", np.round(params.B[0], 3))
# the generator uses a different normalisation; convert before comparing
_, B_true = to_community_sum(model.theta[0], model.B[0], model.labels)
print("true B, layer 0:\n", np.round(B_true, 3))

rows = mse_table(layers, "dcmase", [1, 2, 3, 4, 5], KMeansConfig(restarts=10))
for K in range(1, 6):
    mse = np.mean([r["mse"] for r in rows if r["K"] == K])
    print(f"K={K}: mean held-out MSE {mse:.6f}")
