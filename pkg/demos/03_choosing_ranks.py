"""
Picking embedding dimensions from the scree
===========================================

When block matrices are rank deficient the per-layer embedding dimension
is smaller than K.  The profile-likelihood elbow finds it from the
eigenvalue magnitudes.  On expected matrices the first eigenvalue is
usually far above the rest, so the first elbow sits at 1 and the second
one is the useful cut.
"""

import numpy as np

from dcmase import ari, dcmase, select_rank_elbow
from dcmase.simulation import Scenario, generate_scenario_model
from dcmase.spectral import eigenvalue_magnitudes

model = generate_scenario_model(Scenario(n=90, theta_mode="different", B_mode="different",
                                         edge_mode="poisson"), 4, 0)

for l, P in enumerate(model.expected_matrices()):
    mags = eigenvalue_magnitudes(P)[:6]
    print(f"layer {l}: top |eigenvalues| {np.round(mags, 3)}  "
          f"first elbow {select_rank_elbow(eigenvalue_magnitudes(P))}  "
          f"second elbow {select_rank_elbow(eigenvalue_magnitudes(P), n_elbows=2)}")

res = dcmase(model.expected_matrices(), K=3, per_layer_ranks="auto", K_tilde="auto")
print("chosen ranks:", res.joint.per_layer_ranks, "K_tilde:", res.joint.K_tilde)
print("ARI:", ari(res.labels, model.labels))
