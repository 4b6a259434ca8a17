"""Community detection in multilayer degree-corrected stochastic blockmodels."""

from .baselines import (
    METHODS,
    baseline_cluster,
    bias_adjusted_sos_embed,
    mase_embed,
    mean_adjacency_embed,
    run_method,
)
from .clustering import KMeansConfig, ari, kmeans, misclustering_rate
from .embedding import EmbeddingMatrix, scaled_embedding, spherical_normalize
from .estimation import (
    FittedParameters,
    oos_mse,
    plugin_estimates,
    reconstruct_expectation,
)
from .joint import DCMASEResult, JointEmbedding, dcmase, joint_embed, select_rank_elbow
from .model import (
    CommunityAssignment,
    MultilayerModel,
    check_identifiability,
    expected_matrix,
    population_diagnostics,
    rescale_to_average_degree,
    sample_layer,
)
from .simulation import Scenario, generate_scenario_model, run_sweep
from .spectral import SpectralDecomposition, SvdResult, top_eigenpairs, truncated_svd

__version__ = "0.1.0"
