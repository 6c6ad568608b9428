"""Reactivity: an information-geometric correlation measure for qubit networks.

Detector outcomes of a state measured along chosen Bloch directions define
Shannon entropies; conditional entropies act as edge lengths of an
"information simplex" whose boundary area over volume, averaged over detector
settings, is the reactivity.
"""

from .avg import (
    AveragingMode,
    MeanEstimate,
    ReactivityResult,
    average,
    mean_distance,
    reactivity,
    reactivity_bipartite,
    reactivity_multipartite,
)
from .corrmeasures import (
    DiscordSearchConfig,
    concurrence,
    global_quantum_discord,
    relative_entropy,
    sanov_fidelity,
)
from .infogeom import (
    EntropyProfile,
    boundary_area,
    conditional_entropy,
    entropy_profile,
    info_distance,
    shannon_entropy,
    subset_entropy,
    sym_volume,
)
from .measure import DetectorSetting, OutcomeDistribution, joint_distribution, marginalize, projectors
from .qcore import (
    DensityMatrix,
    KrausChannel,
    apply_channel,
    depolarizing,
    haar_random_unitary,
    partial_trace,
    tensor_product,
)
from .states import bell, classical_corr, ghz, parse_state_spec, product, random_pure, singlet, werner, wstate

__version__ = "0.1.0"
