"""Community detection in attributed networks.

A Poisson block model over links and binary node attributes in which each
node's propensity to connect and to carry attributes is scaled by a composite
topology weight (degree + clustering coefficient + betweenness centrality).
Fitting is EM with random restarts; see bcsbm.model for the math.
"""

from .datasets import (
    DataFormatError,
    DatasetManifest,
    EXPECTED_STATS,
    IngestReport,
    REFERENCE_SCORES,
    load_citation_dataset,
    load_generic,
    load_partition,
    manifest_for,
    write_generic,
    write_partition,
)
from .generate import BLOCK_PATTERNS, PlantedSample, PlantedSpec, sample_network
from .metrics import confusion_counts, nmi, pwf
from .model import (
    DegenerateRateError,
    FitConfig,
    FitResult,
    INIT_SCHEMES,
    ModelParams,
    Responsibilities,
    RestartRecord,
    e_step,
    fit,
    hard_partition,
    init_params,
    log_likelihood,
    lower_bound,
    m_step,
    membership_scores,
)
from .network import AttributedNetwork, Partition, build_network
from .topology import (
    NodeWeights,
    WEIGHT_MODES,
    betweenness,
    clustering_coefficients,
    degrees,
    node_weights,
)

__version__ = "0.1.0"

__all__ = [
    "AttributedNetwork",
    "BLOCK_PATTERNS",
    "DataFormatError",
    "DatasetManifest",
    "DegenerateRateError",
    "EXPECTED_STATS",
    "FitConfig",
    "FitResult",
    "INIT_SCHEMES",
    "IngestReport",
    "ModelParams",
    "NodeWeights",
    "Partition",
    "PlantedSample",
    "PlantedSpec",
    "REFERENCE_SCORES",
    "Responsibilities",
    "RestartRecord",
    "WEIGHT_MODES",
    "betweenness",
    "build_network",
    "clustering_coefficients",
    "confusion_counts",
    "degrees",
    "e_step",
    "fit",
    "hard_partition",
    "init_params",
    "load_citation_dataset",
    "load_generic",
    "load_partition",
    "log_likelihood",
    "lower_bound",
    "m_step",
    "manifest_for",
    "membership_scores",
    "nmi",
    "node_weights",
    "pwf",
    "sample_network",
    "write_generic",
    "write_partition",
    "__version__",
]
