"""Class-specific feature selection for interval-valued data."""

from ivfs.classify import ClassifierConfig, accuracy, classify_sample
from ivfs.clustering import ClusterModel, KMeansConfig, interval_kmeans
from ivfs.dataset import (
    IntervalFeatureMatrix,
    load_fixture,
    parse_dataset,
    stratified_split,
    synthesize_dataset,
    transpose_by_class,
)
from ivfs.exceptions import (
    ConfigurationError,
    DimensionError,
    FormatError,
    IvfsError,
    SplitError,
    ValidationError,
)
from ivfs.interval_core import Interval, IntervalVector, isv, sim_pair, ssk
from ivfs.selection import FeatureKnowledgebase, build_knowledgebase

__version__ = "0.1.0"

__all__ = [
    "ClassifierConfig",
    "ClusterModel",
    "ConfigurationError",
    "DimensionError",
    "FeatureKnowledgebase",
    "FormatError",
    "Interval",
    "IntervalFeatureMatrix",
    "IntervalVector",
    "IvfsError",
    "KMeansConfig",
    "SplitError",
    "ValidationError",
    "accuracy",
    "build_knowledgebase",
    "classify_sample",
    "interval_kmeans",
    "isv",
    "load_fixture",
    "parse_dataset",
    "sim_pair",
    "ssk",
    "stratified_split",
    "synthesize_dataset",
    "transpose_by_class",
]
