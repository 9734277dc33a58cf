"""Category mapping and feature construction"""

from .encode import (
    CodeSequence,
    CountVector,
    FeatureMatrix,
    encode_sequence,
    feature_matrix,
    fit_pad_length,
    pad_matrix,
    prefix,
    sequence_matrix,
    tally,
    tally_matrix,
)
from .io import read_features_csv, write_features_csv
from .mapping import (
    DEFAULT_MAPPING,
    CategoryMapping,
    MappingRule,
    ValidationResult,
    categorize,
    load_mapping,
)
from .standardize import apply_standardizer, fit_standardizer, unstandardize

__all__ = [
    "CategoryMapping",
    "MappingRule",
    "ValidationResult",
    "DEFAULT_MAPPING",
    "categorize",
    "load_mapping",
    "CountVector",
    "CodeSequence",
    "FeatureMatrix",
    "tally",
    "encode_sequence",
    "prefix",
    "pad_matrix",
    "fit_pad_length",
    "tally_matrix",
    "sequence_matrix",
    "feature_matrix",
    "fit_standardizer",
    "apply_standardizer",
    "unstandardize",
    "write_features_csv",
    "read_features_csv",
]
