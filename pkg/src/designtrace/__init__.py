# src/designtrace/__init__.py
"""
designtrace - CAD action logs to design-outcome predictions
Log repair, action-category features, from-scratch regression learners, experiment reports
"""

__version__ = "0.4.0"

from .models import (
    ActionCategory,
    Cohort,
    DesignAction,
    FeatureKind,
    ModelFamily,
    ModelWeights,
    SessionLog,
    Standardization,
)
from .features import DEFAULT_MAPPING, CategoryMapping, load_mapping
from .ingest import clean_directory, load_cohort, repair
from .errors import (
    DataError,
    DataIOError,
    DegenerateLabelsError,
    DesignTraceError,
    DomainError,
    EmptyCohortError,
    InsufficientDataError,
    MappingConfigError,
    SessionParseError,
    UnmappedActionError,
    UnrepairableCorpusError,
)

__all__ = [
    # Core types
    "ActionCategory",
    "DesignAction",
    "SessionLog",
    "Cohort",
    "FeatureKind",
    "ModelFamily",
    "ModelWeights",
    "Standardization",
    # Mapping & ingest
    "CategoryMapping",
    "DEFAULT_MAPPING",
    "load_mapping",
    "repair",
    "load_cohort",
    "clean_directory",
    # Errors
    "DesignTraceError",
    "DomainError",
    "DataError",
    "DataIOError",
    "SessionParseError",
    "UnmappedActionError",
    "DegenerateLabelsError",
    "InsufficientDataError",
    "EmptyCohortError",
    "UnrepairableCorpusError",
    "MappingConfigError",
]
