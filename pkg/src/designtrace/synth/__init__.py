"""Synthetic cohort generation"""

from .generator import (
    FAULTS,
    VOCABULARY,
    GenConfig,
    ManifestEntry,
    category_weights,
    generate,
    generate_student,
    inject_fault,
    segment_elevations,
)
from .manifest import (
    ManifestCheck,
    Mismatch,
    MismatchKind,
    read_manifest,
    verify_manifest,
    write_manifest,
)

__all__ = [
    "GenConfig",
    "ManifestEntry",
    "VOCABULARY",
    "FAULTS",
    "generate",
    "generate_student",
    "inject_fault",
    "category_weights",
    "segment_elevations",
    "write_manifest",
    "read_manifest",
    "verify_manifest",
    "ManifestCheck",
    "Mismatch",
    "MismatchKind",
]
