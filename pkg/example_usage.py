# example_usage.py
"""
End-to-end designtrace walk-through on a synthetic cohort
"""

import logging
import tempfile
from pathlib import Path

from designtrace.experiments import (
    ExperimentSettings,
    band_sweep,
    histogram_final_energy,
    prefix_sweep,
    stability_run,
    write_report,
)
from designtrace.features import tally_matrix
from designtrace.ingest import load_cohort, write_repair_report
from designtrace.learners import (
    SplitSpec,
    accuracy,
    filter_labeled,
    fit_model,
    label_dataset,
    predict,
    save_model,
    split,
)
from designtrace.models import ModelFamily
from designtrace.synth import GenConfig, generate, write_manifest
from designtrace.utils import setup_logger

logger = setup_logger("designtrace", logging.INFO)

work = Path(tempfile.mkdtemp(prefix="designtrace-"))


# 1. Generate a cohort with planted signal and some broken files
manifest = generate(
    GenConfig(n_students=128, success_rate=0.7, signal=0.9, early_signal=0.6, corruption_rate=0.1, seed=42),
    work / "raw",
)
write_manifest(manifest, work / "manifest.csv")


# 2. Load it, repairing what can be repaired
cohort, logs = load_cohort(work / "raw", workers=4)
write_repair_report(logs, work / "repairs.csv")
logger.info(f"Loaded {len(cohort)} sessions from {len(logs)} files")


# 3. Train one classifier by hand
labeled = filter_labeled(cohort)
data = label_dataset(tally_matrix(labeled.sessions), labeled.energies(), band=10_000.0)
train, test = split(data, SplitSpec(test_fraction=0.2, seed=7))
weights = fit_model(train, ModelFamily.LOGISTIC)
logger.info(f"Held-out accuracy: {accuracy(predict(weights, test.features), test.targets):.3f}")
save_model(weights, work / "model.json")


# 4. Experiments, each written as CSV and SVG
settings = ExperimentSettings(band=10_000.0, workers=4)
reports = [
    histogram_final_energy(cohort),
    band_sweep(cohort, (5_000.0, 10_000.0, 20_000.0), seed=1, settings=settings),
    stability_run(cohort, iterations=10, seed_base=42, settings=settings),
    prefix_sweep(cohort, (0.2, 0.4, 0.6, 0.8, 1.0), iterations=5, seed_base=42, settings=settings),
]
for report in reports:
    write_report(report, work / f"{report.name}.csv")
    write_report(report, work / f"{report.name}.svg")

logger.info(f"Reports written to {work}")
