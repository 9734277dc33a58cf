# src/designtrace/monitoring.py
"""
Stage timing and pipeline metrics
"""
from typing import Callable, Dict, List, Optional
from dataclasses import dataclass, field
import threading
import time
import logging


@dataclass
class StageMetrics:
    """Metrics for a single pipeline stage"""

    stage: str
    duration_ms: float
    success: bool
    items: int = 0
    error: Optional[str] = None


@dataclass
class AggregatedMetrics:
    """Aggregated metrics over all recorded stages"""

    total_stages: int = 0
    failed_stages: int = 0
    total_duration_ms: float = 0.0
    items_by_stage: Dict[str, int] = field(default_factory=dict)
    duration_by_stage: Dict[str, float] = field(default_factory=dict)
    slow_stages: List[StageMetrics] = field(default_factory=list)


class MetricsCollector:
    """Collects and aggregates stage metrics"""

    def __init__(self, slow_stage_threshold_ms: float = 30_000.0):
        self.slow_stage_threshold = slow_stage_threshold_ms
        self._metrics: List[StageMetrics] = []
        self._lock = threading.Lock()
        self._hooks: List[Callable[[StageMetrics], None]] = []
        self.logger = logging.getLogger(__name__)

    def record(self, metric: StageMetrics):
        """Record a stage metric"""
        with self._lock:
            self._metrics.append(metric)

            if metric.duration_ms > self.slow_stage_threshold:
                self.logger.warning(
                    f"Slow stage detected: {metric.stage} took {metric.duration_ms:.0f}ms"
                )

            for hook in self._hooks:
                try:
                    hook(metric)
                except Exception as e:
                    self.logger.error(f"Metrics hook failed: {e}")

    def register_hook(self, hook: Callable[[StageMetrics], None]):
        """Register a metrics hook"""
        self._hooks.append(hook)

    def get_metrics(self, stage: Optional[str] = None) -> List[StageMetrics]:
        with self._lock:
            metrics = self._metrics.copy()
        if stage:
            metrics = [m for m in metrics if m.stage == stage]
        return metrics

    def aggregate(self) -> AggregatedMetrics:
        """Generate aggregated metrics"""
        metrics = self.get_metrics()
        agg = AggregatedMetrics()

        for m in metrics:
            agg.total_stages += 1
            if not m.success:
                agg.failed_stages += 1
            agg.total_duration_ms += m.duration_ms
            agg.items_by_stage[m.stage] = agg.items_by_stage.get(m.stage, 0) + m.items
            agg.duration_by_stage[m.stage] = (
                agg.duration_by_stage.get(m.stage, 0.0) + m.duration_ms
            )
            if m.duration_ms > self.slow_stage_threshold:
                agg.slow_stages.append(m)

        return agg

    def summary_lines(self) -> List[str]:
        """Human-readable per-stage summary, in first-seen order"""
        agg = self.aggregate()
        return [
            f"{stage}: {agg.duration_by_stage[stage]:.1f}ms ({agg.items_by_stage[stage]} items)"
            for stage in agg.duration_by_stage
        ]


class StageTimer:
    """Context manager for automatic stage timing"""

    def __init__(self, collector: MetricsCollector, stage: str):
        self.collector = collector
        self.stage = stage
        self.items = 0
        self.start_time = None

    def __enter__(self):
        self.start_time = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        duration_ms = (time.perf_counter() - self.start_time) * 1000  # type: ignore

        self.collector.record(
            StageMetrics(
                stage=self.stage,
                duration_ms=duration_ms,
                success=exc_type is None,
                items=self.items,
                error=None if exc_val is None else str(exc_val),
            )
        )

        return False
