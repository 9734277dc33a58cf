# src/designtrace/experiments/registry.py
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, List, Tuple

from ..errors import DomainError


@dataclass(frozen=True)
class ExperimentEntry:
    command: str
    report_name: str
    description: str
    run: Callable


class ExperimentRegistry:
    """
    Lightweight experiment registry.

    Supports:
    - register(entry)
    - resolve(command) → entry
    - commands() → registered command names, in registration order
    """

    _experiments: Dict[str, ExperimentEntry] = {}

    @classmethod
    def register(cls, entry: ExperimentEntry):
        existing = cls._experiments.get(entry.command)
        if existing is not None and existing.run is not entry.run:
            raise DomainError(f"Experiment command already registered: {entry.command}")
        cls._experiments[entry.command] = entry

    @classmethod
    def resolve(cls, command: str) -> ExperimentEntry:
        if command not in cls._experiments:
            raise DomainError(
                f"Unknown experiment {command!r}; expected one of {', '.join(cls.commands())}"
            )
        return cls._experiments[command]

    @classmethod
    def commands(cls) -> Tuple[str, ...]:
        return tuple(cls._experiments)

    @classmethod
    def entries(cls) -> List[ExperimentEntry]:
        return list(cls._experiments.values())


def experiment(command: str, report_name: str, description: str):
    """
    Decorator to register an experiment adapter at import time.

    Usage:
        @experiment("hist", "histogram", "Final net energy histogram")
        def run_histogram(cohort, options): ...
    """

    def wrap(fn: Callable[..., object]):
        ExperimentRegistry.register(
            ExperimentEntry(command=command, report_name=report_name, description=description, run=fn)
        )
        return fn

    return wrap
