"""Random under- and over-sampling to equalize class counts."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import EmptyClass

STRATEGIES = ("none", "undersample", "oversample")
SCOPES = ("train_only", "whole_dataset")


@dataclass(frozen=True)
class ResamplePlan:
    strategy: str = "none"
    seed: int = 0
    scope: str = "train_only"

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ValueError(f"resample strategy must be one of {STRATEGIES}")
        if self.scope not in SCOPES:
            raise ValueError(f"resample scope must be one of {SCOPES}")

    @property
    def leak_prone(self) -> bool:
        return self.strategy != "none" and self.scope == "whole_dataset"

    def describe(self) -> dict:
        d = {"strategy": self.strategy, "seed": self.seed, "scope": self.scope}
        if self.leak_prone:
            d["note"] = "paper-compat (leak-prone)"
        return d

    def indices(self, y, seed: Optional[int] = None, n_classes: Optional[int] = None) -> np.ndarray:
        seed = self.seed if seed is None else seed
        if self.strategy == "undersample":
            return undersample_indices(y, seed, n_classes)
        if self.strategy == "oversample":
            return oversample_indices(y, seed, n_classes)
        return np.arange(len(y))


def _class_members(y, n_classes):
    y = np.asarray(y, dtype=np.intp)
    classes = np.unique(y) if n_classes is None else np.arange(n_classes)
    members = [np.flatnonzero(y == c) for c in classes]
    if not members or any(len(m) == 0 for m in members):
        raise EmptyClass("every class needs at least one sample")
    return members


def undersample_indices(y, seed: int = 0, n_classes: Optional[int] = None) -> np.ndarray:
    """Keep ``min`` class count samples per class, drawn without replacement; sorted output.

    Classes are the distinct values of ``y`` unless ``n_classes`` is given,
    in which case every code below it must occur.
    """
    members = _class_members(y, n_classes)
    n_min = min(len(m) for m in members)
    rng = np.random.default_rng(seed)
    keep = [rng.choice(m, size=n_min, replace=False) for m in members]
    return np.sort(np.concatenate(keep))


def oversample_indices(y, seed: int = 0, n_classes: Optional[int] = None) -> np.ndarray:
    """Keep every index once and add uniform duplicates until each class has ``max`` count."""
    members = _class_members(y, n_classes)
    n_max = max(len(m) for m in members)
    rng = np.random.default_rng(seed)
    out = []
    for m in members:
        out.append(m)
        if len(m) < n_max:
            out.append(rng.choice(m, size=n_max - len(m), replace=True))
    return np.sort(np.concatenate(out))
