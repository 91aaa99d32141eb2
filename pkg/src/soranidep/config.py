"""Run configuration: defaults < YAML file < command-line overrides.

Keys are dotted paths into :class:`RunConfig`, e.g. ``split.k`` or
``model.rf.n_trees``. Unknown keys and ill-typed values are rejected.
"""

from __future__ import annotations

import dataclasses
import types
import typing
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

import yaml

from .classifiers import FAMILIES, LrParams, MnbParams, ModelSpec, RfParams, SvmParams
from .errors import ConfigFileNotFound, TypeMismatch, UnknownKey
from .harness import ExperimentSpec, preset
from .resampling import ResamplePlan
from .synthetic import SyntheticSpec
from .text import PreprocessOptions


@dataclass
class PreprocessConfig:
    normalize: bool = True
    strip: bool = True
    dedup: bool = True
    drop_empty: bool = True
    keyword_filter: bool = False
    keywords: Optional[str] = None  # keyword file; default set when None
    table: Optional[str] = None  # normalization mapping file


@dataclass
class FeatureConfig:
    min_df: int = 1


@dataclass
class SplitConfig:
    test_fraction: float = 0.1
    k: int = 10
    seed: Optional[int] = None
    cv: bool = True


@dataclass
class ResampleConfig:
    strategy: Optional[str] = None  # None: the preset decides
    seed: Optional[int] = None
    scope: str = "train_only"


@dataclass
class ModelConfig:
    families: list[str] = field(default_factory=lambda: list(FAMILIES))
    mnb: MnbParams = field(default_factory=MnbParams)
    lr: LrParams = field(default_factory=LrParams)
    svm: SvmParams = field(default_factory=SvmParams)
    rf: RfParams = field(default_factory=RfParams)


@dataclass
class SynthConfig:
    class_counts: list[int] = field(default_factory=lambda: [300, 300, 60])
    vocab_size: int = 500
    markers_per_class: int = 20
    marker_rate: float = 0.3
    leak_rate: float = 0.0
    min_len: int = 8
    max_len: int = 20
    noise_rate: float = 0.2
    seed: Optional[int] = None


@dataclass
class RunConfig:
    input: Optional[str] = None  # None: use the synthetic corpus
    format: Optional[str] = None
    out: str = "reports"
    suite: str = "suite"
    seed: int = 42
    experiment: str = "exp4"
    family: str = "rf"
    model_file: str = "model.json"
    paper_compat: bool = False
    real_data: bool = False
    preprocess: PreprocessConfig = field(default_factory=PreprocessConfig)
    features: FeatureConfig = field(default_factory=FeatureConfig)
    split: SplitConfig = field(default_factory=SplitConfig)
    resample: ResampleConfig = field(default_factory=ResampleConfig)
    model: ModelConfig = field(default_factory=ModelConfig)
    synth: SynthConfig = field(default_factory=SynthConfig)
    explicit: frozenset = field(default_factory=frozenset, repr=False, compare=False)

    # -- derived values --------------------------------------------------

    def _seed(self, key: str, offset: int) -> int:
        v = self.get(key)
        return v if key in self.explicit and v is not None else self.seed + offset

    @property
    def split_seed(self) -> int:
        return self.split.seed if self.split.seed is not None else self.seed

    def model_spec(self, family: str) -> ModelSpec:
        params = getattr(self.model, family)
        if family == "svm":
            params = dataclasses.replace(params, seed=self._seed("model.svm.seed", 3))
        elif family == "rf":
            params = dataclasses.replace(params, seed=self._seed("model.rf.seed", 4))
        return ModelSpec(family, params)

    def model_specs(self) -> tuple[ModelSpec, ...]:
        return tuple(self.model_spec(f) for f in self.model.families)

    def experiment_spec(self, name: str) -> ExperimentSpec:
        spec = preset(name, self.split_seed, self.paper_compat, self.model_specs(),
                      test_fraction=self.split.test_fraction, k=self.split.k, cv=self.split.cv,
                      min_df=self.features.min_df, preprocess=self.preprocess_options())
        r = self.resample
        strategy = r.strategy if r.strategy is not None else spec.resample.strategy
        scope = "whole_dataset" if self.paper_compat else r.scope
        seed = r.seed if r.seed is not None else spec.resample.seed
        return dataclasses.replace(spec, resample=ResamplePlan(strategy, seed, scope))

    def preprocess_options(self) -> PreprocessOptions:
        p = self.preprocess
        return PreprocessOptions(p.normalize, p.strip, p.dedup, p.drop_empty)

    def synthetic_spec(self) -> SyntheticSpec:
        s = self.synth
        return SyntheticSpec(tuple(s.class_counts), s.vocab_size, s.markers_per_class, s.marker_rate,
                             s.leak_rate, s.min_len, s.max_len, s.noise_rate,
                             s.seed if s.seed is not None else self.seed)

    def get(self, key: str) -> Any:
        obj = self
        for part in key.split("."):
            obj = getattr(obj, part)
        return obj

    def as_dict(self) -> dict:
        return flatten_defaults(self)


def _is_dataclass_type(tp) -> bool:
    return isinstance(tp, type) and dataclasses.is_dataclass(tp)


def _field_types(cls) -> dict:
    hints = typing.get_type_hints(cls)
    return {f.name: hints[f.name] for f in dataclasses.fields(cls) if f.name != "explicit"}


def key_types(cls=RunConfig, prefix: str = "") -> dict[str, Any]:
    """Every settable dotted key and its annotated type."""
    out = {}
    for name, tp in _field_types(cls).items():
        if _is_dataclass_type(tp):
            out.update(key_types(tp, f"{prefix}{name}."))
        else:
            out[f"{prefix}{name}"] = tp
    return out


def flatten_defaults(obj, prefix: str = "") -> dict:
    out = {}
    for f in dataclasses.fields(obj):
        if f.name == "explicit":
            continue
        v = getattr(obj, f.name)
        if dataclasses.is_dataclass(v):
            out.update(flatten_defaults(v, f"{prefix}{f.name}."))
        else:
            out[f"{prefix}{f.name}"] = v
    return out


def _flatten_mapping(d: dict, prefix: str = "") -> dict:
    out = {}
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten_mapping(v, key + "."))
        else:
            out[key] = v
    return out


def _coerce(key: str, value: Any, tp) -> Any:
    origin = typing.get_origin(tp)
    if origin in (typing.Union, types.UnionType):
        args = typing.get_args(tp)
        if value is None and type(None) in args:
            return None
        for a in args:
            if a is type(None):
                continue
            try:
                return _coerce(key, value, a)
            except TypeMismatch:
                pass
        raise TypeMismatch(f"{key}: {value!r} does not match {tp}")
    if origin in (list, tuple):
        (elem,) = typing.get_args(tp)[:1]
        if not isinstance(value, (list, tuple)):
            raise TypeMismatch(f"{key}: expected a list, got {value!r}")
        return [_coerce(key, v, elem) for v in value]
    if tp is bool:
        if isinstance(value, bool):
            return value
    elif tp is int:
        if isinstance(value, int) and not isinstance(value, bool):
            return value
    elif tp is float:
        if isinstance(value, (int, float)) and not isinstance(value, bool):
            return float(value)
    elif tp is str:
        if isinstance(value, str):
            return value
    raise TypeMismatch(f"{key}: expected {getattr(tp, '__name__', tp)}, got {value!r}")


def _set(cfg: RunConfig, key: str, value: Any) -> None:
    parts = key.split(".")
    obj = cfg
    for part in parts[:-1]:
        obj = getattr(obj, part)
    if dataclasses.is_dataclass(obj) and getattr(obj, "__dataclass_params__").frozen:
        parent = cfg
        for part in parts[:-2]:
            parent = getattr(parent, part)
        setattr(parent, parts[-2], dataclasses.replace(obj, **{parts[-1]: value}))
    else:
        setattr(obj, parts[-1], value)


def parse_value(text: str) -> Any:
    """Interpret a command-line override value with YAML scalar rules."""
    return yaml.safe_load(text) if text.strip() else ""


def parse_config(path=None, overrides: Optional[dict] = None) -> RunConfig:
    """Build a config from defaults, an optional YAML file, then ``overrides``.

    ``overrides`` maps dotted keys to already-typed values (strings from the
    command line should go through :func:`parse_value` first).
    """
    types_ = key_types()
    layered: dict = {}
    if path is not None:
        p = Path(path)
        if not p.is_file():
            raise ConfigFileNotFound(f"config file not found: {path}")
        loaded = yaml.safe_load(p.read_text(encoding="utf-8")) or {}
        if not isinstance(loaded, dict):
            raise TypeMismatch(f"{path}: top level must be a mapping")
        layered.update(_flatten_mapping(loaded))
    layered.update(overrides or {})
    cfg = RunConfig()
    for key, value in layered.items():
        if key not in types_:
            raise UnknownKey(key)
        _set(cfg, key, _coerce(key, value, types_[key]))
    cfg.explicit = frozenset(layered)
    bad = [f for f in cfg.model.families if f not in FAMILIES]
    if bad:
        raise TypeMismatch(f"model.families: unknown {bad}")
    return cfg
