"""Model kinds, per-kind hyperparameters, and the shipped defaults.

The default parameter set for each kind is the best configuration the
tuning study settled on; the grids in `grid.py` reproduce the searched
space.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

from ..errors import ConfigurationError


class ModelKind(str, Enum):
    KNN = "knn"
    RF = "rf"
    DT = "dt"
    SVM = "svm"
    LGBM = "lgbm"
    MLP = "mlp"

    @classmethod
    def parse(cls, value: Union[str, "ModelKind"]) -> "ModelKind":
        if isinstance(value, ModelKind):
            return value
        try:
            return cls(value.strip().lower())
        except ValueError:
            raise ConfigurationError(f"unknown model kind '{value}'") from None


# Accept the alternate spelling that shows up in tuning configs.
_METRIC_ALIASES = {"euclidian": "euclidean", "manhattan": "cityblock", "l1": "cityblock"}


@dataclass(frozen=True)
class KNNParams:
    n_neighbours: int = 11
    metric: str = "cityblock"

    def __post_init__(self):
        object.__setattr__(self, "metric", _METRIC_ALIASES.get(self.metric, self.metric))
        if self.n_neighbours < 1:
            raise ConfigurationError("n_neighbours must be >= 1")
        if self.metric not in ("euclidean", "cityblock"):
            raise ConfigurationError(f"unsupported metric '{self.metric}'")


@dataclass(frozen=True)
class RFParams:
    max_depth: int = 9
    n_estimators: int = 89
    criterion: str = "entropy"
    # Engineering knobs, not part of the tuned grid. features_per_split None
    # means all features are candidates at every split; bootstrap False plus
    # features_per_split None makes a 1-tree forest coincide with a DT.
    bootstrap: bool = True
    features_per_split: Optional[int] = 2  # floor(sqrt(7))

    def __post_init__(self):
        if self.max_depth < 1 or self.n_estimators < 1:
            raise ConfigurationError("max_depth and n_estimators must be >= 1")
        if self.criterion not in ("gini", "entropy"):
            raise ConfigurationError(f"unsupported criterion '{self.criterion}'")
        if self.features_per_split is not None and self.features_per_split < 1:
            raise ConfigurationError("features_per_split must be >= 1 or None")


@dataclass(frozen=True)
class DTParams:
    max_depth: int = 131
    criterion: str = "gini"
    splitter: str = "best"
    min_samples_split: int = 4

    def __post_init__(self):
        if self.max_depth < 1:
            raise ConfigurationError("max_depth must be >= 1")
        if self.criterion not in ("gini", "entropy"):
            raise ConfigurationError(f"unsupported criterion '{self.criterion}'")
        if self.splitter not in ("best", "random"):
            raise ConfigurationError(f"unsupported splitter '{self.splitter}'")
        if self.min_samples_split < 2:
            raise ConfigurationError("min_samples_split must be >= 2")


@dataclass(frozen=True)
class SVMParams:
    kernel: str = "linear"
    C: float = 0.01
    gamma: float = 0.1  # rbf only
    epochs: int = 100
    batch_size: int = 64

    def __post_init__(self):
        if self.kernel not in ("linear", "rbf"):
            raise ConfigurationError(f"unsupported kernel '{self.kernel}'")
        if self.C <= 0:
            raise ConfigurationError("C must be > 0")
        if self.kernel == "rbf" and self.gamma <= 0:
            raise ConfigurationError("gamma must be > 0 for rbf")
        if self.epochs < 1 or self.batch_size < 1:
            raise ConfigurationError("epochs and batch_size must be >= 1")


@dataclass(frozen=True)
class LGBMParams:
    num_leaves: int = 5
    learning_rate: float = 0.1
    n_estimators: int = 43
    # Fixed regularization choices: small leaves forbidden, quantile histograms.
    min_samples_leaf: int = 5
    max_bins: int = 63

    def __post_init__(self):
        if self.num_leaves < 2:
            raise ConfigurationError("num_leaves must be >= 2")
        if self.learning_rate <= 0:
            raise ConfigurationError("learning_rate must be > 0")
        if self.n_estimators < 1:
            raise ConfigurationError("n_estimators must be >= 1")
        if self.min_samples_leaf < 1 or self.max_bins < 2:
            raise ConfigurationError("invalid leaf/bin settings")


@dataclass(frozen=True)
class MLPParams:
    activation: str = "relu"
    learning_rate_schedule: str = "constant"
    solver: str = "adam"
    alpha: float = 0.5
    hidden_layer_sizes: tuple[int, ...] = (10, 30, 50, 25)
    learning_rate_init: float = 1e-3
    batch_size: int = 32
    max_epochs: int = 500
    tol: float = 1e-5
    patience: int = 20

    def __post_init__(self):
        object.__setattr__(self, "hidden_layer_sizes", tuple(int(h) for h in self.hidden_layer_sizes))
        if self.activation not in ("tanh", "relu"):
            raise ConfigurationError(f"unsupported activation '{self.activation}'")
        if self.learning_rate_schedule not in ("constant", "adaptive"):
            raise ConfigurationError(f"unsupported schedule '{self.learning_rate_schedule}'")
        if self.solver not in ("sgd", "adam"):
            raise ConfigurationError(f"unsupported solver '{self.solver}'")
        if self.alpha < 0:
            raise ConfigurationError("alpha must be >= 0")
        if not self.hidden_layer_sizes or any(h < 1 for h in self.hidden_layer_sizes):
            raise ConfigurationError("hidden_layer_sizes must be non-empty positive ints")


Hyperparameters = Union[KNNParams, RFParams, DTParams, SVMParams, LGBMParams, MLPParams]

PARAM_TYPES: dict[ModelKind, type] = {
    ModelKind.KNN: KNNParams,
    ModelKind.RF: RFParams,
    ModelKind.DT: DTParams,
    ModelKind.SVM: SVMParams,
    ModelKind.LGBM: LGBMParams,
    ModelKind.MLP: MLPParams,
}


def default_params(kind: ModelKind) -> Hyperparameters:
    """The shipped best configuration for a model kind."""
    return PARAM_TYPES[ModelKind.parse(kind)]()


def check_params(kind: ModelKind, params: Hyperparameters) -> Hyperparameters:
    expected = PARAM_TYPES[ModelKind.parse(kind)]
    if not isinstance(params, expected):
        raise ConfigurationError(
            f"hyperparameters of type {type(params).__name__} do not match model kind '{kind.value}'"
        )
    return params


def params_to_dict(params: Hyperparameters) -> dict:
    out = {}
    for name in params.__dataclass_fields__:
        value = getattr(params, name)
        out[name] = list(value) if isinstance(value, tuple) else value
    return out


def params_from_dict(kind: ModelKind, d: dict) -> Hyperparameters:
    cls = PARAM_TYPES[ModelKind.parse(kind)]
    kwargs = dict(d)
    if "hidden_layer_sizes" in kwargs:
        kwargs["hidden_layer_sizes"] = tuple(kwargs["hidden_layer_sizes"])
    try:
        return cls(**kwargs)
    except TypeError as exc:
        raise ConfigurationError(f"bad hyperparameters for '{kind}': {exc}") from None
