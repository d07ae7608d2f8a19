"""Regularization learning networks for tabular data.

Thin wrapper around the compiled extension; everything lives in
``rlnkit._core``.
"""

from rlnkit._core import (  # noqa: F401
    ConfigError,
    DataError,
    Dataset,
    Mode,
    Network,
    Norm,
    NumericError,
    SparsityReport,
    SynthConfig,
    SynthData,
    TrainConfig,
    TrainResult,
    WeightUpdate,
    __version__,
    ensemble_predict,
    feature_r2,
    garson_importance,
    importance_entropy,
    js_divergence,
    load_csv,
    load_model,
    mse_loss,
    prediction_variance,
    r2_score,
    save_model,
    sparsity_report,
    split_dataset,
    standardize,
    synth_generate,
    train,
    train_linear,
)

__all__ = [
    "ConfigError",
    "DataError",
    "Dataset",
    "Mode",
    "Network",
    "Norm",
    "NumericError",
    "SparsityReport",
    "SynthConfig",
    "SynthData",
    "TrainConfig",
    "TrainResult",
    "WeightUpdate",
    "ensemble_predict",
    "feature_r2",
    "garson_importance",
    "importance_entropy",
    "js_divergence",
    "load_csv",
    "load_model",
    "mse_loss",
    "prediction_variance",
    "r2_score",
    "save_model",
    "sparsity_report",
    "split_dataset",
    "standardize",
    "synth_generate",
    "train",
    "train_linear",
]
