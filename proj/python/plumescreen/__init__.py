# Copyright 2026 The plumescreen Authors. All Rights Reserved.
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#     http://www.apache.org/licenses/LICENSE-2.0
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Methane plume versus retrieval-artifact screening."""

import json as _json

import numpy as _np

from ._core import (
    ConfigError,
    DataError,
    Model,
    TrainingError,
    __version__,
    average_precision,
    balanced_accuracy,
    channel_names,
    extract_features,
    feature_names,
    generate_pack,
    read_feature_csv,
    read_pack,
    roc_auc,
    run_cli,
    stratified_kfold,
)
from ._core import _cross_validate


def binary_labels(labels):
    """Map 'plume'/'artifact' strings to 1/0."""
    mapping = {"plume": 1, "artifact": 0}
    return _np.array([mapping[label] for label in labels], dtype=_np.int32)


def train(X, y, kind="forest", params=None, seed=0, feature_names=None):
    return Model._train(
        _np.asarray(X, dtype=float),
        _np.asarray(y, dtype=_np.int32),
        kind,
        _json.dumps(params or {}),
        seed,
        list(feature_names or []),
    )


def cross_validate(X, y, kind="forest", params=None, k=5, seed=0):
    return _cross_validate(
        _np.asarray(X, dtype=float), _np.asarray(y, dtype=_np.int32), kind, _json.dumps(params or {}), k, seed
    )


__all__ = [
    "ConfigError",
    "DataError",
    "Model",
    "TrainingError",
    "average_precision",
    "balanced_accuracy",
    "binary_labels",
    "channel_names",
    "cross_validate",
    "extract_features",
    "feature_names",
    "generate_pack",
    "read_feature_csv",
    "read_pack",
    "roc_auc",
    "run_cli",
    "stratified_kfold",
    "train",
]
