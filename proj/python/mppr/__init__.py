# Copyright 2026 The mppr Authors
# SPDX-License-Identifier: Apache-2.0
"""Motif-based personalized PageRank propagation."""

import json

from ._mppr import (
    ConfigError,
    DomainError,
    Error,
    auc,
    average_precision,
    config_hash,
    entrywise_power,
    motif_adjacency,
    ppr_matrix,
)
from ._mppr import train as _train

__all__ = [
    "ConfigError",
    "DomainError",
    "Error",
    "auc",
    "average_precision",
    "config_hash",
    "entrywise_power",
    "motif_adjacency",
    "ppr_matrix",
    "train",
]


def train(**settings):
    """Run an experiment; keyword names follow the config file keys."""
    return json.loads(_train({k: str(v).lower() if isinstance(v, bool) else str(v) for k, v in settings.items()}))
