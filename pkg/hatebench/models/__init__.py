from __future__ import annotations

from hatebench.errors import RegistryError
from hatebench.models._base import (
    FAMILY_GRANULARITY,
    N_CLASSES,
    EpochStats,
    Model,
    ModelFamily,
    ModelSpec,
    Prediction,
    TrainConfig,
    TrainHistory,
)
from hatebench.models.checkpoint import load_weights, read_metadata, save_checkpoint
from hatebench.models.cnn_gru import CnnGru, CnnGruFamily, build_cnn_gru
from hatebench.models.contextual import (
    ContextualClassifier,
    ContextualFamily,
    finetune_contextual,
)
from hatebench.models.linear import LinearHead, LinearHeadFamily, build_linear_head
from hatebench.models.training import class_weight_tensor, predict, train

__all__ = [
    "FAMILIES",
    "FAMILY_GRANULARITY",
    "N_CLASSES",
    "CnnGru",
    "CnnGruFamily",
    "ContextualClassifier",
    "ContextualFamily",
    "EpochStats",
    "LinearHead",
    "LinearHeadFamily",
    "Model",
    "ModelFamily",
    "ModelSpec",
    "Prediction",
    "TrainConfig",
    "TrainHistory",
    "build_cnn_gru",
    "build_linear_head",
    "class_weight_tensor",
    "finetune_contextual",
    "get_family",
    "load_weights",
    "predict",
    "read_metadata",
    "save_checkpoint",
    "train",
]

FAMILIES: dict[str, ModelFamily] = {
    "linear_head": LinearHeadFamily(),
    "cnn_gru": CnnGruFamily(),
    "contextual_finetune": ContextualFamily(),
}


def get_family(name: str) -> ModelFamily:
    """Return the model family registered as *name*.

    Raises:
        RegistryError: If no family has that name.
    """
    family = FAMILIES.get(name)
    if family is None:
        raise RegistryError("model family", name, list(FAMILIES))
    return family
