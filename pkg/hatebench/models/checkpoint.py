from __future__ import annotations

import json
import logging
from typing import TYPE_CHECKING, Any

import torch

from hatebench import __version__
from hatebench.errors import PreconditionError

if TYPE_CHECKING:
    from pathlib import Path

    from hatebench.models._base import Model, TrainHistory

logger = logging.getLogger(__name__)

WEIGHTS_NAME = "model.pt"
METADATA_NAME = "metadata.json"
# Encoder depth the reference experiment settings list for the contextual family.
REPORTED_ENCODER_LAYERS = 16


def save_checkpoint(
    model: Model,
    directory: Path,
    history: TrainHistory | None = None,
    *,
    backend: dict[str, object] | None = None,
) -> Path:
    """Write the weights and a metadata file for *model* into *directory*.

    Returns:
        Path to the metadata file.

    Raises:
        PreconditionError: If *model* has not been trained.
    """
    if model.train_config is None:
        msg = "only trained models can be checkpointed"
        raise PreconditionError(msg)
    directory.mkdir(parents=True, exist_ok=True)
    torch.save(model.module.state_dict(), directory / WEIGHTS_NAME)

    metadata: dict[str, Any] = {
        "model_spec": model.spec.to_json(),
        "train_config": model.train_config.to_json(),
        "code_version": __version__,
    }
    if backend is not None:
        metadata["backend"] = backend
    if history is not None:
        metadata["history"] = history.to_json()
    layers = model.spec.params.get("encoder_layers")
    if layers is not None:
        metadata["encoder_layers"] = layers
        if layers != REPORTED_ENCODER_LAYERS:
            logger.warning(
                "Encoder has %d layers; the reference setup lists %d. "
                "Using the checkpoint depth.",
                layers,
                REPORTED_ENCODER_LAYERS,
            )
            metadata["encoder_layers_note"] = (
                f"checkpoint depth {layers} kept; reference setup lists "
                f"{REPORTED_ENCODER_LAYERS}"
            )
    path = directory / METADATA_NAME
    path.write_text(
        json.dumps(metadata, indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )
    return path


def load_weights(model: Model, directory: Path) -> Model:
    """Load the weights saved in *directory* into *model*'s network."""
    state = torch.load(directory / WEIGHTS_NAME, weights_only=True)
    model.module.load_state_dict(state)
    model.module.eval()
    return model


def read_metadata(directory: Path) -> dict[str, Any]:
    text = (directory / METADATA_NAME).read_text(encoding="utf-8")
    data: dict[str, Any] = json.loads(text)
    return data
