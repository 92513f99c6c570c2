"""The training engine shared by every model family."""

from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import replace
from typing import TYPE_CHECKING

import torch
from torch import nn
from torch.utils.data import DataLoader, TensorDataset

from hatebench.errors import DivergedTrainingError, PreconditionError
from hatebench.evaluation.metrics import weighted_f1
from hatebench.models._base import N_CLASSES, EpochStats, Prediction, TrainHistory

if TYPE_CHECKING:
    from collections.abc import Sequence

    from hatebench.embeddings import EmbeddingBackend, EmbeddingCache
    from hatebench.models._base import Model, TrainConfig
    from hatebench.record import Record

logger = logging.getLogger(__name__)


def _check_train_records(records: Sequence[Record]) -> None:
    if not records:
        msg = "cannot train on an empty training set"
        raise PreconditionError(msg)
    for record in records:
        if record.split != "train":
            msg = (
                f"record {record.uid or record.text[:20]!r} has split "
                f"{record.split!r}, not 'train'"
            )
            raise PreconditionError(msg)
        if record.label not in (0, 1):
            msg = f"record {record.uid!r} has label {record.label!r}"
            raise PreconditionError(msg)


def class_weight_tensor(labels: Sequence[int]) -> torch.Tensor:
    """Inverse-frequency weights ``N / (2 * n_c)``; absent classes weigh 1."""
    counts = Counter(labels)
    total = len(labels)
    return torch.tensor(
        [
            total / (N_CLASSES * counts[c]) if counts[c] else 1.0
            for c in range(N_CLASSES)
        ],
        dtype=torch.float32,
    )


def train(
    model: Model,
    train_records: Sequence[Record],
    backend: EmbeddingBackend,
    config: TrainConfig,
    cache: EmbeddingCache | None = None,
) -> tuple[Model, TrainHistory]:
    """Fit *model* on *train_records* with AdamW and cross-entropy.

    Data order, dropout masks and (through the builders) initialization are
    all driven by ``config.seed``, so equal inputs give equal parameters.

    Returns:
        The trained model and its per-epoch history.

    Raises:
        PreconditionError: If the set is empty, a record is not in the
            train split, or a label is not 0/1.
        DivergedTrainingError: If a batch loss is NaN or infinite.
    """
    _check_train_records(train_records)
    labels = [r.label for r in train_records]
    inputs = model.family.encode(train_records, backend, config, cache)
    dataset = TensorDataset(*inputs, torch.tensor(labels, dtype=torch.long))

    torch.manual_seed(config.seed)
    generator = torch.Generator().manual_seed(config.seed)
    loader = DataLoader(
        dataset,
        batch_size=config.batch_size,
        shuffle=True,
        generator=generator,
    )

    module = model.module
    optimizer = torch.optim.AdamW(
        module.parameters(), lr=config.learning_rate, weight_decay=config.weight_decay
    )
    weight = class_weight_tensor(labels) if config.class_weights else None
    criterion = nn.CrossEntropyLoss(weight=weight)

    history = TrainHistory()
    for epoch in range(1, config.epochs + 1):
        module.train()
        total_loss = 0.0
        seen_true: list[int] = []
        seen_pred: list[int] = []
        for *batch_inputs, batch_labels in loader:
            optimizer.zero_grad()
            logits = module(*batch_inputs)
            loss = criterion(logits, batch_labels)
            value = float(loss.item())
            if not math.isfinite(value):
                raise DivergedTrainingError(epoch, value)
            loss.backward()
            optimizer.step()
            total_loss += value * len(batch_labels)
            seen_true.extend(batch_labels.tolist())
            seen_pred.extend(logits.argmax(dim=1).tolist())
        stats = EpochStats(
            epoch=epoch,
            mean_loss=total_loss / len(dataset),
            train_weighted_f1=weighted_f1(seen_true, seen_pred).weighted_f1,
        )
        history.epochs.append(stats)
        logger.debug(
            "%s epoch %d: loss=%.6f train_f1=%.4f",
            model.spec.family,
            epoch,
            stats.mean_loss,
            stats.train_weighted_f1,
        )

    module.eval()
    return replace(model, train_config=config), history


@torch.no_grad()
def predict(
    model: Model,
    records: Sequence[Record],
    backend: EmbeddingBackend,
    cache: EmbeddingCache | None = None,
) -> list[Prediction]:
    """Return one prediction per record, in order.

    Probabilities are a float64 softmax of the logits; the label is the
    argmax with ties resolved to class 0.

    Raises:
        PreconditionError: If *records* is empty or *model* is untrained.
    """
    if not records:
        msg = "cannot predict on an empty record list"
        raise PreconditionError(msg)
    if model.train_config is None:
        msg = f"{model.spec.family} model has not been trained"
        raise PreconditionError(msg)
    config = model.train_config
    module = model.module
    module.eval()

    predictions: list[Prediction] = []
    for start in range(0, len(records), config.batch_size):
        chunk = records[start : start + config.batch_size]
        logits = module(*model.family.encode(chunk, backend, config, cache))
        probabilities = torch.softmax(logits.to(torch.float64), dim=1)
        for p0, p1 in probabilities.tolist():
            label = 1 if p1 > p0 else 0
            predictions.append(Prediction(label=label, probabilities=(p0, p1)))
    return predictions
