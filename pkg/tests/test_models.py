from __future__ import annotations

import json
from dataclasses import replace
from typing import TYPE_CHECKING

import numpy as np
import pytest
import torch

from hatebench.embeddings import MockSentenceBackend, MockTokenBackend, RawTokensBackend
from hatebench.errors import (
    DivergedTrainingError,
    PreconditionError,
    RegistryError,
    ShapeError,
    ValidationError,
)
from hatebench.evaluation import weighted_f1
from hatebench.fixtures import toy_vocabulary
from hatebench.models import (
    FAMILIES,
    CnnGru,
    LinearHead,
    ModelSpec,
    Prediction,
    TrainConfig,
    build_cnn_gru,
    build_linear_head,
    class_weight_tensor,
    finetune_contextual,
    get_family,
    load_weights,
    predict,
    read_metadata,
    save_checkpoint,
    train,
)
from hatebench.record import Record

if TYPE_CHECKING:
    from pathlib import Path


def _separable_records(n: int = 64, seed: int = 0) -> list[Record]:
    """Posts built from two disjoint keyword vocabularies."""
    vocab = toy_vocabulary("xa")
    rng = np.random.default_rng(seed)
    records = []
    for i in range(n):
        label = i % 2
        pool = vocab.hate if label else vocab.neutral
        words = rng.choice(pool, size=3, replace=False)
        records.append(
            Record(
                text=" ".join(str(w) for w in words),
                label=label,
                language="xa",
                source_id="toy",
                split="train",
                uid=f"toy:{i}",
            )
        )
    return records


def _perceptron_separates(x: np.ndarray, y: np.ndarray, epochs: int = 1000) -> bool:
    """Return True if a plain perceptron reaches zero training errors."""
    signs = np.where(y == 1, 1.0, -1.0)
    w = np.zeros(x.shape[1])
    b = 0.0
    for _ in range(epochs):
        errors = 0
        for xi, si in zip(x, signs, strict=True):
            if si * (xi @ w + b) <= 0:
                w += si * xi
                b += si
                errors += 1
        if errors == 0:
            return True
    return False


# ---------------------------------------------------------------------------
# Configuration types
# ---------------------------------------------------------------------------


class TestTrainConfig:
    """Verify training settings."""

    def test_family_defaults(self) -> None:
        """Each family has its default learning rate and length."""
        assert TrainConfig.for_family("linear_head").learning_rate == 1e-3
        assert TrainConfig.for_family("cnn_gru").max_sequence_length == 64
        assert TrainConfig.for_family("contextual_finetune").epochs == 5

    def test_overrides(self) -> None:
        """Overrides replace defaults."""
        config = TrainConfig.for_family("cnn_gru", epochs=2, class_weights=True)
        assert config.epochs == 2
        assert config.class_weights

    def test_unknown_override(self) -> None:
        """Unknown settings are rejected."""
        with pytest.raises(ValidationError, match="momentum"):
            TrainConfig.for_family("linear_head", momentum=0.9)

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"epochs": 0},
            {"batch_size": 0},
            {"learning_rate": 0.0},
            {"optimizer": "sgd"},
        ],
    )
    def test_invalid(self, kwargs: dict[str, object]) -> None:
        """Out-of-range settings raise ValidationError."""
        with pytest.raises(ValidationError):
            TrainConfig.for_family("linear_head", **kwargs)


class TestModelSpec:
    """Verify architecture descriptions."""

    def test_granularity_must_match(self) -> None:
        """A family only consumes its own granularity."""
        with pytest.raises(ValidationError, match="consumes sentence"):
            ModelSpec(family="linear_head", input_granularity="token")

    def test_unknown_family(self) -> None:
        """Unknown families are rejected."""
        with pytest.raises(ValidationError):
            ModelSpec(family="svm", input_granularity="sentence")


class TestPrediction:
    """Verify prediction invariants."""

    def test_tie_goes_to_zero(self) -> None:
        """Equal probabilities predict class 0."""
        assert Prediction(0, (0.5, 0.5)).label == 0
        with pytest.raises(ValueError, match="argmax"):
            Prediction(1, (0.5, 0.5))

    def test_not_a_distribution(self) -> None:
        """Probabilities must sum to 1."""
        with pytest.raises(ValueError, match="distribution"):
            Prediction(1, (0.2, 0.9))


class TestRegistry:
    """Verify the family registry."""

    def test_families(self) -> None:
        """Three families are registered."""
        assert set(FAMILIES) == {"linear_head", "cnn_gru", "contextual_finetune"}
        assert get_family("cnn_gru").granularity == "token"

    def test_unknown(self) -> None:
        """Unknown families raise RegistryError."""
        with pytest.raises(RegistryError, match="model family"):
            get_family("svm")


# ---------------------------------------------------------------------------
# Linear head
# ---------------------------------------------------------------------------


class TestLinearHead:
    """Verify the logistic regression head."""

    def test_parameter_count(self) -> None:
        """A 1024-d head has 1024 * 2 + 2 parameters."""
        model = build_linear_head(1024)
        assert sum(p.numel() for p in model.module.parameters()) == 2050

    def test_zero_init_is_uniform(self) -> None:
        """A zero-initialized head predicts [0.5, 0.5] and class 0."""
        model = build_linear_head(1024, zero_init=True)
        model = replace(model, train_config=TrainConfig.for_family("linear_head"))
        (prediction,) = predict(model, _separable_records(1), MockSentenceBackend())
        assert prediction.probabilities == (0.5, 0.5)
        assert prediction.label == 0

    def test_wrong_width(self) -> None:
        """Input of the wrong width raises ShapeError."""
        with pytest.raises(ShapeError):
            LinearHead(1024)(torch.zeros(2, 300))

    def test_gradcheck(self) -> None:
        """Analytic gradients match finite differences."""
        torch.manual_seed(0)
        head = LinearHead(8).double()
        x = torch.randn(4, 8, dtype=torch.float64, requires_grad=True)
        assert torch.autograd.gradcheck(head, (x,))

    def test_toy_task_is_learned(self) -> None:
        """A separable toy set reaches training weighted F1 >= 0.95."""
        backend = MockSentenceBackend(dim=1024)
        records = _separable_records(64)
        vectors = [backend.embed_sentence(r.text) for r in records]
        x = np.stack(vectors).astype(np.float64)
        y = np.array([r.label for r in records])
        assert _perceptron_separates(x, y)

        config = TrainConfig.for_family("linear_head", epochs=200, seed=3)
        model = get_family("linear_head").build(backend, config)
        model, history = train(model, records, backend, config)
        predictions = predict(model, records, backend)
        score = weighted_f1(y.tolist(), [p.label for p in predictions])
        assert score.weighted_f1 >= 0.95
        assert history.losses[-1] < history.losses[0]


# ---------------------------------------------------------------------------
# CNN-GRU
# ---------------------------------------------------------------------------


class TestCnnGru:
    """Verify the convolutional-recurrent classifier."""

    @pytest.mark.parametrize("length", [1, 2, 64, 512])
    def test_sequence_lengths(self, length: int) -> None:
        """Any length from 1 upward gives (batch, 2) logits."""
        torch.manual_seed(0)
        net = CnnGru(embedding_dim=16, n_filters=4, hidden_size=8)
        assert net(torch.randn(3, length, 16)).shape == (3, 2)

    def test_default_architecture(self) -> None:
        """Three filter widths of 300 filters feed a 64-unit GRU."""
        net = build_cnn_gru().module
        assert isinstance(net, CnnGru)
        assert [c.kernel_size[0] for c in net.convs] == [2, 3, 4]
        assert all(c.out_channels == 300 for c in net.convs)
        assert net.gru.hidden_size == 64
        assert net.gru.input_size == 900

    def test_gradients_reach_every_parameter(self) -> None:
        """One backward pass gives a non-zero gradient to every parameter."""
        torch.manual_seed(0)
        net = CnnGru(embedding_dim=16, n_filters=4, hidden_size=8, dropout=0.0)
        loss = torch.nn.functional.cross_entropy(
            net(torch.randn(4, 10, 16)), torch.tensor([0, 1, 0, 1])
        )
        loss.backward()
        for name, param in net.named_parameters():
            assert param.grad is not None, name
            assert param.grad.abs().sum() > 0, name

    def test_wrong_rank(self) -> None:
        """A 2-D input raises ShapeError."""
        with pytest.raises(ShapeError):
            CnnGru(embedding_dim=16)(torch.zeros(2, 16))

    def test_encode_pads_and_truncates(self) -> None:
        """Records are pre-padded or truncated to max_sequence_length."""
        backend = MockTokenBackend({"a", "b"}, dim=4)
        config = TrainConfig.for_family("cnn_gru", max_sequence_length=5)
        short = Record("a b", 0, "xa", "toy", "train")
        long = Record(" ".join(["a"] * 9), 1, "xa", "toy", "train")
        (batch,) = get_family("cnn_gru").encode([short, long], backend, config)
        assert batch.shape == (2, 5, 4)
        assert not batch[0, :3].any()
        assert batch[0, 3:].abs().sum() > 0
        assert (batch[1].abs().sum(dim=1) > 0).all()

    def test_trains_on_token_backend(self) -> None:
        """Two epochs run end to end and give finite losses."""
        records = _separable_records(16)
        backend = MockTokenBackend(toy_vocabulary("xa").content, dim=8)
        config = TrainConfig.for_family("cnn_gru", epochs=2, max_sequence_length=6)
        model = get_family("cnn_gru").build(backend, config)
        model, history = train(model, records, backend, config)
        assert len(history.epochs) == 2
        assert all(np.isfinite(history.losses))
        assert len(predict(model, records, backend)) == 16


# ---------------------------------------------------------------------------
# Training engine
# ---------------------------------------------------------------------------


class TestTrain:
    """Verify the shared training loop."""

    backend = MockSentenceBackend(dim=32)

    def _fit(self, seed: int) -> torch.Tensor:
        config = TrainConfig.for_family("linear_head", epochs=3, seed=seed)
        model = get_family("linear_head").build(self.backend, config)
        model, _ = train(model, _separable_records(32), self.backend, config)
        return torch.cat([p.detach().flatten() for p in model.module.parameters()])

    def test_same_seed_same_parameters(self) -> None:
        """Equal seeds give bit-identical parameters."""
        assert torch.equal(self._fit(5), self._fit(5))

    def test_different_seed(self) -> None:
        """Different seeds give different parameters."""
        assert not torch.equal(self._fit(5), self._fit(6))

    def test_empty_training_set(self) -> None:
        """Training needs at least one record."""
        config = TrainConfig.for_family("linear_head")
        model = get_family("linear_head").build(self.backend, config)
        with pytest.raises(PreconditionError, match="empty"):
            train(model, [], self.backend, config)

    def test_records_must_be_train_split(self) -> None:
        """Test records cannot be trained on."""
        config = TrainConfig.for_family("linear_head")
        model = get_family("linear_head").build(self.backend, config)
        records = [replace(r, split="test") for r in _separable_records(4)]
        with pytest.raises(PreconditionError, match="not 'train'"):
            train(model, records, self.backend, config)

    def test_divergence(self) -> None:
        """A non-finite loss aborts training."""
        config = TrainConfig.for_family("linear_head")
        model = get_family("linear_head").build(self.backend, config)
        with torch.no_grad():
            model.module.linear.weight.fill_(float("nan"))
        with pytest.raises(DivergedTrainingError) as exc_info:
            train(model, _separable_records(4), self.backend, config)
        assert exc_info.value.epoch == 1
        assert exc_info.value.stage == "train"

    def test_wrong_backend(self) -> None:
        """A sentence head cannot be built on a token backend."""
        config = TrainConfig.for_family("linear_head")
        with pytest.raises(PreconditionError, match="sentence backend"):
            get_family("linear_head").build(MockTokenBackend({"a"}), config)

    def test_class_weights(self) -> None:
        """Inverse-frequency weights are N / (2 n_c)."""
        weights = class_weight_tensor([1, 0, 0, 0])
        assert weights.tolist() == pytest.approx([4 / 6, 2.0])

    def test_predict_untrained(self) -> None:
        """An untrained model cannot predict."""
        model = build_linear_head(32)
        with pytest.raises(PreconditionError, match="not been trained"):
            predict(model, _separable_records(2), self.backend)

    def test_duplicate_records_predict_identically(self) -> None:
        """Inference is a pure function of the record."""
        config = TrainConfig.for_family("linear_head", epochs=1)
        model = get_family("linear_head").build(self.backend, config)
        model, _ = train(model, _separable_records(8), self.backend, config)
        record = _separable_records(1)[0]
        first, second = predict(model, [record, record], self.backend)
        assert first == second

    def test_predictions_sum_to_one(self) -> None:
        """Every prediction is a probability distribution."""
        config = TrainConfig.for_family("linear_head", epochs=1)
        model = get_family("linear_head").build(self.backend, config)
        model, _ = train(model, _separable_records(8), self.backend, config)
        for p in predict(model, _separable_records(8, seed=1), self.backend):
            assert sum(p.probabilities) == pytest.approx(1.0)


# ---------------------------------------------------------------------------
# Checkpoints
# ---------------------------------------------------------------------------


class TestCheckpoint:
    """Verify saving and restoring trained models."""

    def test_round_trip(self, tmp_path: Path) -> None:
        """Reloaded weights give the same predictions."""
        backend = MockSentenceBackend(dim=16)
        config = TrainConfig.for_family("linear_head", epochs=2)
        model = get_family("linear_head").build(backend, config)
        model, history = train(model, _separable_records(8), backend, config)
        save_checkpoint(model, tmp_path, history, backend=backend.describe())

        built = get_family("linear_head").build(backend, config.with_seed(99))
        fresh = replace(built, train_config=config)
        load_weights(fresh, tmp_path)
        records = _separable_records(8)
        assert predict(fresh, records, backend) == predict(model, records, backend)

        metadata = read_metadata(tmp_path)
        assert metadata["model_spec"]["family"] == "linear_head"
        assert metadata["train_config"]["epochs"] == 2
        assert len(metadata["history"]) == 2
        assert metadata["backend"]["dim"] == 16

    def test_untrained(self, tmp_path: Path) -> None:
        """Only trained models are checkpointed."""
        with pytest.raises(PreconditionError):
            save_checkpoint(build_linear_head(8), tmp_path)


# ---------------------------------------------------------------------------
# Contextual fine-tuning
# ---------------------------------------------------------------------------


@pytest.fixture
def tiny_encoder(tmp_path: Path) -> Path:
    """Save a two-layer BERT with a word-level vocabulary."""
    transformers = pytest.importorskip("transformers")
    special = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"]
    words = [*special, *toy_vocabulary("xa").content]
    directory = tmp_path / "encoder"
    directory.mkdir()
    vocab = tmp_path / "vocab.txt"
    vocab.write_text("\n".join(words) + "\n", encoding="utf-8")
    tokenizer = transformers.BertTokenizer(str(vocab))
    config = transformers.BertConfig(
        vocab_size=len(words),
        hidden_size=16,
        num_hidden_layers=2,
        num_attention_heads=2,
        intermediate_size=32,
        max_position_embeddings=64,
    )
    torch.manual_seed(0)
    transformers.BertModel(config).save_pretrained(directory)
    tokenizer.save_pretrained(directory)
    return directory


class TestContextual:
    """Verify fine-tuning a pretrained encoder."""

    def test_finetune(
        self,
        tiny_encoder: Path,
        tmp_path: Path,
        caplog: pytest.LogCaptureFixture,
    ) -> None:
        """One epoch runs, and the checkpoint records the encoder depth."""
        backend = RawTokensBackend("tiny", str(tiny_encoder))
        config = TrainConfig.for_family(
            "contextual_finetune", epochs=1, max_sequence_length=16
        )
        records = _separable_records(8)
        model, history = finetune_contextual(records, config, backend)
        assert len(history.epochs) == 1
        assert model.spec.params["encoder_layers"] == 2
        assert len(predict(model, records, backend)) == 8

        save_checkpoint(model, tmp_path / "ckpt", history)
        metadata = json.loads((tmp_path / "ckpt" / "metadata.json").read_text())
        assert metadata["encoder_layers"] == 2
        assert "encoder_layers_note" in metadata
        assert "Encoder has 2 layers" in caplog.text

    def test_loss_decreases(self, tiny_encoder: Path) -> None:
        """Training loss falls over the first three epochs on the toy set."""
        backend = RawTokensBackend("tiny", str(tiny_encoder))
        config = TrainConfig.for_family(
            "contextual_finetune", epochs=3, learning_rate=1e-3, max_sequence_length=16
        )
        _, history = finetune_contextual(_separable_records(64), config, backend)
        losses = history.losses
        assert losses[-1] < losses[0]
        assert sum(b > a for a, b in zip(losses, losses[1:])) <= 1

    def test_truncated_to_512(self, tiny_encoder: Path) -> None:
        """Sequences longer than 512 tokens are cut to 512."""
        backend = RawTokensBackend("tiny", str(tiny_encoder))
        text = " ".join(toy_vocabulary("xa").content * 20)
        batch = backend.encode([text], max_length=2048)
        assert batch["input_ids"].shape == (1, 512)

    def test_needs_raw_tokens_backend(self) -> None:
        """A sentence backend cannot feed the encoder."""
        config = TrainConfig.for_family("contextual_finetune")
        with pytest.raises(PreconditionError):
            get_family("contextual_finetune").build(MockSentenceBackend(), config)
