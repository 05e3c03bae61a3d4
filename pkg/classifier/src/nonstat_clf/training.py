"""Training loop: Adam, binary cross-entropy, fixed-seed determinism."""

from __future__ import annotations

from dataclasses import dataclass, field

import torch
import torch.nn as nn

from .data import LabeledSet
from .model import StationarityNet

DEFAULT_EPOCHS = 20
DEFAULT_LR = 1e-4


@dataclass
class TrainState:
    model: StationarityNet
    loss_history: list[float] = field(default_factory=list)
    epoch: int = 0

    @property
    def final_loss(self) -> float:
        return self.loss_history[-1] if self.loss_history else float("nan")


def train(
    model: StationarityNet,
    data: LabeledSet,
    epochs: int = DEFAULT_EPOCHS,
    lr: float = DEFAULT_LR,
    batch_size: int = 16,
    seed: int = 0,
    log_every: int = 0,
) -> TrainState:
    """BCE-train in place; loss history records the per-epoch mean."""
    if len(data) == 0:
        raise ValueError("empty training set")
    torch.manual_seed(seed)
    optimizer = torch.optim.Adam(model.parameters(), lr=lr)
    loss_fn = nn.BCEWithLogitsLoss()
    shuffler = torch.Generator().manual_seed(seed)

    state = TrainState(model=model)
    model.train()
    n = len(data)
    for epoch in range(epochs):
        order = torch.randperm(n, generator=shuffler)
        total = 0.0
        for start in range(0, n, batch_size):
            idx = order[start : start + batch_size]
            logits = model.forward_logits(data.features[idx])
            loss = loss_fn(logits, data.labels[idx])
            optimizer.zero_grad()
            loss.backward()
            optimizer.step()
            total += float(loss.item()) * idx.shape[0]
        state.loss_history.append(total / n)
        state.epoch = epoch + 1
        if log_every and (epoch + 1) % log_every == 0:
            print(f"epoch {epoch + 1}/{epochs}  loss {state.loss_history[-1]:.4f}")
        if not torch.isfinite(torch.tensor(state.loss_history[-1])):
            raise RuntimeError(f"training diverged at epoch {epoch + 1}")
    model.eval()
    return state


@torch.inference_mode()
def predict(model: StationarityNet, data: LabeledSet, batch_size: int = 64) -> torch.Tensor:
    model.eval()
    scores = []
    for start in range(0, len(data), batch_size):
        scores.append(model(data.features[start : start + batch_size]))
    return torch.cat(scores)


def accuracy(scores: torch.Tensor, labels: torch.Tensor, threshold: float = 0.5) -> float:
    preds = (scores >= threshold).float()
    return float((preds == labels).float().mean().item())
