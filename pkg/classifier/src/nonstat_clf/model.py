"""Transformer classifier over spectrogram frames.

Front block expands the 257 frequency bins by ``beta_fc``, applies ReLU, and
contracts back (the learned spectral embedding); frames are then projected to
model width, a classification token is prepended, learned positional
embeddings added, and a pre-norm self-attention stack feeds a sigmoid head on
the classification token.
"""

from __future__ import annotations

from dataclasses import dataclass

import torch
import torch.nn as nn

from .features import N_BINS, N_FRAMES

MLP_RATIO = 4


@dataclass(frozen=True)
class ClassifierConfig:
    depth: int
    heads: int
    dim: int
    beta_fc: int = 4
    use_spectral_encoder: bool = True  # switchable for the ablation variant
    n_bins: int = N_BINS
    n_frames: int = N_FRAMES

    def __post_init__(self):
        if self.depth < 1 or self.heads < 1 or self.dim < self.heads:
            raise ValueError(f"bad transformer geometry {self.depth}/{self.heads}/{self.dim}")
        if self.beta_fc < 1:
            raise ValueError("beta_fc must be a positive integer")


# The lightweight preset keeps the published 64-wide / 3-head geometry; head
# width is dim // heads (21), with the 63-wide concat re-projected to 64.
PRESETS = {
    "full": ClassifierConfig(depth=11, heads=3, dim=192),
    "lw": ClassifierConfig(depth=4, heads=3, dim=64),
}


class SpectralEncoder(nn.Module):
    """Frequency-axis expansion/contraction: 257 -> 257*beta -> ReLU -> 257."""

    def __init__(self, n_bins: int, beta_fc: int):
        super().__init__()
        hidden = n_bins * beta_fc
        self.expand = nn.Linear(n_bins, hidden)
        self.act = nn.ReLU()
        self.contract = nn.Linear(hidden, n_bins)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return self.contract(self.act(self.expand(x)))


class Attention(nn.Module):
    def __init__(self, dim: int, heads: int):
        super().__init__()
        self.heads = heads
        self.head_dim = dim // heads
        inner = heads * self.head_dim
        self.qkv = nn.Linear(dim, 3 * inner)
        self.out = nn.Linear(inner, dim)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        b, t, _ = x.shape
        q, k, v = self.qkv(x).chunk(3, dim=-1)

        def split(z):
            return z.view(b, t, self.heads, self.head_dim).transpose(1, 2)

        q, k, v = split(q), split(k), split(v)
        attn = torch.softmax(q @ k.transpose(-2, -1) / self.head_dim**0.5, dim=-1)
        z = (attn @ v).transpose(1, 2).reshape(b, t, -1)
        return self.out(z)


class Block(nn.Module):
    def __init__(self, dim: int, heads: int):
        super().__init__()
        self.norm1 = nn.LayerNorm(dim)
        self.attn = Attention(dim, heads)
        self.norm2 = nn.LayerNorm(dim)
        self.mlp = nn.Sequential(
            nn.Linear(dim, MLP_RATIO * dim),
            nn.GELU(),
            nn.Linear(MLP_RATIO * dim, dim),
        )

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        x = x + self.attn(self.norm1(x))
        return x + self.mlp(self.norm2(x))


class StationarityNet(nn.Module):
    def __init__(self, cfg: ClassifierConfig):
        super().__init__()
        self.cfg = cfg
        self.encoder = SpectralEncoder(cfg.n_bins, cfg.beta_fc) if cfg.use_spectral_encoder else None
        self.proj = nn.Linear(cfg.n_bins, cfg.dim)
        self.cls_token = nn.Parameter(torch.zeros(1, 1, cfg.dim))
        self.pos_embed = nn.Parameter(torch.zeros(1, cfg.n_frames + 1, cfg.dim))
        self.blocks = nn.ModuleList(Block(cfg.dim, cfg.heads) for _ in range(cfg.depth))
        self.norm = nn.LayerNorm(cfg.dim)
        self.head = nn.Linear(cfg.dim, 1)
        nn.init.trunc_normal_(self.cls_token, std=0.02)
        nn.init.trunc_normal_(self.pos_embed, std=0.02)

    def tokens(self, spectro: torch.Tensor) -> torch.Tensor:
        """(B, 149, 257) features -> (B, 150, dim) token sequence (post-stack)."""
        if spectro.ndim != 3 or spectro.shape[1:] != (self.cfg.n_frames, self.cfg.n_bins):
            raise ValueError(
                f"expected (B, {self.cfg.n_frames}, {self.cfg.n_bins}), got {tuple(spectro.shape)}"
            )
        x = self.encoder(spectro) if self.encoder is not None else spectro
        x = self.proj(x)
        cls = self.cls_token.expand(x.shape[0], -1, -1)
        x = torch.cat([cls, x], dim=1) + self.pos_embed
        for block in self.blocks:
            x = block(x)
        return x

    def forward_logits(self, spectro: torch.Tensor) -> torch.Tensor:
        x = self.tokens(spectro)
        return self.head(self.norm(x[:, 0])).squeeze(-1)

    def forward(self, spectro: torch.Tensor) -> torch.Tensor:
        """Probabilities in (0, 1), one per clip, from the classification token."""
        return torch.sigmoid(self.forward_logits(spectro))

    def n_parameters(self) -> int:
        return sum(p.numel() for p in self.parameters())


def spectral_encoder_param_count(n_bins: int = N_BINS, beta_fc: int = 4) -> int:
    """Closed form for the encoder block: two affine maps through n_bins*beta."""
    hidden = n_bins * beta_fc
    return 2 * n_bins * hidden + hidden + n_bins


def build_model(preset: str, use_spectral_encoder: bool = True) -> StationarityNet:
    if preset not in PRESETS:
        raise ValueError(f"unknown preset {preset!r}; choose from {sorted(PRESETS)}")
    cfg = PRESETS[preset]
    if not use_spectral_encoder:
        cfg = ClassifierConfig(
            depth=cfg.depth, heads=cfg.heads, dim=cfg.dim, beta_fc=cfg.beta_fc,
            use_spectral_encoder=False,
        )
    return StationarityNet(cfg)
