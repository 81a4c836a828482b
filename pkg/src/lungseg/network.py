"""Width-scalable Inception-encoder U-Net: build, forward, gradients.

The decoder mirrors the classic U-Net expanding path: each stage upsamples by
a 2x2 transposed convolution, concatenates the resolution-matched encoder
tap, and refines with two 3x3 conv+BN+ReLU units. The fifth stage, back at
input resolution, taps the 3-channel network input. A 1x1 convolution plus
sigmoid produces per-pixel probabilities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import torch
from torch import nn

from .errors import InvalidConfigError, ShapeMismatchError
from .inception import ConvUnit, InceptionEncoder


@dataclass(frozen=True)
class NetworkConfig:
    input_size: tuple[int, int] = (512, 512)  # (H, W), multiples of 32
    width_multiplier: float = 1.0             # in (0, 1]
    decoder_channels: tuple[int, ...] = (512, 256, 128, 64, 32)
    freeze_encoder: bool = True
    seed: int = 0


def _validate(cfg: NetworkConfig) -> None:
    h, w = cfg.input_size
    if h <= 0 or w <= 0 or h % 32 or w % 32:
        raise InvalidConfigError(f"input size {cfg.input_size} must be positive multiples of 32")
    if not 0 < cfg.width_multiplier <= 1:
        raise InvalidConfigError(f"width multiplier {cfg.width_multiplier} outside (0, 1]")
    if len(cfg.decoder_channels) != 5 or any(c < 1 for c in cfg.decoder_channels):
        raise InvalidConfigError(f"decoder_channels must be 5 positive counts, got {cfg.decoder_channels}")
    if cfg.seed < 0:
        raise InvalidConfigError("seed must be non-negative")


class DecoderStage(nn.Module):
    def __init__(self, cin: int, tap_ch: int, cout: int):
        super().__init__()
        self.up = nn.ConvTranspose2d(cin, cout, 2, stride=2)
        self.conv1 = ConvUnit(cout + tap_ch, cout, 3)
        self.conv2 = ConvUnit(cout, cout, 3)

    def forward(self, x, tap):
        x = torch.cat([self.up(x), tap], dim=1)
        return self.conv2(self.conv1(x))


class SegmentationNet(nn.Module):
    """Maps (B, 3, H, W) pixels in [0, 1] to (B, 1, H, W) probabilities."""

    def __init__(self, cfg: NetworkConfig):
        super().__init__()
        _validate(cfg)
        self.config = cfg
        w = cfg.width_multiplier
        scale = lambda c: max(1, int(c * w + 0.5))  # round half up, floor 1
        self.encoder = InceptionEncoder(scale)
        t1, t2, t3, t4, bott = self.encoder.tap_channels
        d = [scale(c) for c in cfg.decoder_channels]
        self.stage1 = DecoderStage(bott, t4, d[0])
        self.stage2 = DecoderStage(d[0], t3, d[1])
        self.stage3 = DecoderStage(d[1], t2, d[2])
        self.stage4 = DecoderStage(d[2], t1, d[3])
        self.stage5 = DecoderStage(d[3], 3, d[4])
        self.head = nn.Conv2d(d[4], 1, 1)

    def forward(self, x):
        h, w = self.config.input_size
        if x.ndim != 4 or x.shape[1] != 3 or x.shape[2] != h or x.shape[3] != w:
            raise ShapeMismatchError(
                f"expected batch of shape (B, 3, {h}, {w}), got {tuple(x.shape)}"
            )
        t1, t2, t3, t4, bott = self.encoder(x)
        y = self.stage1(bott, t4)
        y = self.stage2(y, t3)
        y = self.stage3(y, t2)
        y = self.stage4(y, t1)
        y = self.stage5(y, x)
        return torch.sigmoid(self.head(y))


def _init_weights(net: SegmentationNet, seed: int) -> None:
    """He-uniform kernels, zero biases, unit/zero normalization, all drawn
    from one seeded generator in registration order."""
    rng = np.random.default_rng(seed)
    with torch.no_grad():
        for name, p in net.named_parameters():
            if p.ndim == 4:
                fan_in = p.shape[1] * p.shape[2] * p.shape[3]
                bound = math.sqrt(6.0 / fan_in)
                vals = rng.uniform(-bound, bound, size=tuple(p.shape))
                p.copy_(torch.from_numpy(vals.astype(np.float32)))
            elif name.endswith("bn.weight"):
                p.fill_(1.0)
            else:
                p.fill_(0.0)


def build_network(cfg: NetworkConfig) -> SegmentationNet:
    """Construct and deterministically initialize the network; with
    freeze_encoder, every encoder parameter is marked non-trainable."""
    net = SegmentationNet(cfg)
    _init_weights(net, cfg.seed)
    if cfg.freeze_encoder:
        for p in net.encoder.parameters():
            p.requires_grad_(False)
    return net


def forward(net: SegmentationNet, batch) -> torch.Tensor:
    """Inference pass without gradient tracking."""
    x = torch.as_tensor(np.ascontiguousarray(batch), dtype=next(net.parameters()).dtype)
    with torch.no_grad():
        return net(x)


def gradients(net: SegmentationNet, batch, targets) -> dict[str, torch.Tensor]:
    """Exact gradients of the mean BCE loss for every trainable tensor.

    Frozen tensors do not appear in the result. The network itself is left
    untouched (gradients are returned, not accumulated on the parameters).
    """
    from .trainer import bce_loss

    dtype = next(net.parameters()).dtype
    x = torch.as_tensor(np.ascontiguousarray(batch), dtype=dtype)
    y = torch.as_tensor(np.ascontiguousarray(targets), dtype=dtype)
    if y.ndim == x.ndim - 1:
        y = y.unsqueeze(1)
    out = net(x)
    if y.shape != out.shape:
        raise ShapeMismatchError(f"targets {tuple(y.shape)} vs output {tuple(out.shape)}")
    loss = bce_loss(out, y)
    trainable = [(n, p) for n, p in net.named_parameters() if p.requires_grad]
    grads = torch.autograd.grad(loss, [p for _, p in trainable])
    return {n: g.detach().clone() for (n, _), g in zip(trainable, grads)}


def count_parameters(net: nn.Module) -> tuple[int, int]:
    """(total, trainable) learnable-parameter counts; statistics buffers are
    not parameters and are excluded."""
    total = sum(p.numel() for p in net.parameters())
    trainable = sum(p.numel() for p in net.parameters() if p.requires_grad)
    return total, trainable


def named_tensors(net: nn.Module) -> dict[str, torch.Tensor]:
    """All weight tensors (parameters and normalization statistics) keyed by
    graph name, in deterministic order."""
    return {
        name: t for name, t in net.state_dict().items()
        if not name.endswith("num_batches_tracked")
    }
