"""Inception-style encoder with width-scalable channels.

Every convolution and pool pads so that stride-1 preserves spatial size and
stride-2 halves it exactly, which keeps the five taps aligned with the
decoder for any input whose sides are multiples of 32.

Batch normalization always runs on the stored running statistics, so a
forward pass is a pure function of the weights: batch elements stay
independent, and the statistics change only when weights are loaded.
"""

from __future__ import annotations

from typing import Callable

import torch
import torch.nn.functional as F
from torch import nn

Scale = Callable[[int], int]


class ConvUnit(nn.Module):
    """Convolution (no bias) + batch normalization + ReLU."""

    def __init__(self, cin: int, cout: int, kernel, stride: int = 1):
        super().__init__()
        if isinstance(kernel, int):
            kernel = (kernel, kernel)
        padding = (kernel[0] // 2, kernel[1] // 2)
        self.conv = nn.Conv2d(cin, cout, kernel, stride=stride, padding=padding, bias=False)
        self.bn = nn.BatchNorm2d(cout, eps=1e-3)

    def forward(self, x):
        x = self.conv(x)
        x = F.batch_norm(
            x, self.bn.running_mean, self.bn.running_var,
            self.bn.weight, self.bn.bias, training=False, eps=self.bn.eps,
        )
        return F.relu(x)


class InceptionA(nn.Module):
    """Parallel 1x1 / 5x5 / double-3x3 / pooled branches."""

    def __init__(self, cin: int, pool_ch: int, s: Scale):
        super().__init__()
        self.b0 = ConvUnit(cin, s(64), 1)
        self.b1a = ConvUnit(cin, s(48), 1)
        self.b1b = ConvUnit(s(48), s(64), 5)
        self.b2a = ConvUnit(cin, s(64), 1)
        self.b2b = ConvUnit(s(64), s(96), 3)
        self.b2c = ConvUnit(s(96), s(96), 3)
        self.b3 = ConvUnit(cin, pool_ch, 1)
        self.out_channels = s(64) + s(64) + s(96) + pool_ch

    def forward(self, x):
        pooled = F.avg_pool2d(x, 3, stride=1, padding=1)
        return torch.cat(
            [self.b0(x), self.b1b(self.b1a(x)), self.b2c(self.b2b(self.b2a(x))), self.b3(pooled)],
            dim=1,
        )


class ReductionA(nn.Module):
    """Grid reduction to half resolution via strided 3x3 branches + max pool."""

    def __init__(self, cin: int, s: Scale):
        super().__init__()
        self.b0 = ConvUnit(cin, s(384), 3, stride=2)
        self.b1a = ConvUnit(cin, s(64), 1)
        self.b1b = ConvUnit(s(64), s(96), 3)
        self.b1c = ConvUnit(s(96), s(96), 3, stride=2)
        self.out_channels = s(384) + s(96) + cin

    def forward(self, x):
        pooled = F.max_pool2d(x, 3, stride=2, padding=1)
        return torch.cat([self.b0(x), self.b1c(self.b1b(self.b1a(x))), pooled], dim=1)


class InceptionB(nn.Module):
    """Factorized 7x7 branches (1x7 followed by 7x1)."""

    def __init__(self, cin: int, mid: int, s: Scale):
        super().__init__()
        c = s(192)
        self.b0 = ConvUnit(cin, c, 1)
        self.b1a = ConvUnit(cin, mid, 1)
        self.b1b = ConvUnit(mid, mid, (1, 7))
        self.b1c = ConvUnit(mid, c, (7, 1))
        self.b2a = ConvUnit(cin, mid, 1)
        self.b2b = ConvUnit(mid, mid, (7, 1))
        self.b2c = ConvUnit(mid, mid, (1, 7))
        self.b2d = ConvUnit(mid, mid, (7, 1))
        self.b2e = ConvUnit(mid, c, (1, 7))
        self.b3 = ConvUnit(cin, c, 1)
        self.out_channels = 4 * c

    def forward(self, x):
        b1 = self.b1c(self.b1b(self.b1a(x)))
        b2 = self.b2e(self.b2d(self.b2c(self.b2b(self.b2a(x)))))
        pooled = F.avg_pool2d(x, 3, stride=1, padding=1)
        return torch.cat([self.b0(x), b1, b2, self.b3(pooled)], dim=1)


class ReductionB(nn.Module):
    def __init__(self, cin: int, s: Scale):
        super().__init__()
        self.b0a = ConvUnit(cin, s(192), 1)
        self.b0b = ConvUnit(s(192), s(320), 3, stride=2)
        self.b1a = ConvUnit(cin, s(192), 1)
        self.b1b = ConvUnit(s(192), s(192), (1, 7))
        self.b1c = ConvUnit(s(192), s(192), (7, 1))
        self.b1d = ConvUnit(s(192), s(192), 3, stride=2)
        self.out_channels = s(320) + s(192) + cin

    def forward(self, x):
        pooled = F.max_pool2d(x, 3, stride=2, padding=1)
        return torch.cat([self.b0b(self.b0a(x)), self.b1d(self.b1c(self.b1b(self.b1a(x)))), pooled], dim=1)


class InceptionC(nn.Module):
    """Expanded 3x3 branches split into parallel 1x3 and 3x1 convolutions."""

    def __init__(self, cin: int, s: Scale):
        super().__init__()
        self.b0 = ConvUnit(cin, s(320), 1)
        self.b1a = ConvUnit(cin, s(384), 1)
        self.b1b = ConvUnit(s(384), s(384), (1, 3))
        self.b1c = ConvUnit(s(384), s(384), (3, 1))
        self.b2a = ConvUnit(cin, s(448), 1)
        self.b2b = ConvUnit(s(448), s(384), 3)
        self.b2c = ConvUnit(s(384), s(384), (1, 3))
        self.b2d = ConvUnit(s(384), s(384), (3, 1))
        self.b3 = ConvUnit(cin, s(192), 1)
        self.out_channels = s(320) + 4 * s(384) + s(192)

    def forward(self, x):
        b1 = self.b1a(x)
        b1 = torch.cat([self.b1b(b1), self.b1c(b1)], dim=1)
        b2 = self.b2b(self.b2a(x))
        b2 = torch.cat([self.b2c(b2), self.b2d(b2)], dim=1)
        pooled = F.avg_pool2d(x, 3, stride=1, padding=1)
        return torch.cat([self.b0(x), b1, b2, self.b3(pooled)], dim=1)


class InceptionEncoder(nn.Module):
    """Contracting path; forward returns the five taps at 1/2 .. 1/32 scale.

    Tap channels at full width: 64 (1/2), 192 (1/4), 288 (1/8), 768 (1/16),
    2048 bottleneck (1/32).
    """

    def __init__(self, s: Scale):
        super().__init__()
        self.stem1 = ConvUnit(3, s(32), 3, stride=2)
        self.stem2 = ConvUnit(s(32), s(32), 3)
        self.stem3 = ConvUnit(s(32), s(64), 3)
        self.reduce1 = ConvUnit(s(64), s(80), 1)
        self.reduce2 = ConvUnit(s(80), s(192), 3)
        self.mixed_a1 = InceptionA(s(192), s(32), s)
        self.mixed_a2 = InceptionA(self.mixed_a1.out_channels, s(64), s)
        self.mixed_a3 = InceptionA(self.mixed_a2.out_channels, s(64), s)
        self.down_a = ReductionA(self.mixed_a3.out_channels, s)
        self.mixed_b1 = InceptionB(self.down_a.out_channels, s(128), s)
        self.mixed_b2 = InceptionB(self.mixed_b1.out_channels, s(160), s)
        self.mixed_b3 = InceptionB(self.mixed_b2.out_channels, s(160), s)
        self.mixed_b4 = InceptionB(self.mixed_b3.out_channels, s(192), s)
        self.down_b = ReductionB(self.mixed_b4.out_channels, s)
        self.mixed_c1 = InceptionC(self.down_b.out_channels, s)
        self.mixed_c2 = InceptionC(self.mixed_c1.out_channels, s)
        self.tap_channels = (
            s(64),
            s(192),
            self.mixed_a3.out_channels,
            self.mixed_b4.out_channels,
            self.mixed_c2.out_channels,
        )

    def forward(self, x):
        t1 = self.stem3(self.stem2(self.stem1(x)))          # 1/2
        x = F.max_pool2d(t1, 3, stride=2, padding=1)
        t2 = self.reduce2(self.reduce1(x))                  # 1/4
        x = F.max_pool2d(t2, 3, stride=2, padding=1)
        t3 = self.mixed_a3(self.mixed_a2(self.mixed_a1(x)))  # 1/8
        x = self.down_a(t3)
        t4 = self.mixed_b4(self.mixed_b3(self.mixed_b2(self.mixed_b1(x))))  # 1/16
        x = self.down_b(t4)
        t5 = self.mixed_c2(self.mixed_c1(x))                # 1/32 bottleneck
        return t1, t2, t3, t4, t5
