"""BPSK over AWGN: modulation, noise injection, hard decision.

Noise is drawn from a counter-style stream keyed by (seed, frame index)
so frame i's samples are identical no matter which order or worker
generates them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ChannelParams:
    ebn0_db: float  # math.inf = noiseless sentinel
    code_rate: float  # information rate k/n; CRC counts as overhead
    seed: int = 0


def noise_sigma(ebn0_db: float, code_rate: float) -> float:
    """Per-dimension noise std dev for unit-energy BPSK symbols."""
    if math.isinf(ebn0_db) and ebn0_db > 0:
        return 0.0
    return math.sqrt(1.0 / (2.0 * code_rate * 10.0 ** (ebn0_db / 10.0)))


def frame_rng(seed: int, frame_index: int, stream: int = 0) -> np.random.Generator:
    """Independent generator for one (seed, frame, stream) triple."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(frame_index), int(stream)))
    return np.random.default_rng(ss)


def modulate(c) -> np.ndarray:
    """Bit 0 -> +1, bit 1 -> -1."""
    return 1.0 - 2.0 * np.asarray(c, dtype=np.float64)


def transmit(x, params: ChannelParams, frame_index: int = 0) -> np.ndarray:
    """y = x + z with z i.i.d. N(0, sigma^2), reproducible per frame."""
    x = np.asarray(x, dtype=np.float64)
    sigma = noise_sigma(params.ebn0_db, params.code_rate)
    if sigma == 0.0:
        return x.copy()
    z = frame_rng(params.seed, frame_index, stream=1).normal(0.0, sigma, size=x.shape)
    return x + z


def hard_decision(y) -> np.ndarray:
    """0 where y >= 0, else 1 (ties go to bit 0)."""
    return (np.asarray(y) < 0).astype(np.uint8)
