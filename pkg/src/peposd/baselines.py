"""Baseline decoders: CRC-aided SCL and a brute-force ML oracle.

The SCL decoder is a standard LLR-domain list decoder over the polar
factor graph, vectorized across the L paths. The ML oracle enumerates
every information block (optionally only CRC-valid ones) and returns
the minimum-distance codeword; it exists to certify the main decoder.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .crcpolar import CodeSpec, GeneratorMatrix, crc_check, crc_syndrome_matrix


def scl_op_count(n: int, list_size: int) -> int:
    """Nominal SCL operation count n * L * log2(n)."""
    if n < 2 or n & (n - 1):
        raise ValueError("n must be a power of two")
    return n * list_size * (n.bit_length() - 1)


def _f(a, b):
    return np.sign(a) * np.sign(b) * np.minimum(np.abs(a), np.abs(b))


def _g(a, b, c):
    return b + (1.0 - 2.0 * c) * a


def scl_decode(llrs, spec: CodeSpec, list_size: int):
    """List decode one frame from channel LLRs (positive favors bit 0).

    Returns (info_bits, valid): the k+m bits of the best CRC-passing
    path, or of the most likely path with valid=False when none passes.
    """
    llrs = np.asarray(llrs, dtype=np.float64)
    n = spec.n
    if len(llrs) != n:
        raise ValueError("LLR length must equal the block length")
    L = int(list_size)
    if L < 1:
        raise ValueError("list size must be >= 1")
    t = n.bit_length() - 1
    frozen = np.ones(n, dtype=bool)
    frozen[np.asarray(spec.info_set, dtype=np.int64)] = False

    llr = np.zeros((L, t + 1, n))
    llr[:, 0, :] = llrs
    ucap = np.zeros((L, t + 1, n), dtype=np.uint8)
    node_state = np.zeros(2 * n - 1, dtype=np.int8)
    pm = np.full(L, np.inf)
    pm[0] = 0.0

    depth = 0
    node = 0
    while True:
        if depth == t:  # leaf: decide u[node]
            dm = llr[:, t, node]
            if frozen[node]:
                ucap[:, t, node] = 0
                pm = pm + np.abs(dm) * (dm < 0)
            else:
                follow = (dm < 0).astype(np.uint8)
                pm2 = np.concatenate([pm, pm + np.abs(dm)])
                keep = np.argsort(pm2, kind="stable")[:L]
                pm = pm2[keep]
                flipped = keep >= L
                src = np.where(flipped, keep - L, keep)
                llr = llr[src]
                ucap = ucap[src]
                decision = follow[src]
                decision[flipped] ^= 1
                ucap[:, t, node] = decision
            if node == n - 1:
                break
            node //= 2
            depth -= 1
            continue

        pos = (1 << depth) - 1 + node
        size = n >> depth
        lo = node * size
        a = llr[:, depth, lo : lo + size // 2]
        b = llr[:, depth, lo + size // 2 : lo + size]
        if node_state[pos] == 0:  # descend left
            node_state[pos] = 1
            node *= 2
            depth += 1
            half = size // 2
            llr[:, depth, node * half : (node + 1) * half] = _f(a, b)
        elif node_state[pos] == 1:  # descend right with left decisions
            half = size // 2
            left = ucap[:, depth + 1, 2 * node * half : (2 * node + 1) * half]
            node_state[pos] = 2
            node = 2 * node + 1
            depth += 1
            llr[:, depth, node * half : (node + 1) * half] = _g(a, b, left)
        else:  # combine children upward
            half = size // 2
            left = ucap[:, depth + 1, 2 * node * half : (2 * node + 1) * half]
            right = ucap[:, depth + 1, (2 * node + 1) * half : (2 * node + 2) * half]
            ucap[:, depth, lo : lo + half] = left ^ right
            ucap[:, depth, lo + half : lo + size] = right
            node //= 2
            depth -= 1

    info_idx = np.asarray(spec.info_set, dtype=np.int64)
    u = ucap[:, t, :]
    order = np.argsort(pm, kind="stable")
    fallback = None
    for idx in order:
        if not np.isfinite(pm[idx]):
            break
        info = u[idx, info_idx]
        if fallback is None:
            fallback = info
        if crc_check(info, spec.crc_poly):
            return info.copy(), True
    return fallback.copy(), False


@dataclass(frozen=True)
class MlOracleResult:
    best_codeword: np.ndarray
    best_info: np.ndarray
    distance: float
    constrained: bool


class MlOracle:
    """Exhaustive minimum-distance search over all information blocks.

    Precomputes the (optionally CRC-constrained) codebook once; ties
    resolve to the lexicographically smallest information block.
    """

    MAX_KM = 20

    def __init__(self, spec: CodeSpec, gen: GeneratorMatrix, constrained: bool = True):
        km = spec.km
        if km > self.MAX_KM:
            raise ValueError(f"k+m = {km} too large for exhaustive search")
        self.constrained = constrained
        blocks = ((np.arange(1 << km, dtype=np.int64)[:, None]
                   >> np.arange(km - 1, -1, -1)) & 1).astype(np.uint8)
        if constrained:
            S = crc_syndrome_matrix(km, spec.crc_poly)
            ok = ~((blocks.astype(np.int64) @ S) & 1).any(axis=1)
            blocks = blocks[ok]
        self.infos = blocks
        codewords = (blocks.astype(np.int64) @ gen.G.astype(np.int64)) & 1
        self.codewords = codewords.astype(np.uint8)
        self._symbols = 1.0 - 2.0 * codewords.astype(np.float64)

    def decode(self, y) -> MlOracleResult:
        y = np.asarray(y, dtype=np.float64)
        d = ((y - self._symbols) ** 2).sum(axis=1)
        i = int(np.argmin(d))  # first minimum = lexicographic tie-break
        return MlOracleResult(best_codeword=self.codewords[i].copy(),
                              best_info=self.infos[i].copy(),
                              distance=float(d[i]), constrained=self.constrained)


def ml_oracle(y, spec: CodeSpec, gen: GeneratorMatrix,
              constrained: bool = True) -> MlOracleResult:
    """One-shot exhaustive decode; see MlOracle for the reusable form."""
    return MlOracle(spec, gen, constrained).decode(y)
