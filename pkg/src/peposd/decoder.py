"""Online OSD-style decoder driven by a pre-generated error-pattern table.

Per frame: sort positions by reliability, reduce the generator to
systematic form over the most reliable independent columns, then walk
the EP table flipping rank subsets of the hard decision, re-encoding,
and CRC-checking each candidate. CRC-valid candidates compete on
squared Euclidean distance; decoding stops after `delta` of them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import channel, gf2
from .crcpolar import CodeSpec, GeneratorMatrix, crc_syndrome_matrix
from .patterns import EpTable


@dataclass(frozen=True)
class DecoderConfig:
    delta: int = 1  # stop after this many CRC-valid candidates
    w_i_max: Optional[int] = None  # extra budget caps on top of the table
    w_h_max: Optional[int] = None
    test_empty_ep: bool = True  # try the raw hard decision first

    def __post_init__(self):
        if self.delta < 1:
            raise ValueError("delta must be >= 1")


@dataclass(frozen=True)
class PreprocessResult:
    lam1: np.ndarray  # |y| descending sort, stable on ties
    lam2: np.ndarray  # independent-column permutation from the reduction
    g_systematic: np.ndarray  # [I | P]
    theta_i: np.ndarray  # hard decision, systematic part
    theta_p: np.ndarray  # hard decision, parity part
    rel: np.ndarray  # |y~| over systematic positions, ascending
    rank_to_pos: np.ndarray  # rank j (1-based) -> systematic position rank_to_pos[j-1]
    y_tilde: np.ndarray  # fully permuted received vector
    comp: np.ndarray  # composite permutation: y_tilde[i] = y[comp[i]]

    @property
    def km(self) -> int:
        return len(self.theta_i)

    @property
    def parity(self) -> np.ndarray:
        return self.g_systematic[:, self.km :]


@dataclass(frozen=True)
class DecodeOutcome:
    u_star: Optional[np.ndarray]  # length-n source estimate, frozen bits zero
    info_star: Optional[np.ndarray]  # k+m information bits
    valid: bool
    queries: int
    bit_flips: int
    candidates_found: int
    d_min: Optional[float]


def preprocess(y, G) -> PreprocessResult:
    """Reliability sort + systematic reduction of one received frame."""
    y = np.asarray(y, dtype=np.float64)
    G = gf2.as_bits(G)
    km, n = G.shape
    if len(y) != n:
        raise ValueError(f"frame length {len(y)} != generator columns {n}")

    lam1 = np.argsort(-np.abs(y), kind="stable")
    Gt, lam2, _ = gf2.systematic_form(G[:, lam1])
    comp = lam1[lam2]
    y_tilde = y[comp]
    theta = channel.hard_decision(y_tilde)
    rel_i = np.abs(y_tilde[:km])
    rank_to_pos = np.argsort(rel_i, kind="stable")  # ascending reliability
    return PreprocessResult(
        lam1=lam1, lam2=lam2, g_systematic=Gt,
        theta_i=theta[:km], theta_p=theta[km:],
        rel=rel_i[rank_to_pos], rank_to_pos=rank_to_pos,
        y_tilde=y_tilde, comp=comp,
    )


def _ranks_of(ep) -> tuple:
    if ep is None:
        return ()
    ranks = getattr(ep, "ranks", ep)
    return tuple(int(r) for r in ranks)


def test_ep(ep, pre: PreprocessResult) -> Optional[np.ndarray]:
    """Candidate codeword (original bit order) for one error pattern.

    Returns None when a rank exceeds the systematic width, signalling
    the caller to skip the pattern.
    """
    ranks = _ranks_of(ep)
    km = pre.km
    if any(r > km for r in ranks):
        return None
    c_i = pre.theta_i.copy()
    if ranks:
        c_i[pre.rank_to_pos[np.asarray(ranks, dtype=np.int64) - 1]] ^= 1
    c_p = gf2.mat_vec_mul(c_i, pre.parity)
    c = np.empty(km + len(c_p), dtype=np.uint8)
    c[pre.comp] = np.concatenate([c_i, c_p])
    return c


def reliability_weight(ep, pre: PreprocessResult) -> float:
    """Diagnostic: sum of |y~| over the flipped systematic bits."""
    ranks = _ranks_of(ep)
    if not ranks:
        return 0.0
    return float(pre.rel[np.asarray(ranks, dtype=np.int64) - 1].sum())


def euclidean_distance(y, c) -> float:
    """||y - (1 - 2c)||^2."""
    diff = np.asarray(y, dtype=np.float64) - (1.0 - 2.0 * np.asarray(c, dtype=np.float64))
    return float(diff @ diff)


class _TableRuntime:
    """Table flattened to rank arrays, filtered to one code's budget.

    Patterns whose biggest rank exceeds the systematic width (or the
    config caps) perform no codeword test; they are dropped here and
    never counted as queries.
    """

    def __init__(self, table: EpTable, km: int, cfg: DecoderConfig):
        w_i_cap = cfg.w_i_max if cfg.w_i_max is not None else table.w_i_max
        w_h_cap = cfg.w_h_max if cfg.w_h_max is not None else table.w_h_max
        kept = [
            ep.ranks
            for ep in table.patterns
            if ep.ranks[-1] <= km and ep.w_i <= w_i_cap and ep.w_h <= w_h_cap
        ]
        lens = np.array([len(r) for r in kept], dtype=np.int64)
        self.count = len(kept)
        self.flat = (
            np.concatenate([np.asarray(r, dtype=np.int64) for r in kept])
            if kept else np.empty(0, dtype=np.int64)
        )
        self.offsets = np.concatenate([[0], np.cumsum(lens)])
        self.prefix_wh = np.concatenate([[0], np.cumsum(lens)])  # bit flips per query

    def ranks_at(self, i: int) -> np.ndarray:
        return self.flat[self.offsets[i] : self.offsets[i + 1]]


def _decode_core(y, G, syndrome_map, runtime: _TableRuntime, delta: int,
                 test_empty: bool):
    """Shared EP search over one frame.

    syndrome_map is the (n x m) GF(2) matrix taking a candidate codeword
    (original order) to its CRC syndrome; zero syndrome = valid.

    Returns (best_c, d_min, queries, bit_flips, candidates_found).
    """
    y = np.asarray(y, dtype=np.float64)
    pre = preprocess(y, G)
    km = pre.km
    theta_i = pre.theta_i
    P = pre.parity
    comp = pre.comp
    comp_i, comp_p = comp[:km], comp[km:]

    # Syndrome of a candidate as a function of its systematic bits:
    # s(c_i) = s0 XOR e . M with c_i = theta_i XOR e.
    M = (syndrome_map[comp_i] + P @ syndrome_map[comp_p]) & 1
    M_rank = M[pre.rank_to_pos]  # row j <-> rank j+1
    c0_perm = np.concatenate([theta_i, gf2.mat_vec_mul(theta_i, P)])
    c0 = np.empty(len(y), dtype=np.uint8)
    c0[comp] = c0_perm
    s0 = gf2.mat_vec_mul(c0, syndrome_map)

    best_c = None
    d_min = np.inf
    candidates = 0
    queries = 0

    def consider(c) -> float:
        nonlocal best_c, d_min, candidates
        d = euclidean_distance(y, c)
        candidates += 1
        if d < d_min:
            d_min = d
            best_c = c
        return d

    if test_empty:
        queries += 1
        if not s0.any():
            consider(c0)
            if candidates >= delta:
                return best_c, d_min, queries, 0, candidates

    tested = 0  # table patterns actually queried
    i0 = 0
    chunk = 256
    while i0 < runtime.count and candidates < delta:
        i1 = min(runtime.count, i0 + chunk)
        seg = runtime.flat[runtime.offsets[i0] : runtime.offsets[i1]]
        rel_offsets = runtime.offsets[i0:i1] - runtime.offsets[i0]
        prods = np.add.reduceat(M_rank[seg - 1], rel_offsets, axis=0) & 1
        hits = np.nonzero(np.all(prods == s0, axis=1))[0]
        stopped = False
        for local in hits:
            ranks = runtime.ranks_at(i0 + int(local))
            c_i = theta_i.copy()
            c_i[pre.rank_to_pos[ranks - 1]] ^= 1
            c = np.empty(len(y), dtype=np.uint8)
            c[comp] = np.concatenate([c_i, gf2.mat_vec_mul(c_i, P)])
            consider(c)
            if candidates >= delta:
                tested += int(local) + 1
                stopped = True
                break
        if not stopped:
            tested += i1 - i0
        i0 = i1
        chunk = min(chunk * 2, 8192)

    queries += tested
    bit_flips = int(runtime.prefix_wh[tested])
    return best_c, (None if best_c is None else float(d_min)), queries, bit_flips, candidates


class PeposdDecoder:
    """Reusable decoder: caches the table runtime and syndrome map."""

    def __init__(self, spec: CodeSpec, gen: GeneratorMatrix, table: EpTable,
                 cfg: DecoderConfig):
        self.spec = spec
        self.gen = gen
        self.cfg = cfg
        self._info = np.asarray(spec.info_set, dtype=np.int64)
        # codeword -> CRC syndrome of its information bits, all in one map
        S = crc_syndrome_matrix(spec.km, spec.crc_poly)
        self.syndrome_map = (gen.Gn[:, self._info] @ S) & 1
        self.runtime = _TableRuntime(table, spec.km, cfg)

    def decode(self, y) -> DecodeOutcome:
        best_c, d_min, queries, bit_flips, candidates = _decode_core(
            y, self.gen.G, self.syndrome_map, self.runtime,
            self.cfg.delta, self.cfg.test_empty_ep,
        )
        if best_c is None:
            return DecodeOutcome(u_star=None, info_star=None, valid=False,
                                 queries=queries, bit_flips=bit_flips,
                                 candidates_found=0, d_min=None)
        u = gf2.mat_vec_mul(best_c, self.gen.Gn)
        return DecodeOutcome(u_star=u, info_star=u[self._info], valid=True,
                             queries=queries, bit_flips=bit_flips,
                             candidates_found=candidates, d_min=d_min)


def decode(y, spec: CodeSpec, gen: GeneratorMatrix, table: EpTable,
           cfg: DecoderConfig) -> DecodeOutcome:
    """One-shot decode; see PeposdDecoder for the reusable form."""
    return PeposdDecoder(spec, gen, table, cfg).decode(y)
