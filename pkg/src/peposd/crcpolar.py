"""CRC-polar code construction, CRC arithmetic, and polar encoding.

A code is [n, k+m]: k information bits protected by an m-bit CRC,
mapped onto the k+m most reliable polar subchannels; frozen bits are
zero. The polar transform is the natural-order Kronecker power of
F = [[1,0],[1,1]], which is self-inverse over GF(2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import gf2

# 5G NR polynomials, bit i = coefficient of x^i.
CRC6 = 0x61  # x^6 + x^5 + 1
CRC11 = 0xE21  # x^11 + x^10 + x^9 + x^5 + 1

DEFAULT_CRC_POLYS = {6: CRC6, 11: CRC11}


@dataclass(frozen=True)
class CodeSpec:
    """One CRC-polar code: dimensions, information set, CRC, construction."""

    n: int
    k: int
    m: int
    info_set: tuple  # sorted subchannel indices, length k+m
    crc_poly: int
    construction: tuple  # ("bhattacharyya", eps) or ("gaussian", design_ebn0_db)

    @property
    def km(self) -> int:
        return self.k + self.m

    @property
    def rate(self) -> float:
        """Information rate k/n; CRC bits count as overhead."""
        return self.k / self.n


@dataclass(frozen=True)
class GeneratorMatrix:
    """Info-set rows G of the full polar transform Gn."""

    G: np.ndarray  # (k+m, n)
    Gn: np.ndarray  # (n, n), self-inverse over GF(2)


def polar_transform_matrix(n: int) -> np.ndarray:
    """Natural-order polar transform F^{(x) log2 n}."""
    if n < 1 or n & (n - 1):
        raise ValueError("n must be a power of two")
    F = np.array([[1, 0], [1, 1]], dtype=np.uint8)
    Gn = np.array([[1]], dtype=np.uint8)
    while Gn.shape[0] < n:
        Gn = np.kron(Gn, F)
    return Gn


def bhattacharyya_profile(n: int, design_eps: float) -> np.ndarray:
    """Bhattacharyya parameter of each subchannel (smaller = more reliable).

    Recursion per polarization level: z- = 2z - z^2, z+ = z^2, applied
    MSB-first so index order matches the natural-order transform.
    """
    z = np.array([design_eps], dtype=np.float64)
    while len(z) < n:
        z = np.concatenate([2.0 * z - z * z, z * z]).reshape(2, -1).T.reshape(-1)
    return z


# Gaussian-approximation helper phi(x) ~ E[tanh(L/2)] complement for a
# consistent Gaussian LLR with mean x (Chung et al. piecewise fit).
def _phi(x: float) -> float:
    if x <= 0.0:
        return 1.0
    if x < 10.0:
        return math.exp(-0.4527 * x**0.86 + 0.0218)
    return math.sqrt(math.pi / x) * math.exp(-x / 4.0) * (1.0 - 10.0 / (7.0 * x))


def _phi_inv(y: float) -> float:
    if y >= 1.0:
        return 0.0
    lo, hi = 0.0, 10.0
    while _phi(hi) > y:
        lo, hi = hi, hi * 2.0
        if hi > 1e9:
            return hi
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if _phi(mid) > y:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def gaussian_approx_profile(n: int, design_ebn0_db: float, rate: float) -> np.ndarray:
    """Mean subchannel LLR under density-evolution GA (larger = better)."""
    sigma2 = 1.0 / (2.0 * rate * 10.0 ** (design_ebn0_db / 10.0))
    means = [2.0 / sigma2]
    while len(means) < n:
        nxt = []
        for mu in means:
            nxt.append(_phi_inv(1.0 - (1.0 - _phi(mu)) ** 2))  # minus channel
            nxt.append(2.0 * mu)  # plus channel
        means = nxt
    return np.asarray(means, dtype=np.float64)


def construct_code(n, k, m, crc_poly=None, construction=("bhattacharyya", 0.5)) -> CodeSpec:
    """Pick the k+m most reliable subchannels as the information set.

    Deterministic for fixed inputs; reliability ties break toward the
    lower subchannel index.
    """
    if n < 2 or n & (n - 1):
        raise ValueError("n must be a power of two >= 2")
    if k < 1 or m < 0 or k + m > n:
        raise ValueError("need 1 <= k and k+m <= n")
    if crc_poly is None:
        if m not in DEFAULT_CRC_POLYS:
            raise ValueError(f"no default CRC polynomial of degree {m}")
        crc_poly = DEFAULT_CRC_POLYS[m]
    if m > 0:
        if crc_poly.bit_length() - 1 != m:
            raise ValueError("crc_poly degree must equal m")
        if not crc_poly & 1:
            raise ValueError("crc_poly must have a nonzero constant term")

    method, param = construction
    if method == "bhattacharyya":
        badness = bhattacharyya_profile(n, float(param))
    elif method == "gaussian":
        badness = -gaussian_approx_profile(n, float(param), k / n)
    else:
        raise ValueError(f"unknown construction {method!r}")
    order = np.argsort(badness, kind="stable")
    info_set = tuple(sorted(int(i) for i in order[: k + m]))
    return CodeSpec(n=n, k=k, m=m, info_set=info_set, crc_poly=int(crc_poly),
                    construction=(method, float(param)))


def make_generator(spec: CodeSpec) -> GeneratorMatrix:
    Gn = polar_transform_matrix(spec.n)
    G = Gn[np.asarray(spec.info_set, dtype=np.int64), :].copy()
    return GeneratorMatrix(G=G, Gn=Gn)


# ---------------------------------------------------------------------------
# CRC arithmetic (bit 0 of a word = message's first, highest-degree bit).


def crc_remainder(bits, poly: int) -> np.ndarray:
    """Remainder of the bit sequence (MSB first) modulo poly, as m bits."""
    m = poly.bit_length() - 1
    reg = 0
    for b in np.asarray(bits, dtype=np.uint8):
        reg = (reg << 1) | int(b)
        if reg >> m:
            reg ^= poly
    return np.array([(reg >> (m - 1 - i)) & 1 for i in range(m)], dtype=np.uint8)


def crc_attach(msg, poly: int) -> np.ndarray:
    """Append the m-bit remainder of msg * x^m so the block divides poly."""
    msg = gf2.as_bits(msg)
    m = poly.bit_length() - 1
    rem = crc_remainder(np.concatenate([msg, np.zeros(m, dtype=np.uint8)]), poly)
    return np.concatenate([msg, rem])


def crc_check(block, poly: int) -> bool:
    """True iff the block, read MSB-first as a polynomial, divides poly."""
    return not crc_remainder(block, poly).any()


def crc_syndrome_matrix(length: int, poly: int) -> np.ndarray:
    """(length x m) matrix S with block . S = crc_remainder(block)."""
    m = poly.bit_length() - 1
    rows = np.zeros((length, m), dtype=np.uint8)
    rem = 1  # x^0 mod poly
    for i in range(length - 1, -1, -1):
        rows[i] = [(rem >> (m - 1 - j)) & 1 for j in range(m)]
        rem <<= 1
        if rem >> m:
            rem ^= poly
    return rows


# ---------------------------------------------------------------------------
# Encoding / source recovery.


def encode(u_info, spec: CodeSpec, gen: GeneratorMatrix) -> np.ndarray:
    """Map k+m information bits onto the info set and apply the transform."""
    u_info = gf2.as_bits(u_info)
    if len(u_info) != spec.km:
        raise ValueError(f"expected {spec.km} information bits, got {len(u_info)}")
    return gf2.mat_vec_mul(u_info, gen.G)


def recover_source(c, gen: GeneratorMatrix) -> np.ndarray:
    """c . Gn; inverts encoding for any codeword since Gn . Gn = I."""
    return gf2.mat_vec_mul(c, gen.Gn)


# ---------------------------------------------------------------------------
# Plain-text code config files.


def save_code_config(spec: CodeSpec, path) -> None:
    method, param = spec.construction
    with open(path, "w", encoding="ascii") as f:
        f.write(f"n = {spec.n}\n")
        f.write(f"k = {spec.k}\n")
        f.write(f"m = {spec.m}\n")
        f.write(f"crc_poly = 0x{spec.crc_poly:x}\n")
        f.write(f"construction = {method} {param}\n")


def load_code_config(path) -> CodeSpec:
    """Parse a key-value code config and rebuild the CodeSpec."""
    fields = {}
    with open(path, "r", encoding="ascii") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, _, value = line.partition("=")
            fields[key.strip()] = value.strip()
    try:
        n = int(fields["n"])
        k = int(fields["k"])
        m = int(fields["m"])
        poly = int(fields["crc_poly"], 16)
        method, param = fields["construction"].split()
    except (KeyError, ValueError) as exc:
        raise ValueError(f"{path}: malformed code config: {exc}") from exc
    return construct_code(n, k, m, poly, (method, float(param)))
