"""Offline error-pattern generation, ordering, and the EP store.

An error pattern (EP) is a set of reliability ranks to flip among the
k+m systematic bits (rank 1 = least reliable). Patterns live purely in
the rank domain, so one table serves every code; the rank-to-position
map is applied at decode time.

Generation splits the biggest part of each pattern, which enumerates
every partition of each index weight into distinct parts exactly once.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class EpStoreParseError(ValueError):
    """Malformed EP store file; message carries the offending line number."""


@dataclass(frozen=True)
class ErrorPattern:
    """Strictly increasing reliability ranks; weights derive from them."""

    ranks: tuple

    def __post_init__(self):
        r = tuple(int(x) for x in self.ranks)
        if not r:
            raise ValueError("an error pattern flips at least one bit")
        if any(a <= 0 for a in r) or any(b <= a for a, b in zip(r, r[1:])):
            raise ValueError(f"ranks must be strictly increasing positives: {r}")
        object.__setattr__(self, "ranks", r)

    @property
    def w_i(self) -> int:
        """Index weight: sum of flipped ranks."""
        return sum(self.ranks)

    @property
    def w_h(self) -> int:
        """Hamming weight: number of flipped bits."""
        return len(self.ranks)


def _split_partitions(w_i: int, w_h_max: int):
    """All partitions of w_i into at most w_h_max distinct parts, ascending."""
    seed = (w_i,)
    out = [seed]
    old = [seed]
    for _ in range(2, w_h_max + 1):
        new = []
        for parts in old:
            small, b = parts[:-1], parts[-1]
            lo = small[-1] + 1 if small else 1
            for a in range(lo, (b - 1) // 2 + 1):
                new.append(small + (a, b - a))
        if not new:
            break
        out.extend(new)
        old = new
    return out


def generate_eps(w_i_max: int, w_h_max: int) -> list:
    """Every partition of every w_i in [1, w_i_max] into <= w_h_max distinct parts."""
    if w_i_max < 1 or w_h_max < 1:
        raise ValueError("w_i_max and w_h_max must be >= 1")
    eps = []
    for w in range(1, w_i_max + 1):
        eps.extend(ErrorPattern(p) for p in _split_partitions(w, w_h_max))
    return eps


def priority_weight(ep: ErrorPattern, alpha: float, beta: float) -> float:
    """w_P = w_I + alpha * w_H^beta."""
    if alpha < 0 or beta < 0:
        raise ValueError("alpha and beta must be >= 0")
    return ep.w_i + alpha * ep.w_h**beta


ORDER_IWHW = "iwhw"
ORDER_PW = "pw"


@dataclass(frozen=True)
class EpTable:
    """Error patterns frozen into their test order."""

    patterns: tuple
    order: str
    alpha: float = 0.0
    beta: float = 0.0
    w_i_max: int = 0
    w_h_max: int = 0


def sort_eps(eps, order: str, alpha: float = 0.0, beta: float = 0.0,
             w_i_max=None, w_h_max=None) -> EpTable:
    """Sort patterns into IW&HW or PW test order.

    IW&HW: (w_H asc, w_I asc, ranks lexicographic).
    PW:    (w_P asc, w_H asc, ranks lexicographic); equal w_P values tie.
    """
    eps = list(eps)
    if order == ORDER_IWHW:
        key = lambda e: (e.w_h, e.w_i, e.ranks)
    elif order == ORDER_PW:
        key = lambda e: (priority_weight(e, alpha, beta), e.w_h, e.ranks)
    else:
        raise ValueError(f"unknown order {order!r}")
    eps.sort(key=key)
    if w_i_max is None:
        w_i_max = max((e.w_i for e in eps), default=0)
    if w_h_max is None:
        w_h_max = max((e.w_h for e in eps), default=0)
    return EpTable(patterns=tuple(eps), order=order, alpha=float(alpha),
                   beta=float(beta), w_i_max=int(w_i_max), w_h_max=int(w_h_max))


def build_table(w_i_max: int, w_h_max: int, order: str = ORDER_IWHW,
                alpha: float = 0.0, beta: float = 0.0) -> EpTable:
    """Generate and sort in one step."""
    return sort_eps(generate_eps(w_i_max, w_h_max), order, alpha, beta,
                    w_i_max=w_i_max, w_h_max=w_h_max)


# ---------------------------------------------------------------------------
# EP store: line-oriented text, one pattern per line as descending ranks.

_HEADER_MAGIC = "peposd-ep v1"


def write_store(table: EpTable, destination) -> None:
    """Persist a table; read_store round-trips it bit-exactly."""
    own = isinstance(destination, (str, bytes)) or hasattr(destination, "__fspath__")
    f = open(destination, "w", encoding="ascii") if own else destination
    try:
        f.write(f"{_HEADER_MAGIC} wImax={table.w_i_max} wHmax={table.w_h_max} "
                f"order={table.order} alpha={table.alpha!r} beta={table.beta!r}\n")
        for ep in table.patterns:
            f.write(" ".join(str(r) for r in reversed(ep.ranks)) + "\n")
    finally:
        if own:
            f.close()


def read_store(source) -> EpTable:
    """Parse an EP store file, validating ranks and rejecting duplicates."""
    own = isinstance(source, (str, bytes)) or hasattr(source, "__fspath__")
    f = open(source, "r", encoding="ascii") if own else source
    try:
        header = f.readline().rstrip("\n")
        if not header.startswith(_HEADER_MAGIC + " "):
            raise EpStoreParseError(f"line 1: bad header magic: {header!r}")
        meta = {}
        for token in header[len(_HEADER_MAGIC) + 1 :].split():
            key, _, value = token.partition("=")
            if not value:
                raise EpStoreParseError(f"line 1: bad header field {token!r}")
            meta[key] = value
        try:
            w_i_max = int(meta["wImax"])
            w_h_max = int(meta["wHmax"])
            order = meta["order"]
            alpha = float(meta["alpha"])
            beta = float(meta["beta"])
        except (KeyError, ValueError) as exc:
            raise EpStoreParseError(f"line 1: incomplete header: {exc}") from exc
        if order not in (ORDER_IWHW, ORDER_PW):
            raise EpStoreParseError(f"line 1: unknown order {order!r}")

        patterns = []
        seen = set()
        for lineno, line in enumerate(f, start=2):
            line = line.strip()
            if not line:
                continue
            try:
                desc = [int(tok) for tok in line.split()]
            except ValueError:
                raise EpStoreParseError(f"line {lineno}: non-integer rank") from None
            ranks = tuple(reversed(desc))
            if any(a <= 0 for a in ranks) or any(
                b <= a for a, b in zip(ranks, ranks[1:])
            ):
                raise EpStoreParseError(
                    f"line {lineno}: ranks must be distinct, positive, descending"
                )
            if ranks in seen:
                raise EpStoreParseError(f"line {lineno}: duplicate error pattern")
            seen.add(ranks)
            patterns.append(ErrorPattern(ranks))
        return EpTable(patterns=tuple(patterns), order=order, alpha=alpha,
                       beta=beta, w_i_max=w_i_max, w_h_max=w_h_max)
    finally:
        if own:
            f.close()
