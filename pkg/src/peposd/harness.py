"""Monte Carlo experiment driver: BLER sweeps, complexity reports, CSV.

Frames are generated from per-frame RNG streams keyed by (seed, point,
frame), and statistics are reduced in fixed chunk order, so a sweep is
bit-identical for any worker count.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from . import channel
from .baselines import scl_decode, scl_op_count
from .crcpolar import CodeSpec, GeneratorMatrix, construct_code, crc_attach, encode, make_generator
from .decoder import DecoderConfig, PeposdDecoder
from .gf2 import ge_op_count
from .patterns import EpTable

CSV_HEADER = ("ebn0_db,frames,errors,bler,avg_queries,avg_bit_flips,"
              "avg_candidates,avg_ge_ops,wall_time_s")

# 3-order CA-OSD bit-flip counts, published reference values (not simulated).
CA_OSD_REFERENCE = {
    (64, 32, 6): 8436,
    (64, 44, 6): 19600,
    (64, 53, 6): 32509,
    (128, 108, 11): 273819,
}


@dataclass(frozen=True)
class ExperimentConfig:
    code: CodeSpec
    ebn0_points: tuple  # dB; math.inf = noiseless sentinel
    decoder: str  # "peposd" | "cascl"
    table: Optional[EpTable] = None
    decoder_cfg: Optional[DecoderConfig] = None
    list_size: int = 32
    frames: int = 10000
    min_errors: int = 100
    seed: int = 0
    workers: int = 1
    chunk_frames: int = 1000  # early-stop granularity; fixed, not worker-dependent
    auto_design: bool = False  # re-run the construction at each operating point

    def __post_init__(self):
        if self.frames < 1 or not self.ebn0_points:
            raise ValueError("need frames >= 1 and a non-empty sweep")
        if self.decoder not in ("peposd", "cascl"):
            raise ValueError(f"unknown decoder {self.decoder!r}")
        if self.decoder == "peposd" and (self.table is None or self.decoder_cfg is None):
            raise ValueError("peposd needs an EP table and a decoder config")


@dataclass(frozen=True)
class PointStats:
    ebn0_db: float
    frames_run: int
    block_errors: int
    bler: float
    avg_queries: float
    avg_bit_flips: float
    avg_candidates: float
    avg_ge_ops: float
    wall_time_s: float


# Worker-process state, installed once per pool by _init_worker.
_WORKER: dict = {}


def _point_state(cfg: ExperimentConfig, ebn0_db: float, point_index: int) -> dict:
    spec = cfg.code
    if cfg.auto_design and spec.construction[0] == "gaussian" and math.isfinite(ebn0_db):
        spec = construct_code(spec.n, spec.k, spec.m, spec.crc_poly,
                              ("gaussian", ebn0_db))
    gen = make_generator(spec)
    sigma = channel.noise_sigma(ebn0_db, spec.rate)
    state = {
        "spec": spec,
        "gen": gen,
        "sigma": sigma,
        "params": channel.ChannelParams(ebn0_db, spec.rate, _point_seed(cfg.seed, point_index)),
        "decoder": cfg.decoder,
        "list_size": cfg.list_size,
    }
    if cfg.decoder == "peposd":
        state["peposd"] = PeposdDecoder(spec, gen, cfg.table, cfg.decoder_cfg)
        state["ge_ops"] = ge_op_count(spec.n, spec.km)
    else:
        state["ge_ops"] = 0
    return state


def _point_seed(seed: int, point_index: int) -> int:
    return int(np.random.SeedSequence([int(seed), int(point_index)]).generate_state(1)[0])


def _run_frames(state: dict, lo: int, hi: int):
    """Simulate frames [lo, hi); returns summed counters."""
    spec: CodeSpec = state["spec"]
    gen: GeneratorMatrix = state["gen"]
    params: channel.ChannelParams = state["params"]
    sigma = state["sigma"]
    inv_var = 2.0 / (sigma * sigma) if sigma > 0 else 1e9
    errors = 0
    queries = 0
    flips = 0
    cands = 0
    for fi in range(lo, hi):
        rng = channel.frame_rng(params.seed, fi, stream=0)
        msg = rng.integers(0, 2, spec.k, dtype=np.uint8)
        u_info = crc_attach(msg, spec.crc_poly)
        x = channel.modulate(encode(u_info, spec, gen))
        y = channel.transmit(x, params, frame_index=fi)
        if state["decoder"] == "peposd":
            out = state["peposd"].decode(y)
            if not out.valid or not np.array_equal(out.info_star, u_info):
                errors += 1
            queries += out.queries
            flips += out.bit_flips
            cands += out.candidates_found
        else:
            info, valid = scl_decode(y * inv_var, spec, state["list_size"])
            if not valid or not np.array_equal(info, u_info):
                errors += 1
    return errors, queries, flips, cands, hi - lo


def _init_worker(cfg: ExperimentConfig, ebn0_db: float, point_index: int) -> None:
    _WORKER["state"] = _point_state(cfg, ebn0_db, point_index)


def _worker_chunk(lo: int, hi: int):
    return _run_frames(_WORKER["state"], lo, hi)


def run_point(cfg: ExperimentConfig, ebn0_db: float, point_index: int) -> PointStats:
    """One SNR point: run frames in fixed-size chunks until the frame or
    error budget is exhausted."""
    t0 = time.perf_counter()
    bounds = []
    lo = 0
    while lo < cfg.frames:
        hi = min(cfg.frames, lo + cfg.chunk_frames)
        bounds.append((lo, hi))
        lo = hi

    totals = np.zeros(5, dtype=np.int64)
    if cfg.workers <= 1:
        state = _point_state(cfg, ebn0_db, point_index)
        for lo, hi in bounds:
            totals += np.asarray(_run_frames(state, lo, hi), dtype=np.int64)
            if totals[0] >= cfg.min_errors:
                break
    else:
        with ProcessPoolExecutor(
            max_workers=cfg.workers,
            initializer=_init_worker,
            initargs=(cfg, ebn0_db, point_index),
        ) as pool:
            futures = [pool.submit(_worker_chunk, lo, hi) for lo, hi in bounds]
            for fut in futures:
                totals += np.asarray(fut.result(), dtype=np.int64)
                if totals[0] >= cfg.min_errors:
                    for rest in futures:
                        rest.cancel()
                    break

    errors, queries, flips, cands, frames_run = (int(v) for v in totals)
    ge = ge_op_count(cfg.code.n, cfg.code.km) if cfg.decoder == "peposd" else 0
    return PointStats(
        ebn0_db=float(ebn0_db),
        frames_run=frames_run,
        block_errors=errors,
        bler=errors / frames_run,
        avg_queries=queries / frames_run,
        avg_bit_flips=flips / frames_run,
        avg_candidates=cands / frames_run,
        avg_ge_ops=float(ge),
        wall_time_s=time.perf_counter() - t0,
    )


def run_sweep(cfg: ExperimentConfig):
    return [run_point(cfg, ebn0, i) for i, ebn0 in enumerate(cfg.ebn0_points)]


# ---------------------------------------------------------------------------
# CSV emission.


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.10g}"
    return str(v)


def emit_csv(stats, destination) -> None:
    own = isinstance(destination, (str, bytes)) or hasattr(destination, "__fspath__")
    f = open(destination, "w", encoding="ascii", newline="\n") if own else destination
    try:
        f.write(CSV_HEADER + "\n")
        for s in stats:
            row = [s.ebn0_db, s.frames_run, s.block_errors, s.bler, s.avg_queries,
                   s.avg_bit_flips, s.avg_candidates, s.avg_ge_ops, s.wall_time_s]
            f.write(",".join(_fmt(v) for v in row) + "\n")
    finally:
        if own:
            f.close()


def load_csv(source):
    own = isinstance(source, (str, bytes)) or hasattr(source, "__fspath__")
    f = open(source, "r", encoding="ascii") if own else source
    try:
        header = f.readline().strip()
        if header != CSV_HEADER:
            raise ValueError(f"unexpected CSV header: {header!r}")
        out = []
        for line in f:
            line = line.strip()
            if not line:
                continue
            v = line.split(",")
            out.append(PointStats(
                ebn0_db=float(v[0]), frames_run=int(v[1]), block_errors=int(v[2]),
                bler=float(v[3]), avg_queries=float(v[4]), avg_bit_flips=float(v[5]),
                avg_candidates=float(v[6]), avg_ge_ops=float(v[7]),
                wall_time_s=float(v[8]),
            ))
        return out
    finally:
        if own:
            f.close()


# ---------------------------------------------------------------------------
# Complexity report.


def esn0_to_ebn0(esn0_db: float, rate: float) -> float:
    return esn0_db - 10.0 * math.log10(rate)


def measure_avg_bit_flips(spec: CodeSpec, table: EpTable, dec_cfg: DecoderConfig,
                          esn0_db: float, frames: int, seed: int = 0) -> float:
    """Average bit flips of the EP decoder at a symbol-energy SNR."""
    cfg = ExperimentConfig(
        code=spec, ebn0_points=(esn0_to_ebn0(esn0_db, spec.rate),),
        decoder="peposd", table=table, decoder_cfg=dec_cfg,
        frames=frames, min_errors=frames, seed=seed,
    )
    return run_sweep(cfg)[0].avg_bit_flips


def complexity_report(specs, list_size: int = 32, bit_flip_columns=None):
    """Per-code operation counts.

    bit_flip_columns: optional {column_name: {spec_index: value}} of
    measured EP-decoder bit flips to include alongside the formulas.
    """
    rows = []
    for i, spec in enumerate(specs):
        row = {
            "code": f"[{spec.n},{spec.k}+{spec.m}]",
            "ge_ops": ge_op_count(spec.n, spec.km),
            "cascl_ops": scl_op_count(spec.n, list_size),
            "ca_osd_ref": CA_OSD_REFERENCE.get((spec.n, spec.k, spec.m)),
        }
        for name, col in (bit_flip_columns or {}).items():
            row[name] = col.get(i)
        rows.append(row)
    return rows
