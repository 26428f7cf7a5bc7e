"""Error-pattern OSD workbench for CRC-polar codes.

Subpackages: gf2 (binary linear algebra), crcpolar (code construction
and encoding), channel (BPSK/AWGN), patterns (offline error-pattern
tables), decoder (the online EP decoder), baselines (CA-SCL and an ML
oracle), harness (Monte Carlo sweeps), cli (command line).
"""

from .baselines import MlOracle, ml_oracle, scl_decode, scl_op_count
from .channel import ChannelParams, hard_decision, modulate, noise_sigma, transmit
from .crcpolar import (CodeSpec, GeneratorMatrix, construct_code, crc_attach,
                       crc_check, encode, make_generator, recover_source)
from .decoder import DecodeOutcome, DecoderConfig, PeposdDecoder, decode, preprocess, test_ep
from .gf2 import StructuralError, apply_permutation, invert_permutation, mat_vec_mul, systematic_form
from .harness import ExperimentConfig, PointStats, complexity_report, emit_csv, run_sweep
from .patterns import (EpTable, ErrorPattern, build_table, generate_eps,
                       priority_weight, read_store, sort_eps, write_store)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
