"""qdistill: Pauli-frame Monte Carlo simulation of logical-ancilla
distillation and shared-ancilla (Steane-style) syndrome extraction for CSS
stabilizer codes.

Layering: gf2 (bit-packed linear algebra) -> classical (coset-leader
decoders) -> css (codes, standard form, encoders) -> pauli (frames, noise,
circuits) -> protocols (distillation and extraction) -> montecarlo
(estimators, sweeps) -> cli.  kernels holds the numba-compilable hot loops
shared by pauli and montecarlo.
"""

from .classical import ClassicalCode, builtin, from_parity_check
from .css import CssCode, builtin_css
from .gf2 import BinaryMatrix, BinaryVector
from .montecarlo import (
    SweepPoint,
    SweepResult,
    brute_force_channel_fidelity,
    estimate_avg_channel_fidelity,
    estimate_distillation_rate,
    estimate_threshold,
    find_crossover,
    no_distillation_reference,
)
from .pauli import Circuit, NoiseModel, PauliError
from .protocols import (
    DistillationConfig,
    SyndromeRecord,
    ancilla_saving,
    distill_protocol_I,
    distill_protocol_II,
    distill_round,
    steane_extraction,
)

__version__ = "0.1.0"

__all__ = [
    "BinaryMatrix", "BinaryVector", "ClassicalCode", "CssCode", "Circuit",
    "NoiseModel", "PauliError", "DistillationConfig", "SyndromeRecord",
    "SweepPoint", "SweepResult", "builtin", "builtin_css",
    "from_parity_check", "ancilla_saving", "distill_protocol_I",
    "distill_protocol_II", "distill_round", "steane_extraction",
    "estimate_distillation_rate", "no_distillation_reference",
    "estimate_avg_channel_fidelity", "brute_force_channel_fidelity",
    "find_crossover", "estimate_threshold",
]
