import io
import logging
from concurrent.futures import ProcessPoolExecutor
from enum import Enum
from itertools import repeat
from typing import NamedTuple

import numpy as np
import pandas as pd
from opentelemetry import trace
from pydantic import BaseModel, ConfigDict, Field, model_validator
from tqdm import tqdm

from swcoding.codes.ldpc_code import (
    SparseParityMatrix,
    embed_code,
    gallager_construct,
    identity_code,
    stack_codes,
    syndrome,
    systematic_rows,
)
from swcoding.config.config import SIMULATION_CONFIG
from swcoding.correlation.correlation_model import CorrelationModel, derive_seed, joint_entropy, sample_pair
from swcoding.decoding.bp_decoder import DecoderConfig, correlation_parities, decode
from swcoding.decoding.joint_graph import GraphForm, build_joint_graph
from swcoding.errors import SWCodingError
from swcoding.logging import log_latency

logger = logging.getLogger(__name__)
tracer = trace.get_tracer(__name__)

# key separating code-construction seeds from per-trial seeds
CODE_STREAM = 0x636F6465

CSV_COLUMNS = [
    "p", "n", "r1", "r2", "trials", "ber1", "ber2", "fer",
    "avg_iterations", "converged_fraction", "sw_sum_slack",
]


class SimMode(str, Enum):
    ASYMMETRIC = "asymmetric"
    SYMMETRIC = "symmetric"


class SimConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    model: CorrelationModel
    H1: SparseParityMatrix
    H2: SparseParityMatrix
    trials: int = Field(SIMULATION_CONFIG["trials"], ge=1)
    master_seed: int
    decoder: DecoderConfig = DecoderConfig()
    mode: SimMode = SimMode(SIMULATION_CONFIG["mode"])
    use_correlation: bool = True
    form: GraphForm = GraphForm.FOLDED

    @model_validator(mode="after")
    def check_codes(self):
        if self.H1.n != self.H2.n:
            raise ValueError(f"codes have different lengths: {self.H1.n} and {self.H2.n}")
        if self.mode is SimMode.ASYMMETRIC and self.H1 != identity_code(self.H1.n):
            raise ValueError("asymmetric mode sends source 1 uncompressed: H1 must be the identity code")
        return self

    @property
    def n(self):
        return self.H1.n


class SimRecord(BaseModel):
    """
    One CSV row.

    ber1 and ber2 stay at or below 0.5 plus sampling noise in practice: a
    failed frame falls back on the correlation prior, which is right with
    probability max(p, 1 - p) >= 0.5. Validation only enforces [0, 1], since
    a single short frame can be worse than a coin.
    """

    model_config = ConfigDict(frozen=True)

    p: float
    n: int
    r1: float
    r2: float
    trials: int = Field(..., ge=1)
    ber1: float = Field(..., ge=0.0, le=1.0)
    ber2: float = Field(..., ge=0.0, le=1.0)
    fer: float = Field(..., ge=0.0, le=1.0)
    avg_iterations: float
    converged_fraction: float = Field(..., ge=0.0, le=1.0)
    sw_sum_slack: float


class TrialOutcome(NamedTuple):
    trial: int
    seed: int
    bit_errors1: int
    bit_errors2: int
    iterations: int
    converged: bool

    @property
    def frame_error(self):
        return self.bit_errors1 + self.bit_errors2 > 0


def build_codes(n, dv, dc, seed, mode=SimMode.ASYMMETRIC):
    """
    Codes for one experiment.

    asymmetric: source 1 is sent uncompressed (identity code), source 2 sends the
    syndrome of a random (dv, dc)-regular code.
    symmetric: time-sharing between the two corner points. Source 1 reveals
    positions [0, n//2) and compresses [n//2, n) with a (dv, dc)-regular code;
    source 2 reveals [n//2, n) and compresses [0, n//2). Each rate is about
    1/2 + dv/(2*dc), 0.75 at (3, 6), and the decoding graph splits into two
    independent corner-point problems of half the length.
    """
    mode = SimMode(mode)
    if mode is SimMode.ASYMMETRIC:
        return identity_code(n), gallager_construct(n, dv, dc, derive_seed(seed, CODE_STREAM, 2))
    half = n // 2
    first = gallager_construct(n - half, dv, dc, derive_seed(seed, CODE_STREAM, 1))
    second = gallager_construct(half, dv, dc, derive_seed(seed, CODE_STREAM, 2))
    return (
        stack_codes(embed_code(first, n, half), systematic_rows(n, range(half))),
        stack_codes(embed_code(second, n, 0), systematic_rows(n, range(half, n))),
    )


def _graph_for(config: SimConfig):
    hidden = None if config.use_correlation else 0.0
    return build_joint_graph(config.H1, config.H2, config.model, config.form, hidden=hidden)


def _run_trial(config: SimConfig, graph, trial):
    seed = derive_seed(config.master_seed, trial)
    pair = sample_pair(config.model, config.n, seed)
    s1 = syndrome(config.H1, pair.u1)
    s2 = syndrome(config.H2, pair.u2)
    result = decode(graph, s1, s2, config.decoder)
    if result.converged:
        consistent = (
            np.array_equal(syndrome(config.H1, result.u1_hat), s1)
            and np.array_equal(syndrome(config.H2, result.u2_hat), s2)
            and not correlation_parities(result.u1_hat, result.u2_hat, result.z_hat).any()
        )
        if not consistent:
            raise SWCodingError(f"trial {trial}: converged frame fails syndrome re-verification")
    return TrialOutcome(
        trial=trial,
        seed=seed,
        bit_errors1=int(np.count_nonzero(result.u1_hat != pair.u1)),
        bit_errors2=int(np.count_nonzero(result.u2_hat != pair.u2)),
        iterations=result.iterations_used,
        converged=result.converged,
    )


def _run_trial_block(config: SimConfig, trials):
    graph = _graph_for(config)
    return [_run_trial(config, graph, trial) for trial in trials]


def trial_outcomes(config: SimConfig, jobs=1, progress=False):
    """Per-trial outcomes in trial order; identical for any number of jobs."""
    if jobs <= 1 or config.trials == 1:
        graph = _graph_for(config)
        trials = tqdm(range(config.trials), desc=f"p={config.model.p}", disable=not progress, leave=False)
        return [_run_trial(config, graph, trial) for trial in trials]

    blocks = [block.tolist() for block in np.array_split(np.arange(config.trials), min(jobs, config.trials))]
    with ProcessPoolExecutor(max_workers=jobs) as executor:
        results = executor.map(_run_trial_block, repeat(config), blocks)
        finished = tqdm(results, total=len(blocks), desc=f"p={config.model.p}", disable=not progress, leave=False)
        return [outcome for block in finished for outcome in block]


def aggregate(config: SimConfig, outcomes) -> SimRecord:
    n, trials = config.n, len(outcomes)
    errors1 = sum(outcome.bit_errors1 for outcome in outcomes)
    errors2 = sum(outcome.bit_errors2 for outcome in outcomes)
    frames = sum(1 for outcome in outcomes if outcome.frame_error)
    iterations = sum(outcome.iterations for outcome in outcomes)
    converged = sum(1 for outcome in outcomes if outcome.converged)
    r1 = config.H1.m / n
    r2 = config.H2.m / n
    return SimRecord(
        p=config.model.p,
        n=n,
        r1=r1,
        r2=r2,
        trials=trials,
        ber1=errors1 / (n * trials),
        ber2=errors2 / (n * trials),
        fer=frames / trials,
        avg_iterations=iterations / trials,
        converged_fraction=converged / trials,
        sw_sum_slack=r1 + r2 - joint_entropy(config.model),
    )


def run_trials(config: SimConfig, jobs=1, progress=False) -> SimRecord:
    with tracer.start_as_current_span("run_trials"), log_latency(f"Simulation p={config.model.p} trials={config.trials}", logger):
        record = aggregate(config, trial_outcomes(config, jobs=jobs, progress=progress))
    logger.info(f"p={record.p} ber1={record.ber1} ber2={record.ber2} fer={record.fer} "
                f"avg_iterations={record.avg_iterations}")
    return record


def sweep(configs, jobs=1, progress=False):
    configs = list(configs)
    if not configs:
        raise ValueError("a sweep needs at least one configuration")
    return [run_trials(config, jobs=jobs, progress=progress) for config in configs]


def write_csv(records) -> str:
    frame = pd.DataFrame([record.model_dump() for record in records], columns=CSV_COLUMNS)
    return frame.to_csv(index=False, lineterminator="\n")


def read_csv(text):
    frame = pd.read_csv(io.StringIO(text), float_precision="round_trip")
    return [SimRecord(**row) for row in frame.to_dict(orient="records")]
