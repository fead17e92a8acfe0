import logging
import math
from typing import NamedTuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from swcoding.config.config import LLR_MAX

logger = logging.getLogger(__name__)

SEED_MASK = (1 << 64) - 1

# Log-likelihood ratio in nats, L(x) = ln(Pr(x=0)/Pr(x=1)).
Llr = float


class CorrelationModel(BaseModel):
    """
    Symmetric correlation between two fair binary sources.

    p is Pr(U1 = U2). Equivalently U2 = U1 XOR Z where Z is Bernoulli(1 - p),
    the error bit of a binary symmetric channel between the sources.
    Boundary values 0 and 1 are rejected: they make the hidden LLR infinite.
    """
    model_config = ConfigDict(frozen=True)

    p: float = Field(..., gt=0.0, lt=1.0)

    @property
    def crossover(self) -> float:
        return 1.0 - self.p


class RatePair(BaseModel):
    model_config = ConfigDict(frozen=True)

    r1: float = Field(..., ge=0.0)
    r2: float = Field(..., ge=0.0)

    @property
    def total(self) -> float:
        return self.r1 + self.r2


class CorrelatedPair(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    u1: np.ndarray
    u2: np.ndarray
    z: np.ndarray

    @model_validator(mode="after")
    def check_xor_relation(self):
        n = len(self.u1)
        if n < 1 or len(self.u2) != n or len(self.z) != n:
            raise ValueError("u1, u2 and z must have the same positive length")
        if np.any(self.u2 != (self.u1 ^ self.z)):
            raise ValueError("u2 must equal u1 XOR z at every index")
        return self

    @property
    def n(self) -> int:
        return len(self.u1)


class RegionCheck(NamedTuple):
    admissible: bool
    slack_r1: float
    slack_r2: float
    slack_sum: float
    conditional_entropy: float
    joint_entropy: float


def binary_entropy(q):
    """h2(q) in bits, with 0*log2(0) taken as 0."""
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"binary entropy needs a probability in [0, 1], got {q}")
    if q == 0.0 or q == 1.0:
        return 0.0
    return -q * math.log2(q) - (1.0 - q) * math.log2(1.0 - q)


def conditional_entropy(model: CorrelationModel):
    # H(U1|U2) = H(U2|U1)
    return binary_entropy(model.p)


def joint_entropy(model: CorrelationModel):
    # H(U1,U2) = H(U2) + H(U1|U2) with H(U2) = 1 for a fair source
    return 1.0 + conditional_entropy(model)


def clamp_llr(value) -> Llr:
    return float(min(LLR_MAX, max(-LLR_MAX, value)))


def hidden_llr(model: CorrelationModel) -> Llr:
    """
    Constant prior LLR of the hidden error bit Z.

    Pr(Z=0) = p, so under L = ln(P0/P1) this is ln(p/(1-p)): positive when the
    sources agree more often than not. Its magnitude equals |ln((1-p)/p)|.
    """
    return clamp_llr(math.log(model.p) - math.log1p(-model.p))


def derive_seed(master_seed, *keys):
    """
    Mix a 64-bit master seed with integer keys (trial index, code index, ...).

    The mix is numpy's SeedSequence hash over [master_seed, *keys], so streams
    for different keys are independent and reproducible.
    """
    words = [int(master_seed) & SEED_MASK] + [int(key) & SEED_MASK for key in keys]
    state = np.random.SeedSequence(words).generate_state(2, dtype=np.uint32)
    return int(state[0]) | (int(state[1]) << 32)


def sample_pair(model: CorrelationModel, n, seed) -> CorrelatedPair:
    if n < 1:
        raise ValueError(f"block length must be positive, got {n}")
    rng = np.random.default_rng(int(seed) & SEED_MASK)
    u1 = rng.integers(0, 2, size=n, dtype=np.uint8)
    # thresholding one uniform draw per index keeps z nested across p for a fixed seed
    z = (rng.random(n) < model.crossover).astype(np.uint8)
    return CorrelatedPair(u1=u1, u2=u1 ^ z, z=z)


def sw_region_check(model: CorrelationModel, rates: RatePair) -> RegionCheck:
    h = conditional_entropy(model)
    joint = 1.0 + h
    slack_r1 = rates.r1 - h
    slack_r2 = rates.r2 - h
    slack_sum = rates.r1 + rates.r2 - joint
    admissible = slack_r1 >= 0.0 and slack_r2 >= 0.0 and slack_sum >= 0.0
    logger.debug(f"Slepian-Wolf check p={model.p} r1={rates.r1} r2={rates.r2}: {admissible}")
    return RegionCheck(admissible, slack_r1, slack_r2, slack_sum, h, joint)
