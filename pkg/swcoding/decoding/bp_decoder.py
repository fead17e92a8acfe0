import logging
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from swcoding.config.config import DECODER_CONFIG, LLR_MAX
from swcoding.decoding.joint_graph import Z, JointTannerGraph
from swcoding.errors import DecoderNumericError, DimensionError

logger = logging.getLogger(__name__)


class DecoderConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    max_iterations: int = Field(DECODER_CONFIG["max_iterations"], ge=1)
    damping: float = Field(DECODER_CONFIG["damping"], ge=0.0, lt=1.0)
    schedule: Literal["flooding"] = "flooding"
    early_stop: bool = DECODER_CONFIG["early_stop"]


class DecodeResult(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    u1_hat: np.ndarray
    u2_hat: np.ndarray
    z_hat: np.ndarray
    converged: bool
    iterations_used: int
    posterior_llrs: np.ndarray


def _exclusive_products(values):
    """Row-wise product of every other entry, without division."""
    prefix = np.ones_like(values)
    suffix = np.ones_like(values)
    prefix[:, 1:] = np.cumprod(values[:, :-1], axis=1)
    suffix[:, :-1] = np.cumprod(values[:, :0:-1], axis=1)[:, ::-1]
    return prefix * suffix


def _exclusive_sums(values):
    prefix = np.zeros_like(values)
    suffix = np.zeros_like(values)
    prefix[:, 1:] = np.cumsum(values[:, :-1], axis=1)
    suffix[:, :-1] = np.cumsum(values[:, :0:-1], axis=1)[:, ::-1]
    return prefix + suffix


class BeliefPropagationSession:
    """
    Flooding sum-product over one joint graph, owning its message buffers.

    Check rule for a check with target parity b and constant factor c
    (c = tanh(param/2) on folded correlation checks, 1 elsewhere):
        out = 2 atanh((1 - 2b) * c * prod_{other neighbours} tanh(L_in / 2))
    clamped to +-LLR_MAX. Code checks take b from the syndrome, correlation
    checks have b = 0.
    """

    def __init__(self, graph: JointTannerGraph, s1, s2, config: DecoderConfig = None):
        s1 = np.asarray(s1, dtype=np.uint8)
        s2 = np.asarray(s2, dtype=np.uint8)
        if len(s1) != graph.m1 or len(s2) != graph.m2:
            raise DimensionError(
                f"syndrome lengths ({len(s1)}, {len(s2)}) do not match code rows ({graph.m1}, {graph.m2})"
            )
        self.graph = graph
        self.config = config or DecoderConfig()

        self.parity = np.concatenate([s1, s2, np.zeros(graph.n, dtype=np.uint8)])
        folded = graph.folded_correlation_mask()
        constants = np.ones(graph.num_checks)
        constants[folded] = np.tanh(graph.check_params[folded] / 2.0)
        self.check_factor = (1.0 - 2.0 * self.parity) * constants
        self.always_satisfied = folded

        self._check_mask = graph.check_slots >= 0
        self._check_edges = graph.check_slots[self._check_mask]
        self._var_mask = graph.var_slots >= 0
        self._var_edges = graph.var_slots[self._var_mask]
        self._hidden_vars = np.flatnonzero(graph.var_role == Z)

        self.var_to_check = graph.priors[graph.edge_var].astype(float)
        self.check_to_var = np.zeros(graph.num_edges)
        self.posterior = graph.priors.astype(float)
        self.iteration = 0

    def step(self):
        graph = self.graph

        tanh_in = np.ones(graph.check_slots.shape)
        tanh_in[self._check_mask] = np.tanh(self.var_to_check[self._check_edges] / 2.0)
        extrinsic = _exclusive_products(tanh_in) * self.check_factor[:, None]
        updated = np.empty(graph.num_edges)
        with np.errstate(divide="ignore"):
            updated[self._check_edges] = 2.0 * np.arctanh(extrinsic[self._check_mask])
        np.clip(updated, -LLR_MAX, LLR_MAX, out=updated)
        if not np.isfinite(updated).all():
            raise DecoderNumericError(f"non-finite check message at iteration {self.iteration + 1}")
        if self.config.damping > 0.0:
            updated = (1.0 - self.config.damping) * updated + self.config.damping * self.check_to_var
        self.check_to_var = updated

        incoming = np.zeros(graph.var_slots.shape)
        incoming[self._var_mask] = self.check_to_var[self._var_edges]
        outgoing = graph.priors[:, None] + _exclusive_sums(incoming)
        self.var_to_check = np.empty(graph.num_edges)
        self.var_to_check[self._var_edges] = outgoing[self._var_mask]
        self.posterior = graph.priors + incoming.sum(axis=1)
        self.iteration += 1

    def hard_decisions(self):
        """bit = 1 iff posterior < 0; hidden bits are replaced by u1 XOR u2."""
        bits = (self.posterior < 0.0).astype(np.uint8)
        n = self.graph.n
        if len(self._hidden_vars):
            bits[self._hidden_vars] = bits[:n] ^ bits[n:2 * n]
        return bits

    def unsatisfied_checks(self, bits=None):
        if bits is None:
            bits = self.hard_decisions()
        graph = self.graph
        table = np.zeros(graph.check_slots.shape, dtype=np.int64)
        table[self._check_mask] = bits[graph.edge_var[self._check_edges]]
        unsatisfied = (table.sum(axis=1) % 2 != self.parity) & ~self.always_satisfied
        return int(unsatisfied.sum())

    def result(self, converged):
        bits = self.hard_decisions()
        n = self.graph.n
        u1_hat = bits[:n].copy()
        u2_hat = bits[n:2 * n].copy()
        return DecodeResult(
            u1_hat=u1_hat,
            u2_hat=u2_hat,
            z_hat=u1_hat ^ u2_hat,
            converged=converged,
            iterations_used=self.iteration,
            posterior_llrs=self.posterior.copy(),
        )


def decode(graph: JointTannerGraph, s1, s2, config: DecoderConfig = None, trace=None) -> DecodeResult:
    """
    Decode both sources from their syndromes and the correlation model alone.

    Non-convergence is a normal outcome: the result carries converged=False and
    the last hard decisions. trace, when given, receives one line per iteration.
    """
    config = config or DecoderConfig()
    session = BeliefPropagationSession(graph, s1, s2, config)
    converged = False
    for _ in range(config.max_iterations):
        session.step()
        bits = session.hard_decisions()
        unsatisfied = session.unsatisfied_checks(bits)
        converged = unsatisfied == 0
        if trace is not None or logger.isEnabledFor(logging.DEBUG):
            line = (f"iteration={session.iteration} unsatisfied={unsatisfied} "
                    f"mean_abs_posterior={float(np.abs(session.posterior).mean())!r}")
            if trace is not None:
                trace(line)
            else:
                logger.debug(line)
        if converged and config.early_stop:
            break
    return session.result(converged)


def correlation_parities(u1_hat, u2_hat, z_hat):
    """Per-index value of u1 XOR u2 XOR z; all zeros when every correlation check holds."""
    return np.asarray(u1_hat, dtype=np.uint8) ^ np.asarray(u2_hat, dtype=np.uint8) ^ np.asarray(z_hat, dtype=np.uint8)
