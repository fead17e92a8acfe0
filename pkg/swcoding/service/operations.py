import logging

from swcoding.codes.alist import load_alist, save_alist
from swcoding.codes.bitsfile import check_block_lengths, dump_bits, load_bits
from swcoding.codes.ldpc_code import describe_code, gallager_construct, syndrome
from swcoding.correlation.correlation_model import CorrelationModel, RatePair, sw_region_check
from swcoding.decoding.bp_decoder import DecoderConfig, decode
from swcoding.decoding.joint_graph import build_joint_graph
from swcoding.errors import SWCodingError
from swcoding.simulation.sim_harness import SimConfig, SimMode, build_codes, sweep, write_csv

logger = logging.getLogger(__name__)


def compute_bounds(p, r1, r2):
    """
    Slepian-Wolf admissibility of (r1, r2) for correlation parameter p.

    Returns (result, None) on success and (None, error message) otherwise.
    """
    try:
        check = sw_region_check(CorrelationModel(p=p), RatePair(r1=r1, r2=r2))
        return check._asdict(), None
    except ValueError as e:
        return None, str(e)


def make_code(n, dv, dc, seed):
    try:
        H = gallager_construct(n, dv, dc, seed)
        description = describe_code(H)
        logger.info(f"constructed ({dv},{dc}) code n={n} rank={description['rank']}")
        return {"alist": save_alist(H), **description}, None
    except (SWCodingError, ValueError) as e:
        return None, str(e)


def encode_blocks(alist_text, blocks):
    try:
        H = load_alist(alist_text)
        bits = load_bits("\n".join(blocks))
        check_block_lengths(bits, H.n)
        syndromes = [syndrome(H, block) for block in bits]
        return {"syndromes": dump_bits(syndromes).splitlines()}, None
    except (SWCodingError, ValueError) as e:
        return None, str(e)


def decode_blocks(alist1, alist2, syndromes1, syndromes2, p, max_iterations=None, damping=None):
    try:
        H1 = load_alist(alist1)
        H2 = load_alist(alist2)
        first = load_bits("\n".join(syndromes1))
        second = load_bits("\n".join(syndromes2))
        if len(first) != len(second):
            return None, f"got {len(first)} syndromes for source 1 and {len(second)} for source 2"
        check_block_lengths(first, H1.m)
        check_block_lengths(second, H2.m)
        options = {}
        if max_iterations is not None:
            options["max_iterations"] = max_iterations
        if damping is not None:
            options["damping"] = damping
        config = DecoderConfig(**options)
        graph = build_joint_graph(H1, H2, CorrelationModel(p=p))
        decoded = []
        for s1, s2 in zip(first, second):
            result = decode(graph, s1, s2, config)
            decoded.append({
                "u1": dump_bits([result.u1_hat]).strip(),
                "u2": dump_bits([result.u2_hat]).strip(),
                "converged": result.converged,
                "iterations": result.iterations_used,
            })
        return {"blocks": decoded, "converged": all(block["converged"] for block in decoded)}, None
    except (SWCodingError, ValueError) as e:
        return None, str(e)


def simulate_csv(p_values, n, dv, dc, seed, trials, mode=SimMode.ASYMMETRIC, max_iterations=None,
                 damping=None, use_correlation=True, jobs=1):
    try:
        H1, H2 = build_codes(n, dv, dc, seed, mode)
        options = {}
        if max_iterations is not None:
            options["max_iterations"] = max_iterations
        if damping is not None:
            options["damping"] = damping
        decoder = DecoderConfig(**options)
        configs = [
            SimConfig(model=CorrelationModel(p=p), H1=H1, H2=H2, trials=trials, master_seed=seed,
                      decoder=decoder, mode=mode, use_correlation=use_correlation)
            for p in p_values
        ]
        return write_csv(sweep(configs, jobs=jobs)), None
    except (SWCodingError, ValueError) as e:
        return None, str(e)
