"""
Command-line frontend.

    python -m swcoding.cli [-v] <subcommand> [flags]

Results go to standard output, diagnostics to standard error. Exit codes:
0 success, 1 usage error, 2 data or format error, 3 decode did not converge.
"""
import logging
import sys

import click
import toml
from click.core import ParameterSource

from swcoding.codes.alist import read_alist_file, save_alist, write_alist_file
from swcoding.codes.bitsfile import check_block_lengths, dump_bits, read_bits_file, write_bits_file
from swcoding.codes.ldpc_code import describe_code, gallager_construct, syndrome
from swcoding.config.config import DECODER_CONFIG, SIMULATION_CONFIG
from swcoding.correlation.correlation_model import CorrelationModel, RatePair, derive_seed, sample_pair, sw_region_check
from swcoding.decoding.bp_decoder import DecoderConfig, decode
from swcoding.decoding.joint_graph import build_joint_graph
from swcoding.errors import AlistFormatError, SWCodingError
from swcoding.logging import configure_logging, log_latency
from swcoding.simulation.sim_harness import SimConfig, SimMode, build_codes, sweep, write_csv

logger = logging.getLogger(__name__)

EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NOT_CONVERGED = 3

PROBABILITY = click.FloatRange(0.0, 1.0, min_open=True, max_open=True)
MODES = click.Choice([mode.value for mode in SimMode])


class DataError(click.ClickException):
    exit_code = EXIT_DATA

    def show(self, file=None):
        click.echo(f"error: {self.format_message()}", err=True)


def _read_code(path):
    try:
        return read_alist_file(path)
    except AlistFormatError as e:
        raise DataError(f"{path}:{e.line}: {e.message}") from e


def _read_blocks(path, length):
    blocks = read_bits_file(path)
    check_block_lengths(blocks, length, path)
    return blocks


def _parse_sweep(text):
    values = []
    for word in str(text).split(","):
        try:
            value = float(word)
        except ValueError:
            raise click.BadParameter(f"{word.strip()!r} is not a number", param_hint="--sweep-p") from None
        if not 0.0 < value < 1.0:
            raise click.BadParameter(f"{value} is not strictly between 0 and 1", param_hint="--sweep-p")
        values.append(value)
    return values


@click.group()
@click.option("-v", "--verbose", count=True, help="-v for progress messages, -vv for debug output.")
def cli(verbose):
    configure_logging(verbose)


@cli.command()
@click.option("--p", "p", type=PROBABILITY, required=True, help="Pr(U1 = U2).")
@click.option("--r1", type=click.FloatRange(min=0.0), required=True)
@click.option("--r2", type=click.FloatRange(min=0.0), required=True)
def bounds(p, r1, r2):
    """Check a rate pair against the Slepian-Wolf region."""
    check = sw_region_check(CorrelationModel(p=p), RatePair(r1=r1, r2=r2))
    click.echo(f"p={p!r}")
    click.echo(f"conditional_entropy={check.conditional_entropy!r}")
    click.echo(f"joint_entropy={check.joint_entropy!r}")
    click.echo(f"admissible={'true' if check.admissible else 'false'}")
    click.echo(f"slack_r1={check.slack_r1!r}")
    click.echo(f"slack_r2={check.slack_r2!r}")
    click.echo(f"slack_sum={check.slack_sum!r}")


@cli.command()
@click.option("--n", "n", type=click.IntRange(min=1), required=True)
@click.option("--dv", type=int, default=3, show_default=True)
@click.option("--dc", type=int, default=6, show_default=True)
@click.option("--seed", type=int, required=True)
@click.option("--out", type=click.Path(dir_okay=False), help="alist file; standard output when omitted.")
def makecode(n, dv, dc, seed, out):
    """Construct a random (dv, dc)-regular parity-check matrix."""
    H = gallager_construct(n, dv, dc, seed)
    description = describe_code(H)
    logger.info(f"code n={description['n']} m={description['m']} rank={description['rank']} "
                f"effective_rate={description['effective_rate']}")
    if out:
        write_alist_file(out, H)
    else:
        click.echo(save_alist(H), nl=False)


@cli.command()
@click.option("--p", "p", type=PROBABILITY, required=True)
@click.option("--n", "n", type=click.IntRange(min=1), required=True)
@click.option("--seed", type=int, required=True)
@click.option("--blocks", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--out", required=True, help="Prefix; writes <out>.u1.bits and <out>.u2.bits.")
def sample(p, n, seed, blocks, out):
    """Draw correlated source blocks."""
    model = CorrelationModel(p=p)
    pairs = [sample_pair(model, n, derive_seed(seed, block)) for block in range(blocks)]
    write_bits_file(f"{out}.u1.bits", [pair.u1 for pair in pairs])
    write_bits_file(f"{out}.u2.bits", [pair.u2 for pair in pairs])
    logger.info(f"wrote {blocks} block(s) of {n} bits to {out}.u1.bits and {out}.u2.bits")


@cli.command()
@click.option("--code1", "--code", "code_path", required=True, help="alist file of the encoder's code.")
@click.argument("bits_path", metavar="BITS")
@click.option("--out", type=click.Path(dir_okay=False), help="Syndrome file; standard output when omitted.")
def encode(code_path, bits_path, out):
    """Compress every block of a bits file to its syndrome."""
    H = _read_code(code_path)
    blocks = _read_blocks(bits_path, H.n)
    syndromes = [syndrome(H, block) for block in blocks]
    if out:
        write_bits_file(out, syndromes)
    else:
        click.echo(dump_bits(syndromes), nl=False)


@cli.command("decode")
@click.option("--code1", required=True, type=click.Path(dir_okay=False))
@click.option("--code2", required=True, type=click.Path(dir_okay=False))
@click.option("--syn1", required=True, type=click.Path(dir_okay=False))
@click.option("--syn2", required=True, type=click.Path(dir_okay=False))
@click.option("--p", "p", type=PROBABILITY, required=True)
@click.option("--max-iters", type=click.IntRange(min=1), default=DECODER_CONFIG["max_iterations"], show_default=True)
@click.option("--damping", type=click.FloatRange(0.0, 1.0, max_open=True), default=DECODER_CONFIG["damping"],
              show_default=True)
@click.option("--out", help="Prefix; writes <out>.u1.bits and <out>.u2.bits instead of standard output.")
@click.option("--trace", is_flag=True, help="Per-iteration trace on standard error.")
def decode_command(code1, code2, syn1, syn2, p, max_iters, damping, out, trace):
    """
    Jointly decode both sources from their syndromes.

    Standard output holds a u1 line and a u2 line per block. Exits with 3 when
    any block fails to converge; the last hard decisions are still written.
    """
    H1 = _read_code(code1)
    H2 = _read_code(code2)
    first = _read_blocks(syn1, H1.m)
    second = _read_blocks(syn2, H2.m)
    if len(first) != len(second):
        raise DataError(f"{syn1} holds {len(first)} block(s) but {syn2} holds {len(second)}")

    graph = build_joint_graph(H1, H2, CorrelationModel(p=p))
    config = DecoderConfig(max_iterations=max_iters, damping=damping)
    decoded1, decoded2, failures = [], [], 0
    with log_latency(f"Decoding {len(first)} block(s)", logger):
        for block, (s1, s2) in enumerate(zip(first, second)):
            sink = (lambda line, block=block: click.echo(f"block={block} {line}", err=True)) if trace else None
            result = decode(graph, s1, s2, config, trace=sink)
            if not result.converged:
                failures += 1
                logger.warning(f"block {block} did not converge in {result.iterations_used} iterations")
            decoded1.append(result.u1_hat)
            decoded2.append(result.u2_hat)

    if out:
        write_bits_file(f"{out}.u1.bits", decoded1)
        write_bits_file(f"{out}.u2.bits", decoded2)
    else:
        for u1_hat, u2_hat in zip(decoded1, decoded2):
            click.echo(dump_bits([u1_hat, u2_hat]), nl=False)
    return EXIT_NOT_CONVERGED if failures else 0


@cli.command()
@click.option("--config", "config_path", type=click.Path(dir_okay=False),
              help="TOML file whose keys mirror these flags; explicit flags win.")
@click.option("--n", "n", type=click.IntRange(min=1))
@click.option("--dv", type=int, default=3, show_default=True)
@click.option("--dc", type=int, default=6, show_default=True)
@click.option("--seed", type=int)
@click.option("--p", "p", type=PROBABILITY)
@click.option("--sweep-p", "sweep_p", help="Comma-separated list of p values.")
@click.option("--trials", type=click.IntRange(min=1), default=SIMULATION_CONFIG["trials"], show_default=True)
@click.option("--mode", type=MODES, default=SIMULATION_CONFIG["mode"], show_default=True)
@click.option("--jobs", type=click.IntRange(min=1), default=SIMULATION_CONFIG["jobs"], show_default=True)
@click.option("--max-iters", "max_iters", type=click.IntRange(min=1), default=DECODER_CONFIG["max_iterations"],
              show_default=True)
@click.option("--damping", type=click.FloatRange(0.0, 1.0, max_open=True), default=DECODER_CONFIG["damping"],
              show_default=True)
@click.option("--code1", type=click.Path(dir_okay=False), help="alist file used instead of constructing code 1.")
@click.option("--code2", type=click.Path(dir_okay=False), help="alist file used instead of constructing code 2.")
@click.option("--no-correlation", "no_correlation", is_flag=True, help="Force the hidden LLR to 0.")
@click.option("--independent-seeds", "independent_seeds", is_flag=True,
              help="Give sweep point k the seed derive_seed(--seed, k) instead of --seed itself.")
@click.option("--progress", is_flag=True, help="Progress bar on standard error.")
@click.pass_context
def simulate(ctx, config_path, **options):
    """
    Monte Carlo sweep; standard output is exactly the CSV.

    Every sweep point uses the same --seed, so trial t sees the same source
    draws at every p. --independent-seeds gives each point its own stream.
    """
    if config_path:
        options = _merge_config_file(ctx, config_path, options)

    if options["seed"] is None:
        raise click.UsageError("Missing option '--seed'.", ctx=ctx)
    if (options["p"] is None) == (options["sweep_p"] is None):
        raise click.UsageError("Give exactly one of --p and --sweep-p.", ctx=ctx)
    p_values = [options["p"]] if options["p"] is not None else _parse_sweep(options["sweep_p"])

    mode = SimMode(options["mode"])
    if options["code1"] or options["code2"]:
        if not (options["code1"] and options["code2"]):
            raise click.UsageError("--code1 and --code2 must be given together.", ctx=ctx)
        H1, H2 = _read_code(options["code1"]), _read_code(options["code2"])
    else:
        if options["n"] is None:
            raise click.UsageError("Missing option '--n' (or give --code1 and --code2).", ctx=ctx)
        H1, H2 = build_codes(options["n"], options["dv"], options["dc"], options["seed"], mode)

    decoder = DecoderConfig(max_iterations=options["max_iters"], damping=options["damping"])
    configs = [
        SimConfig(model=CorrelationModel(p=p), H1=H1, H2=H2, trials=options["trials"],
                  master_seed=_point_seed(options, index), decoder=decoder, mode=mode,
                  use_correlation=not options["no_correlation"])
        for index, p in enumerate(p_values)
    ]
    with log_latency(f"Sweep over {len(configs)} point(s)", logger):
        records = sweep(configs, jobs=options["jobs"], progress=options["progress"])
    click.echo(write_csv(records), nl=False)


def _point_seed(options, index):
    if options["independent_seeds"]:
        return derive_seed(options["seed"], index)
    return options["seed"]


def _merge_config_file(ctx, path, options):
    """Fill options left at their defaults from a TOML file (keys use underscores or dashes)."""
    try:
        settings = toml.load(path)
    except toml.TomlDecodeError as e:
        raise DataError(f"{path}:{e.lineno}: {e.msg}") from e
    merged = dict(options)
    for key, value in settings.items():
        name = key.replace("-", "_")
        if name not in options:
            raise DataError(f"{path}: unknown setting {key!r}")
        if ctx.get_parameter_source(name) is ParameterSource.COMMANDLINE:
            continue
        if name == "sweep_p" and isinstance(value, list):
            value = ",".join(str(item) for item in value)
        param = next(param for param in ctx.command.params if param.name == name)
        try:
            merged[name] = param.type_cast_value(ctx, value)
        except click.BadParameter as e:
            raise DataError(f"{path}: {key}: {e.format_message()}") from e
    return merged


def main(argv=None):
    try:
        result = cli.main(args=argv, prog_name="swcoding", standalone_mode=False)
    except click.UsageError as e:
        e.show()
        return EXIT_USAGE
    except click.ClickException as e:
        e.show()
        return e.exit_code
    except click.exceptions.Abort:
        click.echo("Aborted!", err=True)
        return EXIT_USAGE
    except (SWCodingError, ValueError, OSError) as e:
        click.echo(f"error: {e}", err=True)
        return EXIT_DATA
    return result if isinstance(result, int) else 0


if __name__ == "__main__":
    sys.exit(main())
