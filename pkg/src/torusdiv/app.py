# -*- coding: utf-8 -*-
"""
Command line front-end for torusdiv.

Subcommands load an instance (or build one from options), run one
operation and print a report on stdout. Logs go to stderr through a
colorlog handler. Exit codes: 0 for a certificate or an affirmative
answer, 1 for a verified negative or a diagnostic, 2 for usage and
input errors.
"""

import json
import logging
import sys
from dataclasses import replace
from typing import Any, Optional

import click
import colorlog
from pydantic import ValidationError

from . import __version__
from .arith import PrimeSet, RationalParseError
from .certificates import Diagnostic, bbs_conclusion, certify_gene, certify_morphism, erdos, residue_evidence
from .counting import (
    DegenerateGridError,
    LatticeZeroSet,
    PointBudgetError,
    ce_zero_sets,
    ctex_zero_sets,
    gaussian_lattice,
    geometric_grid,
    germ_contains,
    growth_comparable,
    growth_fit,
    integer_lattice,
)
from .divisor import (
    InstanceError,
    ProblemInstance,
    ScanError,
    extend_s,
    hypothesis_check,
    scan_ideal_inclusion,
    scan_support_inclusion,
    torsion_order,
)
from .factor_engine import FactorSettings, configure_default
from .laurent import LaurentError, LaurentParseError, parse, stabilizer
from .report import render
from .settings import DEFAULT_CONFIG_PATH, ConfigError, RunConfig, load_config, resolve_threads

logger = logging.getLogger("torusdiv")

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT = 2

_INPUT_ERRORS = (
    json.JSONDecodeError,
    ValidationError,
    InstanceError,
    LaurentParseError,
    LaurentError,
    RationalParseError,
    ConfigError,
)


class InputError(click.ClickException):
    exit_code = EXIT_INPUT


def setup_logging(verbose: bool) -> None:
    handler = colorlog.StreamHandler(sys.stderr)
    handler.setFormatter(
        colorlog.ColoredFormatter("%(log_color)s%(levelname)-8s%(reset)s %(name)s: %(message)s")
    )
    logger.handlers[:] = [handler]
    logger.setLevel(logging.DEBUG if verbose else logging.WARNING)
    logger.propagate = False


def _config(ctx: click.Context) -> RunConfig:
    return ctx.obj["config"]


def _apply(config: RunConfig, **overrides: Any) -> RunConfig:
    """RunConfig with the options that were given on the command line."""
    given = {k: v for k, v in overrides.items() if v is not None}
    try:
        return replace(config, **given).validate()
    except ConfigError as exc:
        raise InputError(str(exc)) from exc


def _parse_primes(text: Optional[str]) -> list[int]:
    if not text:
        return []
    try:
        return [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise InputError(f"--s-primes expects a comma separated list of primes, got {text!r}") from None


def _load_instance(config: RunConfig, s_primes: Optional[str]) -> ProblemInstance:
    if not config.instance:
        raise click.UsageError("an instance file is required (--instance or the config file)")
    try:
        instance = ProblemInstance.from_file(config.instance)
        extra = _parse_primes(s_primes)
        if extra:
            instance = replace(instance, s_primes=instance.s_primes.union(PrimeSet.of(extra)))
    except FileNotFoundError:
        raise InputError(f"instance file not found: {config.instance}") from None
    except _INPUT_ERRORS as exc:
        raise InputError(f"{config.instance}: {exc}") from exc
    return instance


def _emit(ctx: click.Context, payload: dict, title: str, code: int) -> None:
    click.echo(render(payload, _config(ctx).output, title))
    ctx.exit(code)


def _result_payload(result, instance: Optional[ProblemInstance]) -> tuple[dict, int]:
    if isinstance(result, Diagnostic):
        payload = {"kind": "diagnostic", **result.to_json()}
        code = EXIT_NEGATIVE
    else:
        payload = result.to_json()
        code = EXIT_OK
    if instance is not None:
        payload["instance"] = instance.to_json()
    return payload, code


instance_option = click.option(
    "--instance", "instance", type=click.Path(dir_okay=False), default=None, help="Instance JSON file."
)
s_primes_option = click.option("--s-primes", default=None, help="Extra primes for S, e.g. 2,3.")
output_option = click.option("--output", type=click.Choice(["text", "json"]), default=None)
n_max_option = click.option("--n-max", "n_max", type=int, default=None)
threshold_option = click.option("--threshold", type=float, default=None)


@click.group()
@click.version_option(__version__, prog_name="torusdiv")
@click.option("--config", "config_path", type=click.Path(dir_okay=False), default=DEFAULT_CONFIG_PATH,
              show_default=True, help="RunConfig JSON file.")
@click.option("--verbose", is_flag=True, help="Log debug output to stderr.")
@click.option("--seed", type=int, default=None, help="Seed for randomized factoring.")
@click.pass_context
def cli(ctx: click.Context, config_path: str, verbose: bool, seed: Optional[int]) -> None:
    """Divisibility of F1(g1^n) and F2(g2^n) over the S-integers."""
    setup_logging(verbose)
    config = load_config(config_path)
    if seed is not None:
        config.seed = seed
    try:
        config.threads = resolve_threads(config)
    except ConfigError as exc:
        raise InputError(str(exc)) from exc
    configure_default(FactorSettings(seed=config.seed), logging.getLogger("torusdiv.factor_engine"))
    ctx.ensure_object(dict)
    ctx.obj["config"] = config


@cli.command()
@instance_option
@s_primes_option
@n_max_option
@threshold_option
@output_option
@click.option("--mode", type=click.Choice(["ideal", "support", "both"]), default="ideal", show_default=True)
@click.pass_context
def scan(ctx, instance, s_primes, n_max, threshold, output, mode):
    """Scan n = 1..n_max for ideal and support inclusions."""
    config = _apply(_config(ctx), subcommand="scan", instance=instance, n_max=n_max,
                    threshold=threshold, output=output)
    ctx.obj["config"] = config
    inst = extend_s(_load_instance(config, s_primes))
    payload: dict = {"kind": "scan", "mode": mode, "n_max": config.n_max, "instance": inst.to_json()}
    code = EXIT_OK
    if mode in ("ideal", "both"):
        k = torsion_order(inst)
        try:
            hits = scan_ideal_inclusion(inst, config.n_max, config.threads)
        except ScanError as exc:
            payload["ideal_stopped_at"] = exc.n
            hits = exc.hits
            code = EXIT_NEGATIVE
        shares = residue_evidence(hits, config.n_max, k)
        payload["ideal_hits"] = hits
        payload["torsion_order"] = k
        payload["residue_evidence"] = {str(r): round(s, 6) for r, s in shares.items()}
        if max(shares.values()) < config.threshold:
            code = EXIT_NEGATIVE
    if mode in ("support", "both"):
        try:
            hits = scan_support_inclusion(inst, config.n_max, config.threads)
        except ScanError as exc:
            payload["support_stopped_at"] = exc.n
            hits = exc.hits
            code = EXIT_NEGATIVE
        payload["support_hits"] = hits
        if len(hits) / config.n_max < config.threshold:
            code = EXIT_NEGATIVE
    _emit(ctx, payload, "scan", code)


@cli.command()
@instance_option
@s_primes_option
@n_max_option
@threshold_option
@output_option
@click.option("--no-evidence", is_flag=True, help="Skip the numeric evidence gate.")
@click.pass_context
def certify(ctx, instance, s_primes, n_max, threshold, output, no_evidence):
    """Étale morphism certificate."""
    config = _apply(_config(ctx), subcommand="certify", instance=instance, n_max=n_max,
                    threshold=threshold, output=output)
    ctx.obj["config"] = config
    inst = _load_instance(config, s_primes)
    result = certify_morphism(inst, None if no_evidence else config.n_max, config.threshold, config.threads)
    payload, code = _result_payload(result, inst)
    _emit(ctx, payload, "morphism certificate", code)


@cli.command()
@instance_option
@s_primes_option
@n_max_option
@threshold_option
@output_option
@click.option("--no-evidence", is_flag=True, help="Skip the numeric evidence gate.")
@click.pass_context
def gene(ctx, instance, s_primes, n_max, threshold, output, no_evidence):
    """Common quotient torus G0 with maps φ, ψ and divisor E."""
    config = _apply(_config(ctx), subcommand="gene", instance=instance, n_max=n_max,
                    threshold=threshold, output=output)
    ctx.obj["config"] = config
    inst = _load_instance(config, s_primes)
    result = certify_gene(inst, None if no_evidence else config.n_max, config.threshold, config.threads)
    payload, code = _result_payload(result, inst)
    _emit(ctx, payload, "gene certificate", code)


@cli.command()
@instance_option
@s_primes_option
@n_max_option
@click.option("--threshold", type=float, default=1.0, show_default=True)
@output_option
@click.pass_context
def bbs(ctx, instance, s_primes, n_max, threshold, output):
    """Exponent h and matrix A with g2^h = φ_A(g1) from support inclusions."""
    config = _apply(_config(ctx), subcommand="bbs", instance=instance, n_max=n_max,
                    threshold=threshold, output=output)
    ctx.obj["config"] = config
    inst = _load_instance(config, s_primes)
    result = bbs_conclusion(inst, config.n_max, config.threshold, config.cyclotomic_bound, config.threads)
    payload, code = _result_payload(result, inst)
    _emit(ctx, payload, "support conclusion", code)


@cli.command("erdos")
@click.option("--x", "x", type=int, required=True)
@click.option("--y", "y", type=int, required=True)
@n_max_option
@output_option
@click.pass_context
def erdos_command(ctx, x, y, n_max, output):
    """Support inclusion for x^n - 1 and y^n - 1, and y as a power of x."""
    config = _apply(_config(ctx), subcommand="erdos", n_max=n_max, output=output)
    ctx.obj["config"] = config
    try:
        report = erdos(x, y, config.n_max)
    except InstanceError as exc:
        raise InputError(str(exc)) from exc
    code = EXIT_OK if report.inclusion_holds and report.k is not None else EXIT_NEGATIVE
    _emit(ctx, report.to_json(), "erdos", code)


@cli.command("stabilizer")
@click.option("--poly", required=True, help='Laurent polynomial, e.g. "X1^2 - 1".')
@click.option("--dim", type=int, required=True)
@output_option
@click.pass_context
def stabilizer_command(ctx, poly, dim, output):
    """Stabilizer of F = 0 as (dimension, invariant factors)."""
    config = _apply(_config(ctx), subcommand="stabilizer", output=output)
    ctx.obj["config"] = config
    try:
        F = parse(poly, dim)
        info = stabilizer(F)
    except (LaurentParseError, LaurentError) as exc:
        raise InputError(str(exc)) from exc
    payload = {"kind": "stabilizer", "poly": F.to_string(), "stabilizer": str(info), **info.to_json()}
    _emit(ctx, payload, "stabilizer", EXIT_OK)


@cli.command("hypothesis")
@instance_option
@s_primes_option
@output_option
@click.pass_context
def hypothesis_command(ctx, instance, s_primes, output):
    """
    Finite component stabilizers, trivial Stab(D2) and Zariski-dense g1, g2.

    Coordinates equal to 1 or -1, or multiplicatively dependent ones, fail
    the density check.
    """
    config = _apply(_config(ctx), subcommand="hypothesis", instance=instance, output=output)
    ctx.obj["config"] = config
    inst = _load_instance(config, s_primes)
    try:
        report = hypothesis_check(inst)
    except InstanceError as exc:
        raise InputError(str(exc)) from exc
    payload = {"kind": "hypothesis", "instance": inst.to_json(), **report.to_json()}
    _emit(ctx, payload, "hypotheses", EXIT_OK if report.passed else EXIT_NEGATIVE)


def _zero_sets(example: str, zero_set: Optional[str], tau: str, alpha: Optional[str], precision: int):
    if zero_set:
        try:
            with open(zero_set, "r", encoding="utf-8") as f:
                data = json.load(f)
            return [("zero_set", LatticeZeroSet.from_json(data, precision))]
        except FileNotFoundError:
            raise InputError(f"zero set file not found: {zero_set}") from None
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise InputError(f"{zero_set}: {exc}") from exc
    try:
        if example == "integer":
            return [("Z", integer_lattice(precision))]
        if example == "gaussian":
            return [("Z[i]", gaussian_lattice(precision))]
        tau_pair = tuple(tau.split(",")) if "," in tau else tau
        pair = ce_zero_sets(tau_pair, precision) if example == "ce" else ctex_zero_sets(alpha, precision)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    return [("f1*D1", pair[0]), ("f2*D2", pair[1])]


@cli.command("counting")
@click.option("--example", type=click.Choice(["ce", "ctex", "integer", "gaussian"]), default="ce", show_default=True)
@click.option("--zero-set", type=click.Path(dir_okay=False), default=None, help="Zero set JSON file.")
@click.option("--tau", default="1/2,1", show_default=True, help="τ as re,im.")
@click.option("--alpha", default=None, help="α for ctex (default √2).")
@click.option("--r-min", type=float, default=10.0, show_default=True)
@click.option("--r-max", type=float, default=1000.0, show_default=True)
@click.option("--count", type=int, default=12, show_default=True)
@click.option("--point-budget", type=int, default=None, help="Largest number of lattice points to enumerate.")
@output_option
@click.pass_context
def counting_command(ctx, example, zero_set, tau, alpha, r_min, r_max, count, point_budget, output):
    """Growth of N(r) for the zero sets of f*D."""
    config = _apply(_config(ctx), subcommand="counting", point_budget=point_budget, output=output)
    ctx.obj["config"] = config
    sets = _zero_sets(example, zero_set, tau, alpha, config.precision)
    radii = geometric_grid(r_min, r_max, count)
    try:
        fits = [growth_fit(Z, radii, config.point_budget) for _, Z in sets]
        payload: dict = {
            "kind": "counting",
            "example": "file" if zero_set else example,
            "r_min": r_min,
            "r_max": r_max,
            "fits": [
                {"set": label, "exponent": round(fit.exponent, 6),
                 "coefficient": round(fit.coefficient, 6), "order": fit.order}
                for (label, _), fit in zip(sets, fits)
            ],
        }
        if len(sets) == 2:
            payload["germ_inclusion"] = germ_contains(sets[1][1], sets[0][1], 1.0, r_max, config.point_budget)
            payload["same_growth"] = growth_comparable(fits[0], fits[1])
    except (DegenerateGridError, PointBudgetError) as exc:
        raise InputError(str(exc)) from exc
    _emit(ctx, payload, "counting functions", EXIT_OK)


def main(argv: Optional[list[str]] = None) -> int:
    """Run the CLI and return its exit code."""
    try:
        rv = cli.main(args=argv, prog_name="torusdiv", standalone_mode=False)
    except click.ClickException as exc:
        exc.show()
        return exc.exit_code
    except click.exceptions.Abort:
        click.echo("Aborted!", err=True)
        return EXIT_NEGATIVE
    return rv if isinstance(rv, int) else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
