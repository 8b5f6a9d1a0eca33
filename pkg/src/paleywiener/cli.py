"""Command line front end.

Exit codes: 0 success, 1 usage/parse/parameter error or failed check,
2 indeterminate or inconclusive result, 3 numerical non-convergence.
Settings come from ``--config`` (an INI file with a ``[run]`` section) and
are overridden by explicit flags.
"""

import configparser
from dataclasses import asdict, dataclass
import functools
import io
import json
import math
import sys

import click
import numpy as np

from . import __version__
from ._io import atomic_write_text, config_hash, dumps_json, load_json
from .exceptions import (DomainError, IndeterminateError, InsufficientDataError, PaleyWienerError,
                         ParameterError, SeriesFormatError, UnsupportedMeasureError)
from .measures import (RadialMeasure, log_sigma_table, sigma_bounds_check,
                       signed_log_sigma_distributional)
from .multiplier import CASES, apply_multiplier, diagonal_consistency, invert_multiplier, verify_theorem
from .oracle import SampledFunction, bargmann_quadrature, hermite_coefficients
from .sequences import GrowthLaw, classify, generate_synthetic
from .series import bargmann_coeff_map, format_series_csv, read_series_csv
from .theta import PolydiscDomain, theta_eval
from ._validation import check_dim, multi_indices

EXIT_OK, EXIT_USAGE, EXIT_INDETERMINATE, EXIT_NONCONVERGED = 0, 1, 2, 3


class NonConvergence(PaleyWienerError):
    pass


@dataclass(frozen=True)
class RunConfig:
    truncation_degree: int = 60
    dim: int = 1
    quadrature_order: int = 0
    tolerance: float = 1e-6
    seed: int = 0
    output_path: str = "-"

    def __post_init__(self):
        if int(self.truncation_degree) < 8:
            raise ParameterError(f"truncation_degree must be >= 8, got {self.truncation_degree}")
        check_dim(int(self.dim))
        if not float(self.tolerance) > 0:
            raise ParameterError(f"tolerance must be positive, got {self.tolerance}")
        if int(self.quadrature_order) < 0:
            raise ParameterError("quadrature_order must be >= 0 (0 selects the default)")


_CONFIG_TYPES = {"truncation_degree": int, "dim": int, "quadrature_order": int,
                 "tolerance": float, "seed": int, "output_path": str}
_FLAG_TO_KEY = {"degree": "truncation_degree", "dim": "dim", "quad_order": "quadrature_order",
                "tol": "tolerance", "seed": "seed", "out": "output_path"}


def load_config(path=None, **flags):
    """Defaults, then ``[run]`` of the config file, then non-``None`` flags."""
    values = {}
    if path is not None:
        parser = configparser.ConfigParser()
        try:
            with open(path, encoding="utf-8") as fh:
                parser.read_file(fh)
        except (OSError, configparser.Error) as exc:
            raise ParameterError(f"cannot read config {path}: {exc}") from None
        if parser.has_section("run"):
            for key, value in parser.items("run"):
                if key not in _CONFIG_TYPES:
                    raise ParameterError(f"unknown config key {key!r}")
                try:
                    values[key] = _CONFIG_TYPES[key](value)
                except ValueError:
                    raise ParameterError(f"bad value for {key}: {value!r}") from None
    for flag, value in flags.items():
        if value is not None and flag in _FLAG_TO_KEY:
            values[_FLAG_TO_KEY[flag]] = value
    return RunConfig(**values)


def common_options(fn):
    options = [
        click.option("--config", "config_path", type=click.Path(dir_okay=False),
                     help="INI file with a [run] section."),
        click.option("--dim", type=int, help="Number of variables d."),
        click.option("--degree", "--N", "degree", type=int, help="Truncation degree N."),
        click.option("--quad-order", type=int, help="Base quadrature order (0 = default)."),
        click.option("--tol", type=float, help="Tolerance for checks."),
        click.option("--seed", type=int, help="Seed for pseudo-random phases and points."),
        click.option("--out", type=str, help="Output path ('-' for stdout)."),
    ]
    for opt in reversed(options):
        fn = opt(fn)
    return fn


def guarded(fn):
    """Map package exceptions onto the exit-code contract."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            code = fn(*args, **kwargs)
        except (InsufficientDataError, IndeterminateError) as exc:
            click.echo(f"indeterminate: {exc}", err=True)
            sys.exit(EXIT_INDETERMINATE)
        except NonConvergence as exc:
            click.echo(f"non-convergence: {exc}", err=True)
            sys.exit(EXIT_NONCONVERGED)
        except (SeriesFormatError, DomainError, UnsupportedMeasureError, ParameterError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_USAGE)
        except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_USAGE)
        sys.exit(code or EXIT_OK)

    return wrapper


def _settings(cfg, command, **extra):
    data = {k: v for k, v in asdict(cfg).items() if k != "output_path"}
    data.update(extra)
    data["command"] = command
    return data


def _provenance(settings):
    return [f"paleywiener {__version__} {settings['command']}",
            f"config-hash: {config_hash(settings)}",
            f"seed: {settings['seed']}"]


def _emit(cfg, text):
    if cfg.output_path in (None, "-"):
        click.echo(text, nl=False)
    else:
        atomic_write_text(cfg.output_path, text)


def _read_measure(path):
    if path is None:
        return RadialMeasure.disc()
    try:
        data = load_json(path)
    except json.JSONDecodeError as exc:
        raise SeriesFormatError(f"measure JSON: {exc.msg}", line=exc.lineno) from None
    return RadialMeasure.from_dict(data)


def _fmt(x):
    return format(float(x), ".17g")


@click.group()
@click.version_option(__version__, prog_name="paleywiener")
def main():
    """Paley-Wiener multipliers on Bargmann-side coefficient tables."""


@main.command("classify")
@click.argument("input_path", type=click.Path(exists=True, dir_okay=False))
@common_options
@guarded
def cmd_classify(input_path, config_path, dim, degree, quad_order, tol, seed, out):
    """Fit growth laws to a series CSV and print a GrowthReport (JSON)."""
    cfg = load_config(config_path, dim=dim, degree=degree, quad_order=quad_order, tol=tol,
                      seed=seed, out=out)
    report = classify(read_series_csv(input_path))
    _emit(cfg, dumps_json(report.to_dict()))
    return EXIT_OK if report.determinate else EXIT_INDETERMINATE


@main.command("synth")
@click.option("--family", type=click.Choice(["factorial", "stretched"]), required=True)
@click.option("--side", type=click.Choice(["decay", "growth"]), required=True)
@click.option("--sigma", "order", type=float, help="Factorial order sigma.")
@click.option("--s", "order_s", type=float, help="Stretched order s.")
@click.option("--rate", type=float, default=1.0, show_default=True, help="h or r.")
@click.option("--zero-phase", is_flag=True, help="Use zero phases instead of seeded ones.")
@common_options
@guarded
def cmd_synth(family, side, order, order_s, rate, zero_phase, config_path, dim, degree,
              quad_order, tol, seed, out):
    """Write an extremal coefficient table for a growth law."""
    cfg = load_config(config_path, dim=dim, degree=degree, quad_order=quad_order, tol=tol,
                      seed=seed, out=out)
    value = order if order is not None else order_s
    if value is None:
        raise ParameterError("give --sigma (factorial) or --s (stretched)")
    law = GrowthLaw(family, side, value, rate)
    table = generate_synthetic(law, cfg.truncation_degree, cfg.dim, phase_seed=cfg.seed,
                               random_phase=not zero_phase)
    settings = _settings(cfg, "synth", law=law.to_dict(), zero_phase=zero_phase)
    _emit(cfg, format_series_csv(table, _provenance(settings)))


def _transform(kind, measure_path, input_path, cfg):
    nu = _read_measure(measure_path)
    table = read_series_csv(input_path)
    op = apply_multiplier if kind == "apply" else invert_multiplier
    result = op(table, nu)
    settings = _settings(cfg, kind, measure=nu.to_dict(), input=format_series_csv(table))
    _emit(cfg, format_series_csv(result, _provenance(settings)))


@main.command("apply")
@click.option("--measure", "measure_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--in", "input_path", type=click.Path(exists=True, dir_okay=False), required=True)
@common_options
@guarded
def cmd_apply(measure_path, input_path, config_path, dim, degree, quad_order, tol, seed, out):
    """Coefficients of Pi_A(F nu): c'(alpha) = sigma_alpha / alpha! c(alpha)."""
    cfg = load_config(config_path, dim=dim, degree=degree, quad_order=quad_order, tol=tol,
                      seed=seed, out=out)
    _transform("apply", measure_path, input_path, cfg)


@main.command("invert")
@click.option("--measure", "measure_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--in", "input_path", type=click.Path(exists=True, dir_okay=False), required=True)
@common_options
@guarded
def cmd_invert(measure_path, input_path, config_path, dim, degree, quad_order, tol, seed, out):
    """Undo ``apply`` for a positive measure."""
    cfg = load_config(config_path, dim=dim, degree=degree, quad_order=quad_order, tol=tol,
                      seed=seed, out=out)
    _transform("invert", measure_path, input_path, cfg)


@main.command("sigma")
@click.option("--measure", "measure_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--bounds", is_flag=True, help="Report the two-sided constants instead.")
@common_options
@guarded
def cmd_sigma(measure_path, bounds, config_path, dim, degree, quad_order, tol, seed, out):
    """Tabulate the multiplier sequence of a measure up to the truncation degree."""
    cfg = load_config(config_path, dim=dim, degree=degree, quad_order=quad_order, tol=tol,
                      seed=seed, out=out)
    nu = _read_measure(measure_path)
    N = cfg.truncation_degree
    if bounds:
        report = sigma_bounds_check(nu, N)
        _emit(cfg, dumps_json(report.to_dict()))
        return EXIT_OK if report.ok else EXIT_USAGE
    indices = multi_indices(nu.dim, N).tolist()
    if nu.is_distributional:
        # signed values; the log column holds log |sigma|
        pairs = [signed_log_sigma_distributional(nu, tuple(a)) for a in indices]
        logs = [lv for lv, _ in pairs]
        values = [0.0 if sg == 0 else sg * math.exp(lv) for lv, sg in pairs]
    else:
        logs = log_sigma_table(nu, N, cfg.quadrature_order or None)
        values = [math.exp(ls) for ls in logs]
    buf = io.StringIO()
    for line in _provenance(_settings(cfg, "sigma", measure=nu.to_dict())):
        buf.write(f"# {line}\n")
    buf.write(",".join([f"alpha_{j + 1}" for j in range(nu.dim)] + ["sigma", "log_sigma"]) + "\n")
    for alpha, v, ls in zip(indices, values, logs):
        buf.write(",".join([str(a) for a in alpha] + [_fmt(v), _fmt(ls)]) + "\n")
    _emit(cfg, buf.getvalue())


@main.command("verify")
@click.argument("case", type=click.Choice(list(CASES) + ["lemma-diagonal"]))
@click.option("--sigma", "order", type=float, help="Theorem parameter sigma.")
@click.option("--s", "order_s", type=float, help="Theorem parameter s.")
@click.option("--measure", "measure_path", type=click.Path(exists=True, dir_okay=False))
@common_options
@guarded
def cmd_verify(case, order, order_s, measure_path, config_path, dim, degree, quad_order, tol,
               seed, out):
    """Check a theorem's exponent map, or the diagonal identity for ``lemma-diagonal``."""
    cfg = load_config(config_path, dim=dim, degree=degree, quad_order=quad_order, tol=tol,
                      seed=seed, out=out)
    nu = _read_measure(measure_path)
    if case == "lemma-diagonal":
        result = diagonal_consistency(nu, degree=min(cfg.truncation_degree, 20), seed=cfg.seed)
        passed = result["max_error"] <= cfg.tolerance
        report = {"case": case, "max_error": result["max_error"], "tolerance": cfg.tolerance,
                  "n_points": result["n_points"], "pass": passed, "measure": nu.to_dict()}
        _emit(cfg, dumps_json(report))
        return EXIT_OK if passed else EXIT_USAGE
    value = order if order is not None else order_s
    if value is None:
        value = 0.5 if case.startswith("T3") else None
    if value is None:
        raise ParameterError(f"{case} needs --sigma or --s")
    report = verify_theorem(case, value, nu, N=cfg.truncation_degree, d=nu.dim,
                            phase_seed=cfg.seed)
    _emit(cfg, dumps_json(report.to_dict()))
    if report.passed is None:
        return EXIT_INDETERMINATE
    return EXIT_OK if report.passed else EXIT_USAGE


def _parse_points(values, dim):
    pts = []
    for text in values:
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != dim:
            raise ParameterError(f"point {text!r} must have {dim} components")
        try:
            pts.append([complex(p.replace(" ", "")) for p in parts])
        except ValueError:
            raise ParameterError(f"cannot parse point {text!r}") from None
    return np.array(pts, dtype=complex)


@main.command("bargmann")
@click.option("--in", "input_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--point", "points", multiple=True,
              help="Evaluation point, components separated by commas (e.g. 1+1j).")
@common_options
@guarded
def cmd_bargmann(input_path, points, config_path, dim, degree, quad_order, tol, seed, out):
    """Bargmann transform of a Hermite series.

    With ``--point`` the transform integral is evaluated at those points and
    written as CSV. Without, the Hermite coefficients are recomputed by
    quadrature and written as a power-series table.
    """
    cfg = load_config(config_path, dim=dim, degree=degree, quad_order=quad_order, tol=tol,
                      seed=seed, out=out)
    table = read_series_csv(input_path)
    if table.kind != "hermite-series":
        raise ParameterError("bargmann expects a hermite-series table")
    f = SampledFunction.from_table(table)
    order = cfg.quadrature_order or None
    settings = _settings(cfg, "bargmann", input=format_series_csv(table), points=list(points))
    if points:
        z = _parse_points(points, table.dim)
        values, info = bargmann_quadrature(f, z, order=order, tol=cfg.tolerance, full_output=True)
        if not info.converged:
            raise NonConvergence(f"order doubling changed the result by {info.discrepancy:.3g}")
        buf = io.StringIO()
        for line in _provenance(settings):
            buf.write(f"# {line}\n")
        head = []
        for j in range(table.dim):
            head += [f"z{j + 1}_re", f"z{j + 1}_im"]
        buf.write(",".join(head + ["value_re", "value_im"]) + "\n")
        for zz, v in zip(z, values):
            row = []
            for c in zz:
                row += [_fmt(c.real), _fmt(c.imag)]
            buf.write(",".join(row + [_fmt(v.real), _fmt(v.imag)]) + "\n")
        _emit(cfg, buf.getvalue())
        return
    coeffs, info = hermite_coefficients(f, table.degree, order=order, tol=cfg.tolerance,
                                        full_output=True)
    if not info.converged:
        raise NonConvergence(f"order doubling changed the result by {info.discrepancy:.3g}")
    _emit(cfg, format_series_csv(bargmann_coeff_map(coeffs), _provenance(settings)))


def _parse_grid(text):
    try:
        start, stop, step = (float(p) for p in text.split(":"))
    except ValueError:
        raise ParameterError(f"grid must be start:stop:step, got {text!r}") from None
    if step <= 0 or stop < start:
        raise ParameterError("grid needs step > 0 and stop >= start")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(count)


@main.command("theta")
@click.option("--in", "input_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--radius", type=float, default=1.0, show_default=True)
@click.option("--grid", default="-4:4:0.1", show_default=True, help="start:stop:step on R.")
@common_options
@guarded
def cmd_theta(input_path, radius, grid, config_path, dim, degree, quad_order, tol, seed, out):
    """Evaluate Theta_{F,r} on a grid of the real line (d = 1)."""
    cfg = load_config(config_path, dim=dim, degree=degree, quad_order=quad_order, tol=tol,
                      seed=seed, out=out)
    table = read_series_csv(input_path)
    if table.dim != 1:
        raise ParameterError("theta grids are one-dimensional; the table must have dim 1")
    xs = _parse_grid(grid)
    D = PolydiscDomain((radius,))
    n_radial = cfg.quadrature_order or 48
    values, info = theta_eval(table, D, xs, n_radial=n_radial, n_angle=max(64, 2 * table.degree + 8),
                              tol=cfg.tolerance, full_output=True)
    if info is not None and not info.converged:
        raise NonConvergence(f"order doubling changed the result by {info.discrepancy:.3g}")
    settings = _settings(cfg, "theta", input=format_series_csv(table), radius=radius, grid=grid)
    buf = io.StringIO()
    for line in _provenance(settings):
        buf.write(f"# {line}\n")
    buf.write("x,re_theta,im_theta\n")
    for x, v in zip(xs, np.atleast_1d(values)):
        buf.write(f"{_fmt(x)},{_fmt(v.real)},{_fmt(v.imag)}\n")
    _emit(cfg, buf.getvalue())


if __name__ == "__main__":
    main()
