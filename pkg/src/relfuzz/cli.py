"""Command-line front end.

Exit codes: 0 success, 1 configuration error, 2 profile error, 3 numeric failure.
"""

from dataclasses import replace
from pathlib import Path
import sys

import click
import numpy as np

from . import __version__
from .config import ConfigError, load_config
from .fuzzy import TFN, PropagationError, defuzzify_centroid
from .mission import ProfileError, cluster_telemetry, load_profile, load_telemetry, profile_csv
from .pipeline import analyze, canonical_json, parse_rates_override, plot_rows, render_svg, simulate_configs

EXIT_CONFIG = 1
EXIT_PROFILE = 2
EXIT_NUMERIC = 3


class _Exit(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def _fail(code, exc):
    raise _Exit(code, str(exc))


def _parse_edges(text):
    if text is None:
        return None
    text = text.strip()
    try:
        if ":" in text:
            start, stop, step = (float(v) for v in text.split(":"))
            n = int(round((stop - start) / step))
            return start + step * np.arange(n + 1)
        return np.array([float(v) for v in text.split(",")])
    except ValueError:
        raise ConfigError(f"cannot parse bin edges {text!r}; use 'a,b,c' or 'start:stop:step'") from None


def _emit(text, out):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
def cli():
    """Fuzzy MTTF analysis of redundant-switch interleaved converters."""


@cli.command("analyze")
@click.option("--config", "config_path", required=True, type=click.Path(dir_okay=False))
@click.option("--profile", "profile_path", type=click.Path(dir_okay=False), default=None)
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Report path (default stdout).")
@click.option("--plot", "plot_dir", type=click.Path(file_okay=False), default=None,
              help="Directory for x_years,mu CSV membership polylines.")
@click.option("--svg", is_flag=True, help="Also write SVG renderings next to the CSV polylines.")
@click.option("--rates-override", default=None, help="JSON text or file with per-mode totals.")
@click.option("--variant", type=click.Choice(["as-printed", "consistent"]), default=None)
@click.option("--method", type=click.Choice(["vertex", "alpha-cut"]), default=None)
@click.option("--trials", type=click.IntRange(min=1), default=None)
@click.option("--seed", type=click.IntRange(min=0), default=None)
@click.option("--workers", type=click.IntRange(min=1), default=None)
def cmd_analyze(config_path, profile_path, out, plot_dir, svg, rates_override, variant, method,
                trials, seed, workers):
    """Run the full pipeline and write a JSON report."""
    try:
        cfg = load_config(config_path).with_overrides(variant=variant, method=method)
        overrides = parse_rates_override(rates_override)
    except ConfigError as exc:
        _fail(EXIT_CONFIG, exc)
    if trials is not None or seed is not None:
        cfg = replace(cfg, trials=trials or cfg.trials, seed=cfg.seed if seed is None else seed)
    profile = None
    if profile_path is not None:
        try:
            profile = load_profile(profile_path, t_bounds=cfg.t_bounds)
        except ProfileError as exc:
            _fail(EXIT_PROFILE, exc)
    try:
        report, curves = analyze(cfg, profile, overrides, workers=workers, profile_path=profile_path)
        text = canonical_json(report)
    except ProfileError as exc:
        _fail(EXIT_PROFILE, exc)
    except (ArithmeticError, PropagationError, np.linalg.LinAlgError, ValueError, RuntimeError) as exc:
        _fail(EXIT_NUMERIC, exc)
    _emit(text, out)

    if plot_dir or svg:
        target = Path(plot_dir) if plot_dir else (Path(out).parent if out else Path("."))
        target.mkdir(parents=True, exist_ok=True)
        for label, curve in curves:
            if plot_dir:
                (target / f"membership_{label}.csv").write_text(plot_rows(curve), encoding="utf-8")
            if svg:
                (target / f"membership_{label}.svg").write_text(render_svg(curve, f"MTTF {label}"),
                                                                encoding="utf-8")

    for entry in report["configurations"]:
        m = entry["mttf_years"]
        click.echo(f"{entry['kind']:>9}: MTTF lowest {m['lowest']:.6g} yr, defuzzified "
                   f"{m['defuzzified']:.6g} yr, highest {m['highest']:.6g} yr", err=True)
    click.echo(f"note: {report['reference_comparison']['note']}", err=True)


@cli.command("cluster")
@click.argument("telemetry", type=click.Path(dir_okay=False))
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Profile CSV (default stdout).")
@click.option("--t-edges", default=None, help="Temperature bin edges, 'a,b,c' or 'start:stop:step' (degC).")
@click.option("--p-edges", default=None, help="Power bin edges, 'a,b,c' or 'start:stop:step' (W).")
@click.option("--t-width", type=float, default=5.0, show_default=True)
@click.option("--p-width", type=float, default=100.0, show_default=True)
@click.option("--clamp", is_flag=True, help="Fold out-of-range samples into the edge bins.")
def cmd_cluster(telemetry, out, t_edges, p_edges, t_width, p_width, clamp):
    """Cluster telemetry samples into a mission-profile CSV."""
    try:
        te, pe = _parse_edges(t_edges), _parse_edges(p_edges)
    except ConfigError as exc:
        _fail(EXIT_CONFIG, exc)
    try:
        samples = load_telemetry(telemetry)
        profile = cluster_telemetry(samples, te, pe, clamp=clamp, t_width=t_width, p_width=p_width)
    except ProfileError as exc:
        _fail(EXIT_PROFILE, exc)
    _emit(profile_csv(profile), out)
    click.echo(f"{profile.n} state(s) from {len(samples)} sample(s)", err=True)


@cli.command("simulate")
@click.option("--config", "config_path", required=True, type=click.Path(dir_okay=False))
@click.option("--profile", "profile_path", type=click.Path(dir_okay=False), default=None)
@click.option("--rates-override", default=None)
@click.option("--trials", type=click.IntRange(min=1), default=None)
@click.option("--seed", type=click.IntRange(min=0), default=None)
@click.option("--workers", type=click.IntRange(min=1), default=None)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def cmd_simulate(config_path, profile_path, rates_override, trials, seed, workers, out):
    """Monte Carlo check of the crisp chain at the TFN peaks."""
    try:
        cfg = load_config(config_path)
        overrides = parse_rates_override(rates_override)
    except ConfigError as exc:
        _fail(EXIT_CONFIG, exc)
    profile = None
    if profile_path is not None:
        try:
            profile = load_profile(profile_path, t_bounds=cfg.t_bounds)
        except ProfileError as exc:
            _fail(EXIT_PROFILE, exc)
    try:
        doc = simulate_configs(cfg, profile, overrides, trials, seed, workers)
        text = canonical_json(doc)
    except ProfileError as exc:
        _fail(EXIT_PROFILE, exc)
    except (ArithmeticError, np.linalg.LinAlgError, ValueError, RuntimeError) as exc:
        _fail(EXIT_NUMERIC, exc)
    _emit(text, out)
    for entry in doc["configurations"]:
        sim = entry["simulation"]
        click.echo(f"{entry['kind']:>9}: analytic {entry['analytic_mttf_years']:.6g} yr, simulated "
                   f"{sim['mean_mttf_years']:.6g} +/- {sim['std_error_years']:.2g} yr "
                   f"({'ok' if entry['within_3se'] else 'MISMATCH'})", err=True)


@cli.command("defuzzify")
@click.argument("a", type=float)
@click.argument("b", type=float)
@click.argument("c", type=float)
def cmd_defuzzify(a, b, c):
    """Centroid of the triangular fuzzy number (A, B, C)."""
    try:
        x = TFN(a, b, c)
    except ValueError as exc:
        _fail(EXIT_CONFIG, exc)
    click.echo(f"{defuzzify_centroid(x):.10g}")


@cli.command("version")
def cmd_version():
    """Print the package version."""
    click.echo(__version__)


def main(argv=None):
    try:
        cli.main(args=argv, prog_name="relfuzz", standalone_mode=False)
    except _Exit as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(exc.code)
    except click.exceptions.Abort:
        sys.exit(EXIT_CONFIG)
    except click.ClickException as exc:
        exc.show()
        sys.exit(EXIT_CONFIG)
    sys.exit(0)


if __name__ == "__main__":
    main()
