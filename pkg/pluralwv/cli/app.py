# -*- coding: utf-8 -*-
"""
PluralWV Command Line
Scheme evaluation, sweeps, anomaly reports, systematic errors, two-branch
inversion and oracle validation, all written as deterministic CSV / JSON
"""
import logging
from contextlib import contextmanager
from enum import Enum
from pathlib import Path
from typing import Annotated, List, Optional

import numpy as np
import typer
from pydantic import BaseModel, ConfigDict, Field, ValidationError
from rich.console import Console
from rich.logging import RichHandler

from pluralwv.analysis.estimation import error_curve, error_vs_deflection, invert_im_two_branch
from pluralwv.analysis.sweep import AngleGrid, anomaly_report, default_angles, sweep
from pluralwv.cli.output import OutputFormat, emit_rows, emit_text, render_json
from pluralwv.config import Settings, load_settings
from pluralwv.core.pointer import GaussianPointer, QuadratureSpec, convergence_study
from pluralwv.core.weak_value import SchemeConfig, SchemeKind, closed_form
from pluralwv.errors import InvalidArgumentError, PluralWVError, exit_code_for

log = logging.getLogger(__name__)

app = typer.Typer(
    name="pluralwv",
    help="Weak-value simulation: real, imaginary and plural weak values, "
         "pointer shifts and systematic estimation errors.",
    add_completion=False,
    no_args_is_help=True,
)


# ---------------------------------------------------------------
# SETUP
# ---------------------------------------------------------------
def setup_logging(verbose: bool = False):
    """Logs go to stderr so stdout stays byte-deterministic"""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(message)s",
        handlers=[RichHandler(console=Console(stderr=True), show_time=False, show_path=False)],
        force=True,
    )


def _settings(ctx: typer.Context) -> Settings:
    return ctx.obj if isinstance(ctx.obj, Settings) else Settings()


# ---------------------------------------------------------------
# SCHEMAS
# ---------------------------------------------------------------
class Subcommand(str, Enum):
    WEAKVALUE = "weakvalue"
    SWEEP = "sweep"
    ANOMALY = "anomaly"
    SYSERR = "syserr"
    INVERT = "invert"
    ORACLE = "oracle"


class RunConfig(BaseModel):
    """Validated parameters of one CLI invocation (angles as typed by the user)"""
    model_config = ConfigDict(extra="forbid")

    subcommand: Subcommand
    scheme: SchemeKind = SchemeKind.C
    alpha: float = 0.002
    beta: float = 0.002
    tau: float = Field(default=1e-6, ge=0)
    w: float = Field(default=1.0, gt=0)
    grid: Optional[str] = Field(default=None, description="start:stop:count[:spacing]")
    fmt: OutputFormat = OutputFormat.CSV
    output: Optional[Path] = None
    degrees: bool = False

    def angle(self, value: float) -> float:
        """Radians, converting at parse time when --degrees is set"""
        return float(np.deg2rad(value)) if self.degrees else float(value)

    @property
    def alpha_rad(self) -> float:
        return self.angle(self.alpha)

    @property
    def beta_rad(self) -> float:
        return self.angle(self.beta)

    def angle_grid(self, text: Optional[str] = None) -> Optional[AngleGrid]:
        text = text if text is not None else self.grid
        if text is None:
            return None
        grid = AngleGrid.parse(text)
        return grid.scaled(np.pi / 180) if self.degrees else grid


class WeakValueResponse(BaseModel):
    re: float
    im: float
    ab: float
    prob: float


class ErrorResponse(BaseModel):
    error: str
    detail: str


@contextmanager
def domain_errors():
    """Map library failures to an error object on stdout and an exit code"""
    try:
        yield
    except PluralWVError as e:
        log.error(f"{e.code}: {e.detail}")
        emit_text(render_json(ErrorResponse(error=e.code, detail=e.detail).model_dump()))
        raise typer.Exit(code=e.exit_code)
    except ValidationError as e:
        detail = "; ".join(f"{'.'.join(map(str, err['loc']))}: {err['msg']}" for err in e.errors())
        log.error(f"invalid-argument: {detail}")
        emit_text(render_json(ErrorResponse(error=InvalidArgumentError.code, detail=detail).model_dump()))
        raise typer.Exit(code=InvalidArgumentError.exit_code)


def _finish(records: List[dict]):
    """Exit with the code of the first failed row, after all rows were written"""
    for record in records:
        if record.get("_error"):
            raise typer.Exit(code=exit_code_for(record["_error"]))


def _strip(records: List[dict]) -> List[dict]:
    return [{k: v for k, v in r.items() if not k.startswith("_")} for r in records]


# ---------------------------------------------------------------
# OPTIONS
# ---------------------------------------------------------------
SchemeOpt = Annotated[SchemeKind, typer.Option("--scheme", case_sensitive=False, help="Scheme a, b or c")]
AlphaOpt = Annotated[Optional[float], typer.Option("--alpha", help="P1 deflection (rad)")]
BetaOpt = Annotated[Optional[float], typer.Option("--beta", help="P2/QWP angle (rad)")]
GridOpt = Annotated[Optional[str], typer.Option("--grid", help="start:stop:count[:linear|log]")]
DegreesOpt = Annotated[bool, typer.Option("--degrees", help="Read every angle option in degrees")]
OutputOpt = Annotated[Optional[Path], typer.Option("--output", "-o", help="Write to file instead of stdout")]
FormatOpt = Annotated[OutputFormat, typer.Option("--format", case_sensitive=False)]


# ---------------------------------------------------------------
# COMMANDS
# ---------------------------------------------------------------
@app.callback()
def main(
    ctx: typer.Context,
    config: Annotated[Optional[Path], typer.Option("--config", help="YAML settings file")] = None,
    verbose: Annotated[bool, typer.Option("--verbose", "-v")] = False,
):
    """PluralWV command line"""
    setup_logging(verbose)
    with domain_errors():
        ctx.obj = load_settings(config)


@app.command("weakvalue")
def cmd_weakvalue(
    ctx: typer.Context,
    scheme: SchemeOpt = SchemeKind.C,
    alpha: AlphaOpt = None,
    beta: BetaOpt = None,
    degrees: DegreesOpt = False,
    fmt: FormatOpt = OutputFormat.JSON,
    output: OutputOpt = None,
):
    """Weak value and post-selection probability of one scheme"""
    settings = _settings(ctx)
    with domain_errors():
        run = RunConfig(
            subcommand=Subcommand.WEAKVALUE, scheme=scheme,
            alpha=settings.defaults.alpha if alpha is None else alpha,
            beta=settings.defaults.beta if beta is None else beta,
            degrees=degrees, fmt=fmt, output=output,
        )
        cfg = SchemeConfig.build(run.scheme, run.alpha_rad, run.beta_rad)
        wv = closed_form(cfg, eps_div=settings.tolerances.eps_div)
        response = WeakValueResponse(re=wv.re, im=wv.im, ab=wv.ab, prob=wv.prob)

        if run.fmt is OutputFormat.JSON:
            emit_text(render_json(response.model_dump()), run.output)
        else:
            emit_rows([response.model_dump()], "weakvalue", run.fmt, run.output,
                      title=f"Scheme {cfg.kind.value}: alpha={cfg.alpha:g}, beta={cfg.beta:g}")


def _parse_fix(text: str, degrees: bool) -> tuple:
    name, sep, value = text.partition("=")
    name = name.strip().lower()
    if not sep or name not in ("alpha", "beta"):
        raise InvalidArgumentError(f"--fix must be alpha=VALUE or beta=VALUE, got {text!r}")
    try:
        angle = float(value)
    except ValueError:
        raise InvalidArgumentError(f"--fix value must be a number, got {value!r}")
    return name, float(np.deg2rad(angle)) if degrees else angle


@app.command("sweep")
def cmd_sweep(
    ctx: typer.Context,
    scheme: SchemeOpt = SchemeKind.C,
    fix: Annotated[Optional[str], typer.Option("--fix", help="Held angle for scheme c: alpha=V or beta=V")] = None,
    grid: GridOpt = None,
    degrees: DegreesOpt = False,
    fmt: FormatOpt = OutputFormat.CSV,
    output: OutputOpt = None,
):
    """Weak value along a grid of the swept angle"""
    settings = _settings(ctx)
    with domain_errors():
        run = RunConfig(subcommand=Subcommand.SWEEP, scheme=scheme, grid=grid,
                        degrees=degrees, fmt=fmt, output=output)

        fixed, fixed_angle = "beta", 0.0
        if run.scheme is SchemeKind.C:
            fixed, fixed_angle = _parse_fix(fix, degrees) if fix else ("beta", settings.defaults.beta)
        elif fix:
            log.warning(f"--fix ignored for scheme {run.scheme.value}")

        angles = run.angle_grid()
        if angles is None:
            angles = default_angles(fixed_angle or None, settings.defaults)
        rows = sweep(run.scheme, fixed_angle, angles, fixed=fixed)

        records = [
            {"alpha_rad": r.alpha, "beta_rad": r.beta, "re_aw": r.re_aw, "im_aw": r.im_aw,
             "ab_aw": r.ab_aw, "prob": r.prob, "ok": r.ok, "_error": r.error}
            for r in rows
        ]
        emit_rows(_strip(records), "sweep", run.fmt, run.output,
                  title=f"Scheme {run.scheme.value} sweep, {fixed}={fixed_angle:g}")
    _finish(records)


@app.command("anomaly")
def cmd_anomaly(
    ctx: typer.Context,
    beta: BetaOpt = None,
    grid: GridOpt = None,
    degrees: DegreesOpt = False,
    fmt: FormatOpt = OutputFormat.CSV,
    output: OutputOpt = None,
):
    """Classify alpha intervals into anomalous / normal regimes at fixed beta"""
    settings = _settings(ctx)
    with domain_errors():
        run = RunConfig(subcommand=Subcommand.ANOMALY,
                        beta=settings.defaults.beta if beta is None else beta,
                        grid=grid, degrees=degrees, fmt=fmt, output=output)
        angles = run.angle_grid()
        if angles is None:
            angles = default_angles(run.beta_rad or None, settings.defaults)
        report = anomaly_report(run.beta_rad, angles)

        records = [
            {"alpha_lo": iv.alpha_lo, "alpha_hi": iv.alpha_hi, "d_re": iv.d_re,
             "d_prob": iv.d_prob, "regime": iv.regime, "ok": True}
            for iv in report.intervals
        ]
        if run.fmt is OutputFormat.JSON:
            payload = {
                "beta_fixed": report.beta_fixed,
                "alpha_peak": report.alpha_peak,
                "anomaly_boundary": report.anomaly_boundary,
                "anomalous_interval": list(report.anomalous_interval),
                "normal_interval": list(report.normal_interval),
                "intervals": records,
            }
            emit_text(render_json(payload), run.output)
        else:
            emit_rows(records, "anomaly", run.fmt, run.output,
                      title=f"Anomaly at beta={report.beta_fixed:g}: (0, {report.anomaly_boundary:.6g})")


@app.command("syserr")
def cmd_syserr(
    ctx: typer.Context,
    beta_true: Annotated[Optional[float], typer.Option("--beta-true", help="True P2 angle (rad)")] = None,
    alpha: AlphaOpt = None,
    beta_grid: Annotated[Optional[str], typer.Option("--beta-grid", help="Sweep the true beta")] = None,
    alpha_grid: Annotated[Optional[str], typer.Option("--alpha-grid", help="Sweep the P1 deflection")] = None,
    degrees: DegreesOpt = False,
    fmt: FormatOpt = OutputFormat.CSV,
    output: OutputOpt = None,
):
    """Systematic error err(beta) of the Im-, Ab- and P-based estimators"""
    settings = _settings(ctx)
    with domain_errors():
        run = RunConfig(subcommand=Subcommand.SYSERR,
                        alpha=settings.defaults.alpha if alpha is None else alpha,
                        beta=settings.defaults.beta if beta_true is None else beta_true,
                        degrees=degrees, fmt=fmt, output=output)
        if beta_grid and alpha_grid:
            raise InvalidArgumentError("--beta-grid and --alpha-grid are mutually exclusive")

        if alpha_grid:
            records_in = error_vs_deflection(run.beta_rad, run.angle_grid(alpha_grid).points())
        elif beta_grid:
            records_in = error_curve(run.angle_grid(beta_grid).points(), run.alpha_rad)
        else:
            records_in = error_curve([run.beta_rad], run.alpha_rad)

        records = [
            {"beta_true": r.beta_true, "alpha_defl": r.alpha_deflection, "estimator": r.estimator.value,
             "measured": r.measured, "beta_hat": r.beta_hat, "err": r.err, "ok": r.ok, "_error": r.error}
            for r in records_in
        ]
        emit_rows(_strip(records), "syserr", run.fmt, run.output, title="Systematic error err(beta)")
    _finish(records)


@app.command("invert")
def cmd_invert(
    ctx: typer.Context,
    alpha: AlphaOpt = None,
    im: Annotated[float, typer.Option("--im", help="Measured |Im A_w|")] = 200.0,
    degrees: DegreesOpt = False,
    fmt: FormatOpt = OutputFormat.CSV,
    output: OutputOpt = None,
):
    """Both beta roots of |Im A_w,c|(alpha, beta) = target"""
    settings = _settings(ctx)
    with domain_errors():
        run = RunConfig(subcommand=Subcommand.INVERT,
                        alpha=settings.defaults.alpha if alpha is None else alpha,
                        degrees=degrees, fmt=fmt, output=output)
        a = run.alpha_rad
        roots = invert_im_two_branch(
            im, a,
            rel_tol=settings.tolerances.root_rel_tol,
            peak_match_rel=settings.tolerances.peak_match_rel,
        )

        if not roots:
            records = [{"alpha": a, "im_target": im, "branch": "none", "beta_root": float("nan"), "ok": False}]
        elif len(roots) == 1 and roots[0] == a:
            records = [{"alpha": a, "im_target": im, "branch": "peak", "beta_root": roots[0], "ok": True}]
        else:
            records = [
                {"alpha": a, "im_target": im, "branch": "rising" if r < a else "falling", "beta_root": r, "ok": True}
                for r in roots
            ]
        emit_rows(records, "invert", run.fmt, run.output, title=f"|Im A_w| = {im:g} at alpha={a:g}")


@app.command("oracle")
def cmd_oracle(
    ctx: typer.Context,
    scheme: SchemeOpt = SchemeKind.C,
    alpha: AlphaOpt = None,
    beta: BetaOpt = None,
    tau: Annotated[Optional[float], typer.Option("--tau", help="Largest coupling strength")] = None,
    w: Annotated[Optional[float], typer.Option("--w", help="Momentum-space std of the probe")] = None,
    halvings: Annotated[int, typer.Option("--halvings", min=0, help="Also run tau/2 ... tau/2^N")] = 4,
    points: Annotated[Optional[int], typer.Option("--points", help="Quadrature points")] = None,
    degrees: DegreesOpt = False,
    fmt: FormatOpt = OutputFormat.CSV,
    output: OutputOpt = None,
):
    """First-order pointer shifts against the exact post-selected pointer"""
    settings = _settings(ctx)
    with domain_errors():
        run = RunConfig(
            subcommand=Subcommand.ORACLE, scheme=scheme,
            alpha=settings.defaults.alpha if alpha is None else alpha,
            beta=settings.defaults.beta if beta is None else beta,
            tau=settings.defaults.tau if tau is None else tau,
            w=settings.defaults.w if w is None else w,
            degrees=degrees, fmt=fmt, output=output,
        )
        cfg = SchemeConfig.build(run.scheme, run.alpha_rad, run.beta_rad)
        quadrature = QuadratureSpec(
            points=settings.defaults.quadrature_points if points is None else points,
            mass_tolerance=settings.tolerances.mass_tolerance,
        )
        taus = [run.tau / 2 ** k for k in range(halvings + 1)]
        tol = settings.tolerances
        rows = convergence_study(cfg, GaussianPointer(w=run.w, tau=run.tau), taus, quadrature,
                                 strict=False, warn_above=tol.weakness_warning)
        for r in rows:
            if r.ok and r.weakness <= tol.weakness_warning and not r.agrees(tol.oracle_agreement):
                log.warning(f"tau={r.tau:.3g}: first order off the exact shifts by more than {tol.oracle_agreement:g}")

        records = [
            {"tau": r.tau, "dq_exact": r.dq_exact, "dq_first": r.dq_first, "dp_exact": r.dp_exact,
             "dp_first": r.dp_first, "weakness": r.weakness, "ok": r.ok, "_error": r.error}
            for r in rows
        ]
        emit_rows(_strip(records), "oracle", run.fmt, run.output,
                  title=f"Oracle, scheme {cfg.kind.value}, W={run.w:g}")
    _finish(records)


# ---------------------------------------------------------------
# MAIN
# ---------------------------------------------------------------
if __name__ == "__main__":
    app()
