"""Command-line front end: every check and simulation, machine-readable.

Each command prints one canonical-JSON envelope (command echo, resolved
parameters, payload, wall time, version) and exits 0 on a mathematical
pass, 1 on a mathematical failure, 2 on usage or domain errors.  All
randomized commands require an explicit --seed.  A flat JSON file passed
via --config supplies defaults for flags not given on the command line;
unknown config keys are rejected.
"""

from __future__ import annotations

import json
import time
from pathlib import Path

import click
from click.core import ParameterSource

from . import __version__
from .definiteness import (DEFAULT_TOL, ToleranceConfig,
                           check_negative_definite, check_positive_semidefinite)
from .errors import (DefinitenessError, DomainError, IngestionError,
                     ReflectionPositivityError, SamplingError)
from .grids import Grid
from .jsonio import canonical_json
from .kernels import (BrownianOneSided, BrownianTwoSided, Exponential,
                      FractionalBrownian, GaussianFock, GramMatrix,
                      NormalizedOneSided, ReflectionSetup, Tabulated, gram,
                      identity, invert, negate, reflected_gram)
from .montecarlo import mc_characteristic, mc_fock_kernel
from .negdef import (AbsoluteValue, LKPsi, LKTriple, Power, TabulatedPsi,
                     check_bernstein, check_reflection_negative, lk_eval,
                     lk_fit, read_psi_samples, schoenberg_bridge)
from .processes import (BROWNIAN_ONE_SIDED, BROWNIAN_TWO_SIDED,
                        NORMALIZED_ONE_SIDED, custom, fractional_brownian)
from .quotient import hat_contraction, os_quotient
from .sampling import empirical_covariance, sample_paths

KERNEL_NAMES = ["exponential", "bm2", "fbm", "bm1", "normalized1", "fock", "tabulated"]
PROCESS_NAMES = ["bm2", "fbm", "bm1", "normalized1", "tabulated"]
PSI_NAMES = ["power", "abs", "lk", "tabulated"]
REFLECTIONS = {"negate": negate, "invert": invert, "identity": identity}


# ---------------------------------------------------------------------------
# plumbing
# ---------------------------------------------------------------------------

def _apply_config(ctx: click.Context, kw: dict) -> dict:
    """Merge a flat JSON config under explicit command-line flags."""
    path = kw.get("config")
    if not path:
        return kw
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise click.UsageError(f"cannot read config {path}: {exc}")
    if not isinstance(data, dict):
        raise click.UsageError("config must be a flat JSON object")
    by_flag = {}
    for param in ctx.command.params:
        for opt in param.opts:
            if opt.startswith("--"):
                by_flag[opt[2:]] = param
    for key, value in data.items():
        param = by_flag.get(key)
        if param is None or key == "config":
            raise click.UsageError(f"unknown config key {key!r}")
        if ctx.get_parameter_source(param.name) is ParameterSource.DEFAULT:
            kw[param.name] = param.type.convert(value, param, ctx)
    return kw


def _require(kw: dict, name: str, flag: str):
    if kw.get(name) is None:
        raise click.UsageError(f"missing required option {flag}")
    return kw[name]


def _parse_floats(text: str, flag: str) -> list[float]:
    try:
        values = [float(p) for p in str(text).split(",") if p.strip()]
    except ValueError as exc:
        raise click.UsageError(f"{flag}: {exc}")
    if not values:
        raise click.UsageError(f"{flag}: empty list")
    return values


def _parse_lambda_grid(text: str) -> list[float]:
    """Comma list, or log:lo:hi:n / lin:lo:hi:n specs."""
    text = str(text).strip()
    if text.startswith(("log:", "lin:")):
        kind, *rest = text.split(":")
        if len(rest) != 3:
            raise click.UsageError(f"--lambda-grid {text!r}: expected {kind}:lo:hi:n")
        try:
            lo, hi, n = float(rest[0]), float(rest[1]), int(rest[2])
        except ValueError as exc:
            raise click.UsageError(f"--lambda-grid {text!r}: {exc}")
        if not (lo > 0 and hi > lo and n >= 2):
            raise click.UsageError(f"--lambda-grid {text!r}: need 0 < lo < hi, n >= 2")
        if kind == "log":
            ratio = (hi / lo) ** (1.0 / (n - 1))
            return [lo * ratio ** i for i in range(n)]
        step = (hi - lo) / (n - 1)
        return [lo + step * i for i in range(n)]
    return _parse_floats(text, "--lambda-grid")


def _tolerances(kw: dict) -> ToleranceConfig:
    return ToleranceConfig(
        psd_tol=kw.get("psd_tol") or DEFAULT_TOL.psd_tol,
        nd_tol=kw.get("nd_tol") or DEFAULT_TOL.nd_tol,
        rank_tol=kw.get("rank_tol") or DEFAULT_TOL.rank_tol,
        recon_tol=kw.get("recon_tol") or DEFAULT_TOL.recon_tol,
    )


def _build_kernel(kw: dict):
    name = _require(kw, "kernel", "--kernel")
    if name == "exponential":
        return Exponential(_require(kw, "lam", "--lambda"))
    if name == "bm2":
        return BrownianTwoSided()
    if name == "fbm":
        return FractionalBrownian(_require(kw, "hurst", "--hurst"))
    if name == "bm1":
        return BrownianOneSided()
    if name == "normalized1":
        return NormalizedOneSided()
    if name == "fock":
        return GaussianFock()
    return Tabulated.from_csv(_require(kw, "tabulated", "--tabulated"))


def _build_process(kw: dict):
    name = _require(kw, "process", "--process")
    if name == "bm2":
        return BROWNIAN_TWO_SIDED
    if name == "fbm":
        return fractional_brownian(_require(kw, "hurst", "--hurst"))
    if name == "bm1":
        return BROWNIAN_ONE_SIDED
    if name == "normalized1":
        return NORMALIZED_ONE_SIDED
    return custom(Tabulated.from_csv(_require(kw, "tabulated", "--tabulated")))


def _build_psi(kw: dict):
    name = _require(kw, "psi", "--psi")
    if name == "power":
        return Power(_require(kw, "alpha", "--alpha"))
    if name == "abs":
        return AbsoluteValue()
    if name == "lk":
        return LKPsi(LKTriple.from_json_file(_require(kw, "triple", "--triple")))
    return TabulatedPsi(read_psi_samples(_require(kw, "samples", "--samples")))


def _grid(kw: dict) -> Grid:
    return Grid.from_spec(str(_require(kw, "grid", "--grid")))


def _echo_params(kw: dict) -> dict:
    drop = {"config", "out"}
    out = {}
    for key, value in kw.items():
        if key in drop:
            continue
        if isinstance(value, Path):
            value = str(value)
        out[key] = value
    return out


def _finish(ctx: click.Context, command: str, kw: dict, payload: dict,
            t0: float, ok: bool):
    envelope = {"command": command, "parameters": _echo_params(kw),
                "payload": payload, "wall_time_s": time.perf_counter() - t0,
                "version": __version__}
    text = canonical_json(envelope)
    click.echo(text)
    if kw.get("out"):
        Path(kw["out"]).write_text(text + "\n", encoding="utf-8")
    ctx.exit(0 if ok else 1)


def _usage_errors(fn):
    """Translate library domain/ingestion errors into exit-code-2 usage errors."""
    import functools

    @functools.wraps(fn)
    def wrapper(ctx, **kw):
        try:
            return fn(ctx, **kw)
        except (DomainError, IngestionError) as exc:
            raise click.UsageError(str(exc))
    return wrapper


def _common(fn):
    fn = click.option("--out", type=click.Path(dir_okay=False), default=None,
                      help="Also write the JSON envelope to this file.")(fn)
    fn = click.option("--config", type=click.Path(exists=True, dir_okay=False),
                      default=None,
                      help="Flat JSON object supplying defaults for flags.")(fn)
    return fn


def _kernel_opts(fn):
    fn = click.option("--kernel", type=click.Choice(KERNEL_NAMES), default=None,
                      help="Kernel family.")(fn)
    fn = click.option("--lambda", "lam", type=float, default=None,
                      help="Decay rate for the exponential kernel (>= 0).")(fn)
    fn = click.option("--hurst", type=float, default=None,
                      help="Hurst index in (0, 1).")(fn)
    fn = click.option("--tabulated", type=click.Path(exists=True, dir_okay=False),
                      default=None, help="CSV file with a tabulated kernel.")(fn)
    return fn


def _psi_opts(fn):
    fn = click.option("--psi", type=click.Choice(PSI_NAMES), default=None,
                      help="Candidate function family.")(fn)
    fn = click.option("--alpha", type=float, default=None,
                      help="Exponent for the power family (>= 0).")(fn)
    fn = click.option("--triple", type=click.Path(exists=True, dir_okay=False),
                      default=None, help="JSON file with representation data.")(fn)
    fn = click.option("--samples", "samples", type=click.Path(exists=True, dir_okay=False),
                      default=None, help="Two-column CSV of (t, psi) samples.")(fn)
    return fn


def _tol_opts(fn):
    for name in ("--psd-tol", "--nd-tol", "--rank-tol", "--recon-tol"):
        fn = click.option(name, type=float, default=None,
                          help=f"Override {name[2:].replace('-', '_')}.")(fn)
    return fn


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

@click.group()
@click.version_option(__version__, prog_name="rpkit")
def main():
    """Reflection-positivity checks, quotients and simulations."""


@main.group()
def check():
    """Definiteness and reflection positivity/negativity verdicts."""


@check.command("pd")
@_kernel_opts
@click.option("--grid", default=None, help="start:stop:step or comma list.")
@_tol_opts
@_common
@click.pass_context
@_usage_errors
def check_pd(ctx, **kw):
    """Positive semidefiniteness of a kernel Gram matrix."""
    t0 = time.perf_counter()
    kw = _apply_config(ctx, kw)
    verdict = check_positive_semidefinite(
        gram(_build_kernel(kw), _grid(kw)), _tolerances(kw))
    _finish(ctx, "check pd", kw, verdict.to_json_dict(), t0, verdict.passed)


@check.command("nd")
@_psi_opts
@click.option("--grid", default=None, help="start:stop:step or comma list.")
@_tol_opts
@_common
@click.pass_context
@_usage_errors
def check_nd(ctx, **kw):
    """Negative definiteness of psi(s - t) over a grid."""
    t0 = time.perf_counter()
    kw = _apply_config(ctx, kw)
    grid = _grid(kw)
    psi = _build_psi(kw)
    pts = grid.array
    entries = psi.values(pts[:, None] - pts[None, :]).reshape(len(pts), len(pts))
    verdict = check_negative_definite(GramMatrix.symmetrize(entries, grid),
                                      _tolerances(kw))
    _finish(ctx, "check nd", kw, verdict.to_json_dict(), t0, verdict.passed)


@check.command("reflection-positive")
@_kernel_opts
@click.option("--grid", default=None, help="start:stop:step or comma list.")
@click.option("--reflection", type=click.Choice(sorted(REFLECTIONS)),
              default="negate", show_default=True)
@_tol_opts
@_common
@click.pass_context
@_usage_errors
def check_rp(ctx, **kw):
    """Positive definiteness on the grid plus theta-positivity on its
    positive part."""
    t0 = time.perf_counter()
    kw = _apply_config(ctx, kw)
    kernel = _build_kernel(kw)
    grid = _grid(kw)
    tol = _tolerances(kw)
    refl = REFLECTIONS[kw["reflection"]]
    if kw["reflection"] == "invert":
        pos = tuple(p for p in grid if 0 < p < 1)
    elif kw["reflection"] == "identity":
        pos = grid.points
    else:
        pos = grid.positive()
    if not pos:
        raise DomainError("grid has no points in the designated positive part")
    v_line = check_positive_semidefinite(gram(kernel, grid), tol)
    v_refl = check_positive_semidefinite(
        reflected_gram(kernel, ReflectionSetup(Grid(pos), refl)), tol)
    ok = v_line.passed and v_refl.passed
    payload = {"pass": ok, "pd_on_line": v_line.to_json_dict(),
               "pd_reflected": v_refl.to_json_dict()}
    _finish(ctx, "check reflection-positive", kw, payload, t0, ok)


@check.command("reflection-negative")
@_psi_opts
@click.option("--grid", default=None, help="start:stop:step or comma list.")
@_tol_opts
@_common
@click.pass_context
@_usage_errors
def check_rn(ctx, **kw):
    """Negative definiteness of psi in both the line and semigroup pictures."""
    t0 = time.perf_counter()
    kw = _apply_config(ctx, kw)
    verdict = check_reflection_negative(_build_psi(kw), _grid(kw), _tolerances(kw))
    _finish(ctx, "check reflection-negative", kw, verdict.to_json_dict(), t0,
            verdict.passed)


@check.command("bernstein")
@_psi_opts
@click.option("--grid", default=None, help="Positive grid spec.")
@click.option("--h", type=float, default=None,
              help="Forward-difference step (default: min spacing / 10).")
@click.option("--kmax", type=int, default=8, show_default=True,
              help="Highest difference order checked.")
@click.option("--bernstein-tol", type=float, default=1e-7, show_default=True)
@_common
@click.pass_context
@_usage_errors
def check_bern(ctx, **kw):
    """Alternating forward-difference test on (0, inf)."""
    t0 = time.perf_counter()
    kw = _apply_config(ctx, kw)
    report = check_bernstein(_build_psi(kw), _grid(kw), h=kw["h"],
                             k_max=kw["kmax"], tol=kw["bernstein_tol"])
    _finish(ctx, "check bernstein", kw, report.to_json_dict(), t0, report.passed)


@check.command("schoenberg")
@_psi_opts
@click.option("--grid", default=None, help="start:stop:step or comma list.")
@click.option("--lambdas", default="0.1,1,10", show_default=True,
              help="Comma list of exponential rates.")
@_tol_opts
@_common
@click.pass_context
@_usage_errors
def check_schoenberg(ctx, **kw):
    """Positive definiteness of exp(-lambda*psi) in both pictures, per lambda."""
    t0 = time.perf_counter()
    kw = _apply_config(ctx, kw)
    lambdas = _parse_floats(kw["lambdas"], "--lambdas")
    verdicts = schoenberg_bridge(_build_psi(kw), lambdas, _grid(kw), _tolerances(kw))
    ok = all(v.passed for v in verdicts)
    payload = {"pass": ok, "verdicts": [v.to_json_dict() for v in verdicts]}
    _finish(ctx, "check schoenberg", kw, payload, t0, ok)


@main.command("quotient")
@_kernel_opts
@click.option("--grid", default=None, help="Positive-part grid spec.")
@click.option("--reflection", type=click.Choice(sorted(REFLECTIONS)),
              default="negate", show_default=True)
@click.option("--shift", "shifts", type=float, multiple=True,
              help="Report the contraction norm of this shift (repeatable).")
@_tol_opts
@_common
@click.pass_context
@_usage_errors
def quotient_cmd(ctx, **kw):
    """Numerical rank and spectrum of the reflected Gram matrix."""
    t0 = time.perf_counter()
    kw = _apply_config(ctx, kw)
    kernel = _build_kernel(kw)
    setup = ReflectionSetup(_grid(kw), REFLECTIONS[kw["reflection"]])
    tol = _tolerances(kw)
    try:
        quot = os_quotient(reflected_gram(kernel, setup), tol)
        payload = quot.to_json_dict()
        if kw["shifts"]:
            payload["contractions"] = [
                {"shift": s, **hat_contraction(kernel, setup, s, tol).to_json_dict()}
                for s in kw["shifts"]]
    except ReflectionPositivityError as exc:
        _finish(ctx, "quotient", kw,
                {"error": str(exc), "min_eigenvalue": exc.min_eigenvalue}, t0, False)
        return
    _finish(ctx, "quotient", kw, payload, t0, True)


@main.command("simulate")
@click.option("--process", type=click.Choice(PROCESS_NAMES), default=None)
@click.option("--hurst", type=float, default=None)
@click.option("--tabulated", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--grid", default=None, help="start:stop:step or comma list.")
@click.option("--paths", "n_paths", type=int, default=None, help="Number of paths.")
@click.option("--seed", type=int, default=None, help="Required; no wall-clock default.")
@click.option("--validate", is_flag=True, default=False,
              help="Report the empirical-covariance deviation.")
@_tol_opts
@_common
@click.pass_context
@_usage_errors
def simulate_cmd(ctx, **kw):
    """Sample seeded Gaussian paths; writes a CSV and a JSON sidecar."""
    t0 = time.perf_counter()
    kw = _apply_config(ctx, kw)
    process = _build_process(kw)
    grid = _grid(kw)
    n_paths = _require(kw, "n_paths", "--paths")
    seed = _require(kw, "seed", "--seed")
    out = _require(kw, "out", "--out")
    try:
        ensemble = sample_paths(process, grid, n_paths, seed, _tolerances(kw))
    except (SamplingError, DefinitenessError) as exc:
        click.echo(canonical_json({"error": str(exc)}))
        ctx.exit(1)
        return
    out_path = Path(out)
    sidecar = out_path.with_suffix(".json")
    if sidecar == out_path:
        sidecar = Path(str(out_path) + ".sidecar.json")
    ensemble.to_csv(out_path)
    ensemble.write_sidecar(sidecar)
    payload = {"paths_file": str(out_path), "sidecar_file": str(sidecar),
               "n_paths": ensemble.n_paths, "seed": ensemble.seed,
               "generator": ensemble.generator}
    if kw["validate"]:
        payload["max_abs_deviation"] = empirical_covariance(ensemble).max_abs_deviation
    envelope = {"command": "simulate", "parameters": _echo_params(kw),
                "payload": payload, "wall_time_s": time.perf_counter() - t0,
                "version": __version__}
    click.echo(canonical_json(envelope))
    ctx.exit(0)


@main.group()
def lk():
    """Forward evaluation and inversion of the representation data."""


@lk.command("eval")
@click.option("--triple", type=click.Path(exists=True, dir_okay=False), default=None,
              help="JSON file {a, b, atoms:[{lambda, weight}]}.")
@click.option("--t", "t_list", default=None, help="Comma list of points.")
@click.option("--grid", default=None, help="Grid spec (alternative to --t).")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]),
              default="json", show_default=True,
              help="Format of the --out file.")
@_common
@click.pass_context
@_usage_errors
def lk_eval_cmd(ctx, **kw):
    """Tabulate a + b|t| + sum w_i (1 - exp(-lambda_i |t|))."""
    t0 = time.perf_counter()
    kw = _apply_config(ctx, kw)
    triple = LKTriple.from_json_file(_require(kw, "triple", "--triple"))
    if kw["t_list"] is not None:
        points = _parse_floats(kw["t_list"], "--t")
    else:
        points = list(_grid(kw).points)
    values = [lk_eval(triple, t) for t in points]
    payload = {"t": points, "psi": values, "triple": triple.to_json_dict()}
    envelope = {"command": "lk eval", "parameters": _echo_params(kw),
                "payload": payload, "wall_time_s": time.perf_counter() - t0,
                "version": __version__}
    click.echo(canonical_json(envelope))
    if kw.get("out"):
        if kw["fmt"] == "csv":
            lines = ["t,psi"] + ["%.17g,%.17g" % (t, v) for t, v in zip(points, values)]
            Path(kw["out"]).write_text("\n".join(lines) + "\n", encoding="utf-8")
        else:
            Path(kw["out"]).write_text(canonical_json(envelope) + "\n", encoding="utf-8")
    ctx.exit(0)


@lk.command("fit")
@click.option("--samples", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Two-column CSV of (t, psi) samples.")
@click.option("--lambda-grid", "lambda_grid", default=None,
              help="Comma list, or log:lo:hi:n / lin:lo:hi:n.")
@click.option("--no-a", is_flag=True, default=False, help="Drop the constant column.")
@click.option("--no-b", is_flag=True, default=False, help="Drop the drift column.")
@click.option("--max-residual", type=float, default=None,
              help="Exit 1 when the l2 residual exceeds this bound.")
@_common
@click.pass_context
@_usage_errors
def lk_fit_cmd(ctx, **kw):
    """Nonnegative least squares inversion on a candidate rate grid."""
    t0 = time.perf_counter()
    kw = _apply_config(ctx, kw)
    samples = read_psi_samples(_require(kw, "samples", "--samples"))
    lambdas = _parse_lambda_grid(_require(kw, "lambda_grid", "--lambda-grid"))
    result = lk_fit(samples, lambdas, include_a=not kw["no_a"],
                    include_b=not kw["no_b"])
    ok = kw["max_residual"] is None or result.residual <= kw["max_residual"]
    _finish(ctx, "lk fit", kw, result.to_json_dict(), t0, ok)


@main.group()
def mc():
    """Seeded Monte Carlo estimators for the canonical Gaussian field."""


@mc.command("characteristic")
@click.option("--v", "v_text", default=None, help="Comma list of coordinates.")
@click.option("--samples", "n_samples", type=int, default=None)
@click.option("--seed", type=int, default=None, help="Required; no wall-clock default.")
@click.option("--threads", type=int, default=1, envvar="RPKIT_THREADS",
              show_default=True, help="Worker threads (never changes output).")
@_common
@click.pass_context
@_usage_errors
def mc_characteristic_cmd(ctx, **kw):
    """Estimate E[exp(i*phi(v))] against exp(-|v|^2/2)."""
    t0 = time.perf_counter()
    kw = _apply_config(ctx, kw)
    v = _parse_floats(_require(kw, "v_text", "--v"), "--v")
    report = mc_characteristic(len(v), v, _require(kw, "n_samples", "--samples"),
                               _require(kw, "seed", "--seed"), threads=kw["threads"])
    _finish(ctx, "mc characteristic", kw, report.to_json_dict(), t0,
            report.within_half_width)


@mc.command("fock")
@click.option("--v", "v_text", default=None, help="Comma list of coordinates.")
@click.option("--w", "w_text", default=None, help="Comma list of coordinates.")
@click.option("--samples", "n_samples", type=int, default=None)
@click.option("--seed", type=int, default=None, help="Required; no wall-clock default.")
@click.option("--threads", type=int, default=1, envvar="RPKIT_THREADS",
              show_default=True, help="Worker threads (never changes output).")
@_common
@click.pass_context
@_usage_errors
def mc_fock_cmd(ctx, **kw):
    """Estimate the coherent-state kernel and its normalized form."""
    t0 = time.perf_counter()
    kw = _apply_config(ctx, kw)
    v = _parse_floats(_require(kw, "v_text", "--v"), "--v")
    w = _parse_floats(_require(kw, "w_text", "--w"), "--w")
    if len(v) != len(w):
        raise click.UsageError("--v and --w must have the same length")
    report = mc_fock_kernel(len(v), v, w, _require(kw, "n_samples", "--samples"),
                            _require(kw, "seed", "--seed"), threads=kw["threads"])
    ok = report.kernel.within_half_width and report.normalized.within_half_width
    _finish(ctx, "mc fock", kw, report.to_json_dict(), t0, ok)


if __name__ == "__main__":
    main()
