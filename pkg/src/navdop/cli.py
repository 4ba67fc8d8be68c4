"""Command-line front end: run, sweep, table3 and plot.

Exit codes: 0 success, 2 parse error, 3 validation error, 4 numerical error.
Errors are reported on stderr as a single ``error: kind=<kind> reason=<text>`` line.
"""
from __future__ import annotations

import argparse
import configparser
import csv
import io
import os
import sys
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from . import catalog, entry, information as info
from .geometry import DegenerateGeometryError, SceneConfig
from .kinematics import AU_KM, OrbitConfig, stm_error_norm
from .measurements import (MAS_TO_RAD, optical_aggregate_sigma, optical_noise,
                           pulsar_effective_sigma)

EXIT_OK, EXIT_PARSE, EXIT_VALIDATION, EXIT_NUMERICAL = 0, 2, 3, 4
CSV_HEADER = ["angle_rad", "sqrt_Gxx", "sqrt_Gyy", "rho_xy", "pdop", "sigma_xx_km", "sigma_yy_km"]
SPECTRUM_HEADER = ["angle_rad", "lambda1", "lambda2", "lambda3", "lambda4"]
DATA_TYPES = ("optical", "pulsar", "range", "entry_compare")
SWEEP_VARS = ("alpha0", "beta0", "xi0", "p")
HOURS_PER_DAY = 24.0

PRESETS = {
    "mars": dict(a=1.5, n=0.009, a_A=2.7, sigma_A_km=0.0, range_factor=0.0003),
    "neptune": dict(a=30.0, n=0.001, a_A=40.0, sigma_A_km=0.00013 * AU_KM, range_factor=0.004),
}


class ParseError(Exception):
    pass


class ValidationError(Exception):
    pass


@dataclass(frozen=True)
class Scenario:
    data_type: str = "optical"
    preset: str = "mars"
    a: float = 1.5
    n: float = 0.009
    T: float = 1.0
    a_A: float = 2.7
    p: int = 1
    angle: float = 0.0
    camera: str = "high-end"
    n_gamma: float = 1440.0
    sigma_A_km: float = 0.0
    selection: str = "sextant"
    area: float = 129.0
    n_tau: Optional[int] = None
    consider: bool = True
    range_factor: float = 0.0003
    xi_deg: float = 0.0
    cpf_sigma_km: float = entry.CPF_SIGMA_KM
    v_inf: float = entry.V_INF_KMS
    entry_radius: float = entry.ENTRY_RADIUS_KM
    entry_true_anomaly_deg: float = entry.ENTRY_TRUE_ANOMALY_DEG
    mu_mars: float = entry.MU_MARS
    var: Optional[str] = None
    grid: Optional[str] = None
    catalog_path: Optional[str] = None

    @property
    def orbit(self) -> OrbitConfig:
        return OrbitConfig(self.a, self.n, 0.0, self.T)

    @property
    def scene(self) -> SceneConfig:
        return SceneConfig(asteroid_mean_dist=self.a_A)


# ---------------------------------------------------------------- scenario files

_KEYS = {
    "scenario": {"data_type": str, "preset": str, "p": int, "angle": float, "T": float,
                 "a": float, "n": float},
    "optical": {"camera": str, "n_gamma": float, "sigma_A_km": float, "a_A": float},
    "pulsar": {"selection": str, "area": float, "n_tau": int, "consider": "bool",
               "catalog_path": str},
    "range": {"range_factor": float},
    "entry": {"xi_deg": float, "cpf_sigma_km": float, "v_inf": float, "entry_radius": float,
              "entry_true_anomaly_deg": float, "mu_mars": float},
    "sweep": {"var": str, "grid": str},
}


def _convert(kind, raw: str, key: str):
    try:
        if kind == "bool":
            low = raw.strip().lower()
            if low in ("1", "true", "yes", "on"):
                return True
            if low in ("0", "false", "no", "off"):
                return False
            raise ValueError(raw)
        return kind(raw.strip())
    except ValueError:
        raise ParseError(f"bad value for {key}: {raw!r}") from None


def apply_preset(fields: dict) -> dict:
    name = fields.get("preset", "mars")
    if name == "custom":
        return fields
    if name not in PRESETS:
        raise ValidationError(f"unknown preset {name!r}")
    merged = dict(PRESETS[name])
    merged.update(fields)
    return merged


def parse_scenario(text: str, overrides: Optional[dict] = None) -> Scenario:
    """Parse a ``key = value`` scenario file; ``overrides`` win over file values."""
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ParseError(str(exc).splitlines()[0]) from None
    fields: dict = {}
    for section in cp.sections():
        if section not in _KEYS:
            raise ParseError(f"unknown section [{section}]")
        for key, raw in cp.items(section):
            if key not in _KEYS[section]:
                raise ParseError(f"unknown key {section}.{key}")
            fields[key] = _convert(_KEYS[section][key], raw, key)
    fields.update({k: v for k, v in (overrides or {}).items() if v is not None})
    fields.setdefault("preset", "mars")
    fields = apply_preset(fields)
    sc = Scenario(**fields)
    validate(sc)
    return sc


def validate(sc: Scenario) -> list[str]:
    """Check a scenario; return warnings, raise ValidationError on hard errors."""
    warnings = []
    if sc.data_type not in DATA_TYPES:
        raise ValidationError(f"data_type must be one of {DATA_TYPES}")
    if sc.p < 1:
        raise ValidationError("p must be >= 1")
    if sc.a <= 0 or sc.n <= 0 or sc.T <= 0:
        raise ValidationError("orbit requires a, n, T > 0")
    if sc.var is not None and sc.var not in SWEEP_VARS:
        raise ValidationError(f"sweep variable must be one of {SWEEP_VARS}")
    if sc.data_type == "optical":
        if sc.a_A <= 0 or sc.a_A == sc.a:
            raise ValidationError("beacon mean distance must be positive and differ from a")
        if sc.a_A < sc.a:
            warnings.append("beacon mean distance below spacecraft radius: "
                            "inner-beacon geometry branch in use")
        if sc.n_gamma * sc.p < 1:
            raise ValidationError("need at least one image")
    if sc.data_type == "pulsar" and sc.area <= 0:
        raise ValidationError("detector area must be positive")
    if sc.data_type == "range" and sc.range_factor <= 0:
        raise ValidationError("range noise factor must be positive")
    return warnings


def parse_grid(spec: Optional[str], var: str) -> np.ndarray:
    """``start:stop:count`` or a comma list; angle grids exclude ``stop``."""
    if var == "p":
        default = "1,2,7,14"
    else:
        default = f"0:{2 * np.pi!r}:360"
    spec = spec or default
    try:
        if ":" in spec:
            start, stop, count = spec.split(":")
            count = int(count)
            if count < 1:
                raise ValueError
            grid = np.linspace(float(start), float(stop), count, endpoint=(var == "p"))
        else:
            grid = np.array([float(x) for x in spec.split(",") if x.strip()])
    except ValueError:
        raise ParseError(f"bad grid {spec!r}") from None
    if grid.size == 0:
        raise ValidationError("empty sweep grid")
    if var == "p":
        if np.any(grid < 1) or np.any(grid != np.round(grid)):
            raise ValidationError("p grid must contain integers >= 1")
    return grid


# ---------------------------------------------------------------- evaluation

@dataclass(frozen=True)
class Evaluation:
    result: info.DilutionResult
    information: info.InfoMatrix4


def pulsar_inputs(sc: Scenario):
    entries = catalog.select(catalog.load_pulsars(sc.catalog_path), sc.selection)
    stats = catalog.selection_stats(entries)
    n_tau = sc.n_tau or stats.count
    return stats, n_tau


def aggregate_sigma(sc: Scenario, p: int) -> float:
    if sc.data_type == "optical":
        cam = catalog.camera(sc.camera)
        sbar, _ = optical_noise(cam, sc.a, sc.a_A, sc.sigma_A_km)
        return optical_aggregate_sigma(cam.theta_rad, sbar, sc.a, p, sc.n_gamma)
    if sc.data_type == "pulsar":
        stats, _ = pulsar_inputs(sc)
        return stats.mean_s_tau / np.sqrt(sc.area * HOURS_PER_DAY * sc.T * p)
    if sc.data_type == "range":
        return sc.range_factor / np.sqrt(HOURS_PER_DAY * sc.T * p)
    raise ValidationError(f"no aggregate sigma for {sc.data_type}")


def evaluate(sc: Scenario, angle: Optional[float] = None, p: Optional[int] = None) -> Evaluation:
    angle = sc.angle if angle is None else angle
    p = sc.p if p is None else int(p)
    sigma = aggregate_sigma(sc, p)
    if sc.data_type == "optical":
        I = info.integrate_optical_info(sc.orbit, sc.scene, angle, p, sigma)
    elif sc.data_type == "pulsar":
        I = info.pulsar_info_closed_form(p, angle, sigma)
    elif sc.data_type == "range":
        I = info.integrate_range_info(sc.orbit, sc.scene, angle, p, sigma)
    else:
        raise ValidationError("entry_compare has no dilution result")
    P = info.position_covariance(I)
    if sc.data_type == "pulsar" and sc.consider:
        stats, n_tau = pulsar_inputs(sc)
        G = P / sigma**2
        beta_err = stats.mean_sigma_beta * MAS_TO_RAD
        a_km = sc.a * AU_KM
        P = info.consider_pulsar_covariance(P, G, a_km, beta_err, n_tau)
        sigma = pulsar_effective_sigma(stats.mean_s_tau, sc.area, HOURS_PER_DAY * sc.T * p,
                                       a_km, beta_err, n_tau)
    return Evaluation(info.dilution(P, sigma), I)


def _g(x: float) -> str:
    return "%.17g" % x


def format_result(ev: Evaluation) -> list[str]:
    r = ev.result
    spec = info.info_spectrum(ev.information)
    return [f"sigma_agg_km={_g(r.sigma_agg)}",
            f"sqrt_Gxx={_g(r.sqrt_gxx)}", f"sqrt_Gyy={_g(r.sqrt_gyy)}",
            f"rho_xy={_g(r.rho_xy)}", f"pdop={_g(r.pdop)}",
            f"sigma_xx_km={_g(r.sigma_xx)}", f"sigma_yy_km={_g(r.sigma_yy)}",
            "eigenvalues=" + ",".join(_g(v) for v in spec.eigenvalues),
            f"condition_number={_g(spec.condition_number)}"]


def run_entry(sc: Scenario) -> list[str]:
    approach = entry.HyperbolicApproach.from_vinf(sc.mu_mars, sc.v_inf, sc.entry_radius,
                                                  sc.entry_true_anomaly_deg)
    return entry.compare(approach, sc.xi_deg, sc.cpf_sigma_km).lines()


def sweep_rows(sc: Scenario, var: str, grid: Sequence[float], spectrum: Optional[str] = None):
    rows = []
    for value in grid:
        if var == "p":
            angle, p = sc.angle, int(value)
        else:
            angle, p = float(value), sc.p
        if spectrum is not None:
            if sc.data_type != "range" or var != "xi0":
                raise ValidationError("spectrum sweeps need range data over xi0")
            rows.append([float(value)] + list(range_spectrum(sc, angle, p, spectrum)))
            continue
        r = evaluate(sc, angle, p).result
        rows.append([float(value), r.sqrt_gxx, r.sqrt_gyy, r.rho_xy, r.pdop, r.sigma_xx, r.sigma_yy])
    return rows


def range_spectrum(sc: Scenario, xi0: float, p: int, which: str) -> np.ndarray:
    sigma = aggregate_sigma(sc, p)
    if which == "full":
        I = info.integrate_range_info(sc.orbit, sc.scene, xi0, p, sigma)
    elif which in ("jet2", "jet3", "jet4"):
        I = info.range_info_epsilon_jet(sc.orbit, sc.scene, xi0, int(which[-1]), sigma, p)
    else:
        raise ValidationError(f"unknown spectrum {which!r}")
    return info.info_spectrum(I).eigenvalues


def write_csv(rows, header=CSV_HEADER) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_g(v) for v in row])
    return buf.getvalue()


# ---------------------------------------------------------------- table 3

@dataclass(frozen=True)
class Table3Row:
    regime: str
    scenario: str
    sigma_T: float
    reference_sigma_T: float
    scale: str
    position: str
    reference_position: str
    passed: bool


def _within(x, ref, rel):
    return abs(x - ref) <= rel * abs(ref)


def _best_over_angle(sc: Scenario, grid: np.ndarray) -> info.DilutionResult:
    results = [evaluate(sc, float(g)).result for g in grid]
    return min(results, key=lambda r: max(r.sigma_xx, r.sigma_yy))


def table3(count: int = 360, range_count: Optional[int] = None) -> list[Table3Row]:
    grid = np.linspace(0, 2 * np.pi, count, endpoint=False)
    rgrid = np.linspace(0, 2 * np.pi, range_count or count, endpoint=False)
    rows = []
    targets = {
        "mars": dict(optical=(14.8, 47), sextant=(24.1, 72), best4=(7.1, 21), range=6.1e-5),
        "neptune": dict(optical=(1541.6, 2621), sextant=(436.5, 1310), best4=(11.4, 34),
                        range=8.2e-4),
    }
    envelopes = {"mars": ((2e-4, 2.5), (1.0, 8.0)), "neptune": (None, (820.0, 3200.0))}
    for regime in ("mars", "neptune"):
        base = parse_scenario("", {"preset": regime})
        ref = targets[regime]
        sc = replace(base, data_type="optical")
        best = _best_over_angle(sc, grid)
        pos = max(best.sigma_xx, best.sigma_yy)
        rows.append(Table3Row(regime, "optical", best.sigma_agg, ref["optical"][0],
                              f"({best.sqrt_gxx:.2f}, {best.sqrt_gyy:.2f})",
                              f"({best.sigma_xx:.1f}, {best.sigma_yy:.1f})",
                              f"({ref['optical'][1]}, {ref['optical'][1]})",
                              _within(best.sigma_agg, ref["optical"][0], 0.05)
                              and _within(pos, ref["optical"][1], 0.05)))
        for sel in ("sextant", "best4"):
            sc = replace(base, data_type="pulsar", selection=sel)
            best = _best_over_angle(sc, grid)
            pos = max(best.sigma_xx, best.sigma_yy)
            rows.append(Table3Row(regime, f"pulsar-{sel}", best.sigma_agg, ref[sel][0],
                                  f"{max(best.sqrt_gxx, best.sqrt_gyy):.3f}",
                                  f"({best.sigma_xx:.1f}, {best.sigma_yy:.1f})",
                                  f"({ref[sel][1]}, {ref[sel][1]})",
                                  _within(best.sigma_agg, ref[sel][0], 0.03)
                                  and _within(pos, ref[sel][1], 0.05)))
        sc = replace(base, data_type="range")
        res = [evaluate(sc, float(g)).result for g in rgrid]
        sx = np.array([r.sigma_xx for r in res])
        sy = np.array([r.sigma_yy for r in res])
        gx = np.array([r.sqrt_gxx for r in res])
        gy = np.array([r.sqrt_gyy for r in res])
        env_x, env_y = envelopes[regime]
        ok = _within(res[0].sigma_agg, ref["range"], 0.02)
        ok &= env_y[0] <= sy.min() and sy.max() <= env_y[1]
        if env_x is not None:
            ok &= env_x[0] <= sx.min() and sx.max() <= env_x[1]
        target_pos = ("0.0002<sxx<2.5 1<syy<8" if regime == "mars" else "820<syy<3200")
        rows.append(Table3Row(regime, "range", res[0].sigma_agg, ref["range"],
                              f"{gx.min():.3g}<sGxx<{gx.max():.3g} {gy.min():.3g}<sGyy<{gy.max():.3g}",
                              f"{sx.min():.3g}<sxx<{sx.max():.3g} {sy.min():.4g}<syy<{sy.max():.4g}",
                              target_pos, bool(ok)))
    return rows


def format_table3(rows: Sequence[Table3Row]) -> str:
    lines = ["regime   scenario        sigma_T      ref      scale_factors                  "
             "position_km                      reference_position         result"]
    for r in rows:
        lines.append(f"{r.regime:<8} {r.scenario:<15} {r.sigma_T:<12.4g} {r.reference_sigma_T:<8.4g} "
                     f"{r.scale:<30} {r.position:<32} {r.reference_position:<22} "
                     f"{'PASS' if r.passed else 'FAIL'}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- plot scripts

_GNUPLOT_HEAD = """set terminal pngcairo size 900,600
set output '{out}'
set datafile separator ','
set key autotitle columnhead
set grid
"""

_PLOT_LAYOUT = {
    "fig7": ("sqrt_G", "alpha_0 [rad]"), "fig9": ("sqrt_G", "alpha_0 [rad]"),
    "fig11": ("sqrt_G", "beta_0 [rad]"), "fig13": ("sqrt_G", "xi_0 [rad]"),
    "fig14": ("decorrelation", "xi_0 [rad]"), "fig16": ("sqrt_G_log", "xi_0 [rad]"),
    "fig8": ("pdop", "alpha_0 [rad]"), "fig10": ("pdop", "alpha_0 [rad]"),
    "fig12": ("pdop_ref", "beta_0 [rad]"), "fig15": ("pdop_log", "xi_0 [rad]"),
    "fig17": ("pdop_log", "xi_0 [rad]"),
    "fig39": ("eigen", "xi_0 [rad]"), "fig40": ("eigen", "xi_0 [rad]"),
    "fig41": ("eigen", "xi_0 [rad]"), "fig42": ("eigen", "xi_0 [rad]"),
    "fig43": ("eigen_compare", "xi_0 [rad]"),
}
FIGURE_IDS = ("fig2",) + tuple(_PLOT_LAYOUT)


def _q(path: str) -> str:
    return "'" + path.replace("'", "''") + "'"


def fig2_data(n: float = 0.009, days: float = 14.0, count: int = 141) -> list[tuple]:
    orbit = OrbitConfig(1.5, n)
    ts = np.linspace(days / (count - 1), days, count - 1)
    return [(t, stm_error_norm(orbit, t, 1), stm_error_norm(orbit, t, 2)) for t in ts]


def emit_plot_script(figure_id: str, csv_paths: Sequence[str] = ()) -> str:
    """Gnuplot script for a figure analog; deterministic for identical inputs."""
    if figure_id not in FIGURE_IDS:
        raise ValidationError(f"unknown figure id {figure_id!r}")
    out = f"{figure_id}.png"
    s = _GNUPLOT_HEAD.format(out=out)
    if figure_id == "fig2":
        s += "$errors << EOD\n"
        s += "".join(f"{_g(t)},{_g(e2)},{_g(e3)}\n" for t, e2, e3 in fig2_data())
        s += "EOD\nset key noautotitle\nset logscale y\nset xlabel 't [day]'\n"
        s += "set ylabel 'relative Frobenius error'\nset format y '10^{%L}'\n"
        s += ("plot $errors using 1:2 with lines title 'e2 (two-term)', "
              "$errors using 1:3 with lines title 'e3 (with quadratic term)'\n")
        return s
    if not csv_paths:
        raise ValidationError(f"{figure_id} needs at least one CSV file")
    for path in csv_paths:
        if not os.path.exists(path):
            raise ValidationError(f"CSV not found: {path}")
    kind, xlabel = _PLOT_LAYOUT[figure_id]
    s += f"set xlabel '{xlabel}'\n"
    first = _q(csv_paths[0])
    if kind in ("sqrt_G", "sqrt_G_log"):
        s += "set multiplot layout 2,1\n"
        if kind == "sqrt_G_log":
            s += "set logscale y\n"
        s += "set ylabel 'scale factor'\n"
        s += f"plot {first} using 1:2 with lines, {first} using 1:3 with lines\n"
        s += "unset logscale y\nset ylabel 'correlation'\n"
        s += f"plot {first} using 1:4 with lines\nunset multiplot\n"
    elif kind == "decorrelation":
        s += "set logscale y\nset ylabel '1 - |rho_xy|'\n"
        s += f"plot {first} using 1:(1-abs($4)) with lines title '1 - |rho_xy|'\n"
    elif kind.startswith("pdop"):
        if kind == "pdop_log":
            s += "set logscale y\n"
        s += "set ylabel 'PDOP'\n"
        curves = [f"{_q(p)} using 1:5 with lines title {_q(os.path.basename(p))}" for p in csv_paths]
        if kind == "pdop_ref":
            curves.append(f"{_g(np.sqrt(2.0))} with lines dashtype 2 title 'direct observation'")
        s += "plot " + ", ".join(curves) + "\n"
    else:
        s += "set logscale y\nset ylabel 'eigenvalue'\nset format y '10^{%L}'\n"
        curves = []
        for path in csv_paths:
            tag = os.path.basename(path)
            curves += [f"{_q(path)} using 1:(abs(${k})) with lines title '{tag} lambda{k - 1}'"
                       for k in range(2, 6)]
        s += "plot " + ", ".join(curves) + "\n"
    return s


# ---------------------------------------------------------------- entry point

def _fail(kind: str, code: int, msg) -> int:
    text = " ".join(str(msg).split())
    print(f"error: kind={kind} reason={text}", file=sys.stderr)
    return code


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="navdop", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="verb", required=True)

    def common(p):
        p.add_argument("--scenario", help="scenario file (key = value sections)")
        p.add_argument("--preset", choices=("mars", "neptune", "custom"))
        p.add_argument("--data-type", choices=DATA_TYPES)
        p.add_argument("--days", type=int, help="observation days p")
        p.add_argument("--angle", type=float, help="initial angle [rad]")
        p.add_argument("--selection", help="pulsar set: sextant, best4, all or a comma list")
        p.add_argument("--camera", help="camera tier name")
        p.add_argument("--seed", type=int, help="reserved; all computations are deterministic")

    run = sub.add_parser("run", help="evaluate one scenario")
    common(run)
    sw = sub.add_parser("sweep", help="sweep one variable and write CSV")
    common(sw)
    sw.add_argument("--var", choices=SWEEP_VARS)
    sw.add_argument("--grid", help="start:stop:count or comma list")
    sw.add_argument("--out", help="CSV path (default stdout)")
    sw.add_argument("--spectrum", choices=("full", "jet2", "jet3", "jet4"),
                    help="write range information eigenvalues instead of dilution columns")
    t3 = sub.add_parser("table3", help="reproduce the system comparison table")
    t3.add_argument("--count", type=int, default=360, help="angle grid size")
    pl = sub.add_parser("plot", help="emit a gnuplot script")
    pl.add_argument("figure")
    pl.add_argument("csv", nargs="*")
    pl.add_argument("--out", help="script path (default stdout)")
    return ap


def _load(args) -> Scenario:
    text = ""
    if args.scenario:
        try:
            with open(args.scenario, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ParseError(f"cannot read scenario: {exc.strerror}") from None
    overrides = dict(preset=args.preset, data_type=args.data_type, p=args.days,
                     angle=args.angle, selection=args.selection, camera=args.camera)
    if getattr(args, "var", None):
        overrides["var"] = args.var
    if getattr(args, "grid", None):
        overrides["grid"] = args.grid
    return parse_scenario(text, overrides)


def _emit(text: str, path: Optional[str]) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.verb == "table3":
            sys.stdout.write(format_table3(table3(args.count)))
            return EXIT_OK
        if args.verb == "plot":
            _emit(emit_plot_script(args.figure, args.csv), args.out)
            return EXIT_OK
        sc = _load(args)
        for w in validate(sc):
            print(f"warning: {w}", file=sys.stderr)
        if args.verb == "run":
            if sc.data_type == "entry_compare":
                lines = run_entry(sc)
            else:
                lines = format_result(evaluate(sc))
            print(f"data_type={sc.data_type} preset={sc.preset} p={sc.p} angle={_g(sc.angle)}")
            print("\n".join(lines))
            return EXIT_OK
        var = sc.var or {"optical": "alpha0", "pulsar": "beta0", "range": "xi0"}.get(sc.data_type)
        if var is None:
            raise ValidationError("entry_compare cannot be swept")
        grid = parse_grid(sc.grid, var)
        rows = sweep_rows(sc, var, grid, args.spectrum)
        _emit(write_csv(rows, SPECTRUM_HEADER if args.spectrum else CSV_HEADER), args.out)
        return EXIT_OK
    except ParseError as exc:
        return _fail("parse", EXIT_PARSE, exc)
    except (ValidationError, KeyError, catalog.MissingFieldError) as exc:
        return _fail("validation", EXIT_VALIDATION, exc.args[0] if exc.args else exc)
    except (info.QuadratureError, info.JetFitError, np.linalg.LinAlgError,
            entry.IntegrationError, DegenerateGeometryError, FloatingPointError) as exc:
        return _fail("numerical", EXIT_NUMERICAL, exc)
    except ValueError as exc:
        return _fail("validation", EXIT_VALIDATION, exc)


if __name__ == "__main__":
    sys.exit(main())
