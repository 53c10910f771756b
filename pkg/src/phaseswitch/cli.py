"""Command-line front end: regenerate theory curves and derived numbers.

Every command writes data files into ``--out``.  Outputs depend only on the
parameters and ``--seed``; nothing time- or host-dependent is recorded.
Precedence is CLI flags, then the ``--params`` file, then built-in defaults.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from .disorder import DetuningDistribution
from .fitkit import fit_exponential, fit_spectrum
from .lindblad import ConvergenceError, DrivenSystem, HilbertConfig
from .linres import (SpectrumModel, characterization_spectrum,
                     interferometer_numbers, port_fields, scattering_amplitudes)
from .params import (NS, LAB_PARAMS, InterferometerConfig, ParameterError,
                     SystemParams, cooperativity_from_lifetime, read_config,
                     to_2pi_mhz, two_pi_mhz)
from .saturation import DriveField, port_intensities_amplitude
from .switch import (ReadoutModel, gate_fidelities, fringe_shift,
                     no_gate_fringe, posterior_rows, ramsey_fringe,
                     readout_fidelity)
from .traces import TraceSeries, read_traces, traces_to_csv, traces_to_json


class CommandError(RuntimeError):
    """A module flagged a result the command cannot publish."""


class Outputs:
    """Collects files for one command and writes them all or none."""

    def __init__(self, out_dir: Path, fmt: str):
        self.out_dir = out_dir
        self.fmt = fmt
        self.files: dict[str, str] = {}

    def traces(self, stem: str, traces) -> None:
        traces = list(traces)
        if self.fmt == "csv":
            self.files[f"{stem}.csv"] = traces_to_csv(traces)
        else:
            self.files[f"{stem}.json"] = traces_to_json(traces)

    def table(self, stem: str, header, rows) -> None:
        if self.fmt == "csv":
            lines = [",".join(header)]
            lines += [",".join(_cell(v) for v in row) for row in rows]
            self.files[f"{stem}.csv"] = "\n".join(lines) + "\n"
        else:
            records = [dict(zip(header, map(_jsonable, row))) for row in rows]
            self.files[f"{stem}.json"] = json.dumps(records, indent=1) + "\n"

    def record(self, stem: str, payload: dict) -> None:
        self.files[f"{stem}.json"] = json.dumps(
            _jsonable(payload), indent=2, sort_keys=True) + "\n"

    def text(self, name: str, body: str) -> None:
        self.files[name] = body

    def commit(self) -> list[Path]:
        self.out_dir.mkdir(parents=True, exist_ok=True)
        written = []
        try:
            for name, body in self.files.items():
                path = self.out_dir / name
                tmp = path.with_name(path.name + ".partial")
                tmp.write_text(body)
                written.append(tmp)
            final = []
            for tmp in written:
                target = tmp.with_name(tmp.name[:-len(".partial")])
                tmp.replace(target)
                final.append(target)
            return final
        except BaseException:
            for tmp in written:
                tmp.unlink(missing_ok=True)
            raise


def _cell(v) -> str:
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    return obj


# parameter resolution -----------------------------------------------------

def resolve_params(args) -> SystemParams:
    p = LAB_PARAMS
    if args.params:
        p = SystemParams.from_config(read_config(args.params))
    if args.eta is not None or args.k is not None:
        eta = p.eta if args.eta is None else args.eta
        k = p.k if args.k is None else args.k
        p = SystemParams.from_cooperativity(eta, k, p.kappa, p.gamma,
                                            p.delta_a, p.delta_c)
    return p


def params_record(p: SystemParams) -> dict:
    rec = p.to_config()
    rec.update(eta=p.eta, k=p.k)
    return rec


# fig2b ------------------------------------------------------------------------

def cmd_fig2b(args, out: Outputs) -> None:
    """Phase shift versus detuning with and without the atom, plus the
    reflectivity inset."""
    p = resolve_params(args)
    offset = two_pi_mhz(args.offset_mhz)
    deltas = two_pi_mhz(np.linspace(-args.span_mhz, args.span_mhz,
                                    args.points))
    r_c = np.empty(deltas.size, complex)
    r_u = np.empty(deltas.size, complex)
    ratio_a = np.empty(deltas.size)
    ratio_p = np.empty(deltas.size)
    cfg_dark = InterferometerConfig.dark_port(p.k)
    cfg_inset = InterferometerConfig.dark_port(p.k, phi_v=math.pi)
    for i, d in enumerate(deltas):
        # the laser moves relative to both resonances; the atom sits
        # ``offset`` above the cavity
        q = p.replace(delta_a=-d, delta_c=-(d + offset))
        amps = scattering_amplitudes(q)
        r_c[i], r_u[i] = amps.r_c, amps.r_u
        p0 = port_fields(q, cfg_dark, atom_present=False).power
        ratio_p[i] = port_fields(q, cfg_dark, atom_present=True).power / p0
        a1 = abs(port_fields(q, cfg_inset, atom_present=True).d1)**2
        ratio_a[i] = a1 / port_fields(q, cfg_inset, atom_present=False).power
    ref = np.angle(r_u[0])
    with_atom = np.unwrap(np.angle(r_c) - ref)
    no_atom = np.unwrap(np.angle(r_u) - ref)
    shift = 2 * math.pi * np.round(with_atom[0] / (2 * math.pi))
    with_atom -= shift
    x = to_2pi_mhz(deltas)
    out.traces("fig2b_phase", [
        TraceSeries(x, with_atom, "phase with atom", "MHz", "rad",
                    flags=np.abs(r_c) < 1e-6),
        TraceSeries(x, no_atom, "phase without atom", "MHz", "rad"),
    ])
    out.traces("fig2b_inset", [
        TraceSeries(x, ratio_a, "A1/P0 phi_v=pi", "MHz", "ratio"),
        TraceSeries(x, ratio_p, "P1/P0", "MHz", "ratio"),
    ])
    resonant = interferometer_numbers(p)
    out.record("fig2b_summary", {
        "params": params_record(p),
        "offset_MHz": args.offset_mhz,
        # atom-induced part: the empty-cavity dispersion is subtracted
        "phase_winding_rad": float((with_atom[-1] - no_atom[-1])
                                   - (with_atom[0] - no_atom[0])),
        "P1_over_P0_resonant": resonant["power_ratio"],
        "A_fraction_resonant": resonant["port1_fraction"],
    })


# fig3 -------------------------------------------------------------------------

def _saturation_curves(p, dist, cfg, xs):
    deltas, weights = dist.nodes()
    gamma_total = p.purcell_rate
    frac1, frac2 = np.zeros(xs.size), np.zeros(xs.size)
    for d, w in zip(deltas, weights):
        q = p.with_delta(d)
        for j, x in enumerate(xs):
            flux = x * gamma_total
            i1, i2 = port_intensities_amplitude(q, math.sqrt(flux), cfg)
            frac1[j] += w * i1 / flux
            frac2[j] += w * i2 / flux
    return frac1, frac2


def _knee(xs, frac):
    """Input rate at which the fraction has dropped halfway from its
    low-power value to its high-power value."""
    lo, hi = frac[0], frac[-1]
    level = 0.5 * (lo + hi)
    above = (frac - level) * np.sign(lo - hi)
    idx = np.nonzero(above < 0)[0]
    if idx.size == 0 or idx[0] == 0:
        return float("nan")
    j = idx[0]
    lx = np.log(xs[j - 1:j + 1])
    t = (level - frac[j - 1]) / (frac[j] - frac[j - 1])
    return float(np.exp(lx[0] + t * (lx[1] - lx[0])))


def cmd_fig3(args, out: Outputs) -> None:
    """Saturation of the port fractions and disorder-averaged g2."""
    p = resolve_params(args)
    cfg = InterferometerConfig.dark_port(p.k)
    dist = DetuningDistribution(two_pi_mhz(args.sigma_delta),
                                n_nodes=args.nodes)
    xs = np.geomspace(args.x_min, args.x_max, args.points)
    frac1, frac2 = _saturation_curves(p, dist, cfg, xs)
    out.traces("fig3_saturation", [
        TraceSeries(xs, frac1, "port A fraction", "input/Gamma", "fraction"),
        TraceSeries(xs, frac2, "port D fraction", "input/Gamma", "fraction"),
    ])

    b_s = math.sqrt(DriveField.from_Y(p, cfg, args.y_drive).photon_flux)
    taus = np.linspace(0.0, args.tau_max_ns, args.tau_points) * NS
    h = HilbertConfig(args.n_max)
    deltas, weights = dist.nodes()
    singles = {"A": 0.0, "D": 0.0}
    coinc = {"A": np.zeros(taus.size), "D": np.zeros(taus.size)}
    cache: dict[float, DrivenSystem] = {}
    bare = {}
    for d, w in zip(deltas, weights):
        key = float(d)
        if key not in cache:
            cache[key] = DrivenSystem(p.with_delta(d), b_s, h, cfg)
        system = cache[key]
        for port in "AD":
            stats = system.port_statistics(port, taus)
            singles[port] += w * stats.intensity
            coinc[port] += w * stats.intensity**2 * stats.g2
            if d == 0.0:
                bare[port] = stats.g2
    g2_traces, rows = [], []
    for port in "AD":
        avg = coinc[port] / singles[port]**2
        g2_traces.append(TraceSeries(taus / NS, avg, f"g2_{port}", "ns", ""))
        rows += [(float(t / NS), float(v), port) for t, v in zip(taus, avg)]
    out.table("fig3_g2", ("tau_ns", "g2", "port"), rows)
    out.record("fig3_summary", {
        "params": params_record(p),
        "sigma_delta_MHz": args.sigma_delta,
        "quadrature_nodes": args.nodes if args.sigma_delta > 0 else 1,
        "Y": args.y_drive,
        "n_max": args.n_max,
        "knee_port_A_input_per_Gamma": _knee(xs, frac1),
        "g2_0": {port: float(tr.y[0]) for port, tr in zip("AD", g2_traces)},
        "g2_0_without_disorder": {k: float(v[0]) for k, v in bare.items()},
    })


# fig4c ------------------------------------------------------------------------

def cmd_fig4c(args, out: Outputs) -> None:
    """Ramsey fringes of the switch, on resonance and detuned."""
    p = resolve_params(args)
    alpha = math.sqrt(args.alpha2)
    thetas = np.linspace(0.0, 2 * math.pi, args.points)
    traces = [no_gate_fringe(thetas)]
    shifts = {}
    for label, d_mhz in (("delta=0", 0.0), ("delta=14MHz", args.detuned_mhz)):
        q = p.with_delta(two_pi_mhz(d_mhz))
        for conditioned in (True, False):
            if alpha == 0:
                # no gate field: the atom is untouched
                tr = no_gate_fringe(thetas)
                shift = 0.0
            else:
                tr = ramsey_fringe(q, alpha, thetas, conditioned)
                shift = fringe_shift(q, alpha, conditioned)
            kind = "conditioned" if conditioned else "unconditioned"
            tr.tag = f"P_on {kind} {label}"
            traces.append(tr)
            shifts[f"{kind} {label}"] = shift / math.pi
    out.traces("fig4c_fringes", traces)
    fid = gate_fidelities(p, alpha) if alpha else {"P_uncond": 1.0,
                                                   "P_cond": float("nan")}
    out.record("fig4c_summary", {
        "params": params_record(p),
        "alpha2": args.alpha2,
        "detuned_MHz": args.detuned_mhz,
        "fringe_shift_over_pi": shifts,
        "fidelities": fid,
    })


# fits -------------------------------------------------------------------------

def _synthetic_spectrum(p, rng, noise, nu_fsr, phase, points):
    nu = np.linspace(-2.0 * nu_fsr, 2.0 * nu_fsr, points)
    model = SpectrumModel(nu_fsr, p.kappa_wg, p.kappa_sc, 1.0, phase)
    total, diff = characterization_spectrum(model, nu)
    scale = float(np.max(total.y))
    total.y = total.y + noise * scale * rng.standard_normal(nu.size)
    diff.y = diff.y + noise * scale * rng.standard_normal(nu.size)
    return total, diff


def _spectrum_fit(p, args, rng):
    if args.input:
        by_tag = {tr.tag: tr for tr in read_traces(args.input)}
        try:
            total, diff = by_tag["D+A"], by_tag["D-A"]
        except KeyError:
            raise CommandError("input needs traces tagged 'D+A' and 'D-A'") \
                from None
        source = f"file {Path(args.input).name}"
    else:
        total, diff = _synthetic_spectrum(p, rng, args.noise, args.nu_fsr,
                                          0.3, args.points)
        source = (f"synthetic model data, {args.noise:g} relative noise, "
                  f"seed {args.seed}")
    fit = fit_spectrum(total.x, total.y, diff.y, n_starts=args.starts,
                       seed=args.seed)
    return fit, total, diff, source


def cmd_spectrum_fit(args, out: Outputs) -> None:
    p = resolve_params(args)
    rng = np.random.default_rng(args.seed)
    fit, total, diff, source = _spectrum_fit(p, args, rng)
    if not fit.converged:
        raise CommandError(f"spectrum fit did not converge: {fit.flags}")
    nu_fsr, kwg, ksc, phase, amp = fit.params
    best = characterization_spectrum(
        SpectrumModel.from_ghz(nu_fsr, kwg, ksc, amp, phase), total.x)
    best[0].tag, best[1].tag = "D+A fit", "D-A fit"
    out.traces("spectrum_fit", [total, diff, *best])
    out.record("spectrum_fit", {"source": source, "fit": fit.as_dict(),
                                "units": "nu_fsr GHz, kappa 2pi GHz"})


def _synthetic_decay(p, rng, counts_total, window_ns):
    # 0.25 ns bins keep most fitted bins well above one count
    t = np.arange(0.0, 20.0, 0.25) * NS
    pulse_end = 3.0 * NS
    rate = p.purcell_rate
    shape = np.exp(-np.clip(t - pulse_end, 0, None) * rate)
    shape[t < pulse_end] = t[t < pulse_end] / pulse_end
    mean = counts_total * shape / shape.sum() + 0.2
    return t, rng.poisson(mean).astype(float), pulse_end + window_ns * NS


def cmd_lifetime_fit(args, out: Outputs) -> None:
    p = resolve_params(args)
    rng = np.random.default_rng(args.seed)
    if args.input:
        tr = read_traces(args.input)[0]
        t, y = tr.x * NS, tr.y
        start = args.window_ns * NS
        source = f"file {Path(args.input).name}"
    else:
        t, y, start = _synthetic_decay(p, rng, args.counts, args.window_ns)
        source = (f"synthetic Poisson decay, {args.counts:g} counts, "
                  f"seed {args.seed}")
    fit = fit_exponential(t, y, start)
    if not fit.converged:
        raise CommandError(f"lifetime fit did not converge: {fit.flags}")
    tau = fit["tau"]
    eta = cooperativity_from_lifetime(tau, p.gamma)
    model = fit["A"] * np.exp(-t / tau) + fit["B"]
    out.traces("lifetime_fit", [
        TraceSeries(t / NS, y, "counts", "ns", "counts"),
        TraceSeries(t[t >= start] / NS, model[t >= start], "fit", "ns",
                    "counts"),
    ])
    out.record("lifetime_fit", {
        "source": source,
        "tau_ns": tau / NS,
        "tau_err_ns": fit.error("tau") / NS,
        "eta": eta,
        "gamma_inv_ns": 1.0 / p.gamma / NS,
        "fit": fit.as_dict(),
    })


# report -----------------------------------------------------------------------

def cmd_report(args, out: Outputs) -> None:
    """Scalar summary of the derived numbers with their provenance."""
    p = resolve_params(args)
    rng = np.random.default_rng(args.seed)
    gamma_lt = 1.0 / (args.gamma_inv_ns * NS)
    eta_lt = cooperativity_from_lifetime(args.tau_ns * NS, gamma_lt)

    args.input = None
    fit, *_ = _spectrum_fit(p, args, rng)
    k_fit = fit.extra["k"]

    q8 = SystemParams.from_cooperativity(8.0, k_fit, p.kappa, p.gamma)
    numbers = interferometer_numbers(q8)
    gate = SystemParams.from_cooperativity(args.gate_eta, args.gate_k,
                                           p.kappa, p.gamma)
    fid = gate_fidelities(gate, math.sqrt(args.alpha2))
    readout = ReadoutModel(args.lambda_on, args.lambda_off, args.threshold)
    f_on, f_off, f_avg = readout_fidelity(readout)

    counts = rng.poisson(np.where(np.arange(args.shots) < args.shots // 2,
                                  args.lambda_on, args.lambda_off))
    out.table("posterior", ("index", "counts", "p_individual",
                            "p_changepoint"), posterior_rows(counts, readout))
    out.record("report", {
        "params": params_record(p),
        "eta_from_lifetime": {
            "value": eta_lt,
            "source": f"(Gamma - gamma)/gamma with tau = {args.tau_ns} ns "
                      f"and 1/gamma = {args.gamma_inv_ns} ns"},
        "k_from_spectrum_fit": {
            "value": k_fit, "error": _k_error(fit),
            "flags": list(fit.flags),
            "source": f"joint sum/difference spectrum fit to synthetic data "
                      f"({args.noise:g} relative noise, seed {args.seed})"},
        "interferometer": {
            "power_ratio": numbers["power_ratio"],
            "port_A_fraction": numbers["port1_fraction"],
            "source": "linear response at eta = 8, fitted k, dark-port "
                      "input angle, phi_v = 0, resonance"},
        "gate_fidelity": {
            "P_cond": fid["P_cond"], "P_uncond": fid["P_uncond"],
            "source": f"coherent-state switch model, eta = {args.gate_eta}, "
                      f"k = {args.gate_k}, |alpha|^2 = {args.alpha2}, "
                      "resonance"},
        "readout_fidelity": {
            "f_on": f_on, "f_off": f_off, "average": f_avg,
            "source": f"Poisson counts, mean {args.lambda_on}/"
                      f"{args.lambda_off}, atom assigned for n > "
                      f"{args.threshold}"},
    })


def _k_error(fit) -> float:
    names = fit.names
    i, j = names.index("kappa_wg"), names.index("kappa_sc")
    kwg, ksc = fit.params[i], fit.params[j]
    kap = kwg + ksc
    grad = np.zeros(len(names))
    grad[i] = ksc / kap**2
    grad[j] = -kwg / kap**2
    return float(math.sqrt(max(grad @ fit.covariance @ grad, 0.0)))


# plotting companion -----------------------------------------------------------

PLOT_TEMPLATE = """\
import csv
import sys
from collections import defaultdict

import matplotlib.pyplot as plt

for name in {names!r}:
    series = defaultdict(lambda: ([], []))
    with open(name, newline="") as fh:
        for row in csv.DictReader(fh):
            key = row.get("tag") or row.get("port")
            xs, ys = series[key]
            xs.append(float(row.get("x") or row.get("tau_ns")))
            ys.append(float(row.get("y") or row.get("g2")))
    plt.figure()
    for key, (xs, ys) in series.items():
        plt.plot(xs, ys, label=key)
    plt.legend()
    plt.title(name)
    plt.savefig(name.rsplit(".", 1)[0] + ".png", dpi=150)
"""


def _plot_script(out: Outputs, command: str) -> None:
    names = sorted(n for n in out.files if n.endswith(".csv")
                   and n != "posterior.csv")
    if names:
        out.text(f"plot_{command.replace('-', '_')}.py",
                 PLOT_TEMPLATE.format(names=names))


# argument parsing -------------------------------------------------------------

COMMANDS = {
    "fig2b": cmd_fig2b,
    "fig3": cmd_fig3,
    "fig4c": cmd_fig4c,
    "spectrum-fit": cmd_spectrum_fit,
    "lifetime-fit": cmd_lifetime_fit,
    "report": cmd_report,
}


def _common(parser):
    parser.add_argument("--params", help="flat key = value parameter file")
    parser.add_argument("--out", default=".", help="output directory")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--sigma-delta", type=float, default=60.0,
                        help="detuning spread, MHz")
    parser.add_argument("--alpha2", type=float, default=0.6,
                        help="mean gate photon number |alpha|^2")
    parser.add_argument("--eta", type=float, help="override cooperativity")
    parser.add_argument("--k", type=float, help="override kappa_wg/kappa")
    parser.add_argument("--n-max", type=int, default=4,
                        help="Fock space cutoff")
    parser.add_argument("--plot-script", action="store_true",
                        help="also write a matplotlib script for the CSVs")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="phaseswitch",
        description="Theory curves for an atom in a lossy one-sided cavity "
                    "inside a polarization interferometer.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fig2b", help="phase shift versus detuning")
    _common(p)
    p.add_argument("--span-mhz", type=float, default=500.0)
    p.add_argument("--points", type=int, default=1001)
    p.add_argument("--offset-mhz", type=float, default=5.0,
                   help="atom-cavity resonance offset")

    p = sub.add_parser("fig3", help="saturation and g2")
    _common(p)
    p.add_argument("--x-min", type=float, default=1e-3)
    p.add_argument("--x-max", type=float, default=1e2)
    p.add_argument("--points", type=int, default=61)
    p.add_argument("--nodes", type=int, default=201,
                   help="Gauss-Hermite nodes")
    p.add_argument("--y-drive", type=float, default=0.1,
                   help="drive Y for the g2 curves")
    p.add_argument("--tau-max-ns", type=float, default=20.0)
    p.add_argument("--tau-points", type=int, default=201)

    p = sub.add_parser("fig4c", help="switch Ramsey fringes")
    _common(p)
    p.add_argument("--points", type=int, default=181)
    p.add_argument("--detuned-mhz", type=float, default=14.0)

    for name, helptext in (("spectrum-fit", "interferometer spectrum fit"),
                           ("report", "summary of derived numbers")):
        p = sub.add_parser(name, help=helptext)
        _common(p)
        p.add_argument("--input", help="CSV with 'D+A' and 'D-A' traces")
        p.add_argument("--noise", type=float, default=0.01)
        p.add_argument("--nu-fsr", type=float, default=33.0, help="GHz")
        p.add_argument("--points", type=int, default=801)
        p.add_argument("--starts", type=int, default=8)
        if name == "report":
            p.add_argument("--tau-ns", type=float, default=3.0)
            p.add_argument("--gamma-inv-ns", type=float, default=26.0)
            p.add_argument("--gate-eta", type=float, default=8.0)
            p.add_argument("--gate-k", type=float, default=0.8)
            p.add_argument("--lambda-on", type=float, default=6.2)
            p.add_argument("--lambda-off", type=float, default=0.2)
            p.add_argument("--threshold", type=int, default=1)
            p.add_argument("--shots", type=int, default=20)

    p = sub.add_parser("lifetime-fit", help="excited-state lifetime fit")
    _common(p)
    p.add_argument("--input", help="CSV trace of counts versus time (ns)")
    p.add_argument("--window-ns", type=float, default=1.0,
                   help="fit start after the excitation pulse")
    p.add_argument("--counts", type=float, default=1e4)
    return parser


def _validate(args) -> None:
    for name in ("points", "tau_points"):
        if getattr(args, name, 2) < 2:
            raise ParameterError(f"--{name.replace('_', '-')} must be >= 2")
    if args.sigma_delta < 0:
        raise ParameterError("--sigma-delta must be non-negative")
    if args.alpha2 < 0:
        raise ParameterError("--alpha2 must be non-negative")
    if args.seed < 0 or args.seed >= 2**64:
        raise ParameterError("--seed must be an unsigned 64-bit integer")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out = Outputs(Path(args.out), args.format)
    try:
        _validate(args)
        with warnings.catch_warnings():
            warnings.simplefilter("always")
            COMMANDS[args.command](args, out)
        if args.plot_script:
            _plot_script(out, args.command)
        for path in out.commit():
            print(path)
    except (CommandError, ConvergenceError, ParameterError, ValueError,
            ArithmeticError, OSError) as exc:
        print(f"{args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
