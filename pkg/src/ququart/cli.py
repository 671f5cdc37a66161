"""Command-line front end: synthesis, verification, simulation, benchmarks.

Configs are flat ``key = value`` text files (``#`` comments); frequencies are
given in GHz, drive amplitudes in MHz, times in ns.  Output files are written
atomically (temp file + rename) and contain no timestamps, so reruns of the
same config are byte-identical.  Exit codes: 0 success, 1 failed check,
2 invalid input, 3 numerical non-convergence; errors are also emitted as
JSON on stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

import numpy as np
from scipy.linalg import expm
from scipy.stats import unitary_group

from .circuits import (
    ConvergenceError,
    QuditCircuit,
    ValidationError,
    circuit_from_json,
    circuit_to_json,
    circuit_unitary,
    matrix_from_json,
    matrix_to_json,
)
from .controlled import decompose_cm_u
from .cost import benchmark_table, count_resources, format_benchmark_table
from .csd import csd_synthesize
from .fidelity import process_fidelity_unitary

TWO_PI = 2.0 * np.pi


# ---------------------------------------------------------------------------
# config / io helpers


def parse_config(path: str) -> dict[str, str]:
    """Read a flat ``key = value`` file; later keys override earlier ones."""
    if not os.path.exists(path):
        raise ValidationError(f"config file not found: {path}")
    out: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValidationError(f"{path}:{lineno}: expected 'key = value'")
            key, value = line.split("=", 1)
            out[key.strip()] = value.strip()
    return out


def config_float(cfg: dict[str, str], key: str, default: float | None = None) -> float:
    if key not in cfg or cfg[key] == "":
        if default is None:
            raise ValidationError(f"missing config key: {key}")
        return default
    try:
        return float(cfg[key])
    except ValueError as exc:
        raise ValidationError(f"config key {key}: not a number: {cfg[key]!r}") from exc


def config_floats(cfg: dict[str, str], key: str, default: Sequence[float]) -> list[float]:
    if key not in cfg or cfg[key] == "":
        return list(default)
    try:
        return [float(tok) for tok in cfg[key].split(",") if tok.strip()]
    except ValueError as exc:
        raise ValidationError(f"config key {key}: bad list: {cfg[key]!r}") from exc


def write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(text)
    os.replace(tmp, path)


def write_json(path: str, payload: object) -> None:
    write_atomic(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def load_matrix(path: str) -> np.ndarray:
    if not os.path.exists(path):
        raise ValidationError(f"matrix file not found: {path}")
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: not valid JSON: {exc}") from exc
    return matrix_from_json(data)


def require_unitary(u: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ValidationError(f"matrix must be square, got shape {u.shape}")
    defect = np.abs(u.conj().T @ u - np.eye(u.shape[0])).max()
    if defect > tol:
        raise ValidationError(f"matrix is not unitary (defect {defect:.2e})")
    return u


# ---------------------------------------------------------------------------
# model construction from config (published device parameters as defaults)


def model_from_config(cfg: dict[str, str]):
    from .transmon.model import build_pair_model, transmon_from_spectrum

    control = transmon_from_spectrum(
        TWO_PI * config_float(cfg, "control_frequency_ghz", 6.3),
        TWO_PI * config_float(cfg, "control_anharmonicity_ghz", -0.310),
    )
    target = transmon_from_spectrum(
        TWO_PI * config_float(cfg, "target_frequency_ghz", 6.1),
        TWO_PI * config_float(cfg, "target_anharmonicity_ghz", -0.300),
    )
    coupling = TWO_PI * config_float(cfg, "coupling_ghz", 1.8e-3)
    return build_pair_model(control, target, coupling)


def noise_from_config(cfg: dict[str, str]):
    from .transmon.evolve import NoiseParams

    t1 = config_float(cfg, "t1_ns", 0.0) or None
    t2 = config_float(cfg, "t2_ns", 0.0) or None
    if t2 is None and t1 is not None:
        raise ValidationError("t1_ns without t2_ns is not supported")
    return NoiseParams(t1=t1, t2=t2)


# ---------------------------------------------------------------------------
# subcommands


def cmd_synthesize(args: argparse.Namespace) -> int:
    u = require_unitary(load_matrix(args.matrix))
    if args.mode == "cmu":
        if args.m is None:
            raise ValidationError("--mode cmu requires --m")
        circuit = decompose_cm_u(args.m, u)
    else:
        if u.shape[0] != 16:
            raise ValidationError(f"csd mode expects a 16x16 unitary, got {u.shape[0]}")
        circuit = csd_synthesize(u)
    out = args.out or os.path.splitext(args.matrix)[0] + ".circuit.json"
    write_json(out, circuit_to_json(circuit))
    report = count_resources(circuit)
    fid = process_fidelity_unitary(circuit_unitary(circuit), u)
    print(f"wrote {out}")
    print(f"fidelity        {fid:.12f}")
    print(f"ecr_count       {report.ecr_count}")
    print(f"cnot_equiv      {report.cnot_equiv}")
    print(f"sqrtx_equiv     {report.sqrtx_equiv}")
    print(f"local_gates     {report.local_gate_count}")
    print(f"virtual_phases  {report.virtual_phase_count}")
    print(f"total_ecr_angle {report.total_ecr_angle}")
    return 0


def cmd_check(args: argparse.Namespace) -> int:
    with open(args.circuit, encoding="utf-8") as fh:
        try:
            circuit = circuit_from_json(json.load(fh))
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{args.circuit}: not valid JSON: {exc}") from exc
    target = load_matrix(args.matrix)
    u = circuit_unitary(circuit)
    if u.shape != target.shape:
        raise ValidationError(
            f"dimension mismatch: circuit {u.shape[0]}, target {target.shape[0]}"
        )
    fid = process_fidelity_unitary(u, target)
    ok = 1.0 - fid <= args.tol
    print(f"fidelity {fid:.15f}")
    print(f"{'PASS' if ok else 'FAIL'} (tol {args.tol:g})")
    return 0 if ok else 1


def cmd_simulate_ecr(args: argparse.Namespace) -> int:
    from .transmon.calibrate import effective_qubit_rates
    from .transmon.ecr import (
        DEFAULT_CR_AMPLITUDE,
        cached_ecr_channel,
        calibrate_ecr,
        ecr_channel_fidelity,
        ecr_population_traces,
        simulate_ecr_unitary,
        static_zz_rate,
    )

    cfg = parse_config(args.config)
    model = model_from_config(cfg)
    amp_key = config_float(cfg, "cr_amplitude_mhz", 0.0)
    amplitude = TWO_PI * amp_key * 1e-3 if amp_key else DEFAULT_CR_AMPLITUDE
    cal = calibrate_ecr(model, amplitude=amplitude)
    result = simulate_ecr_unitary(model, cal)

    summary = {
        "cr_tau_s_ns": cal.cr.tau_s,
        "cr_duration_ns": cal.cr.duration,
        "ecr_duration_ns": cal.duration,
        "pi_amplitude_mhz": cal.pi_amplitude / TWO_PI * 1e3,
        "conditional_phases_pi": [float(p) / np.pi for p in cal.cr.phis],
        "cr_fidelity": cal.cr.fidelity,
        "ecr_fidelity": result.fidelity,
        "leakage": result.leakage,
        "control_mixing": {str(k): v for k, v in result.mixing.items()},
        "static_zz_khz": static_zz_rate(model) / TWO_PI * 1e6,
    }
    noise = noise_from_config(cfg)
    if not noise.is_trivial:
        channel = cached_ecr_channel(model, cal, noise)
        summary["noisy_fidelity"] = ecr_channel_fidelity(channel, result)
        summary["noise"] = {"t1_ns": noise.t1, "t2_ns": noise.t2}
    if cfg.get("rates", "false").lower() == "true":
        rates = effective_qubit_rates(model, amplitude)
        summary["zx_rate_mhz"] = rates["ZX"] / TWO_PI * 1e3
        summary["zz_rate_mhz"] = rates["ZZ"] / TWO_PI * 1e3

    os.makedirs(args.out_dir, exist_ok=True)
    write_json(os.path.join(args.out_dir, "ecr_summary.json"), summary)

    if cfg.get("populations", "true").lower() == "true":
        d = model.d
        starts = np.zeros((model.dim, d), dtype=complex)
        for c in range(d):
            starts[c * d, c] = 1.0  # |c0>
        times, pops = ecr_population_traces(model, cal, starts)
        lines = ["time_ns,initial," + ",".join(f"p{i}{j}" for i in range(d) for j in range(d))]
        for s in range(d):
            for k, t in enumerate(times):
                row = ",".join(repr(float(p)) for p in pops[k, :, s])
                lines.append(f"{float(t)!r},{s}0,{row}")
        write_atomic(
            os.path.join(args.out_dir, "ecr_populations.csv"), "\n".join(lines) + "\n"
        )
    print(f"ecr fidelity {result.fidelity:.6f}; outputs in {args.out_dir}")
    return 0


def cmd_qec(args: argparse.Namespace) -> int:
    from .qec.cycle import (
        T_MEAS_DEFAULT,
        CycleGates,
        bare_fidelity,
        cycle_vs_bare,
        fit_fidelity_decay,
        ideal_gates,
        interpolate_crossing,
        pulse_level_gates,
        repeated_cycle_fidelities,
        t1_sweep,
    )
    from .transmon.evolve import NoiseParams

    cfg = parse_config(args.config)
    t2 = config_float(cfg, "t2_ns", 200e3)
    t1 = config_float(cfg, "t1_ns", 0.0) or None
    noise = NoiseParams(t1=t1, t2=t2)
    modes = [m.strip() for m in cfg.get("modes", "bare,ideal").split(",") if m.strip()]
    unknown = set(modes) - {"bare", "ideal", "pulse"}
    if unknown:
        raise ValidationError(f"unknown modes: {sorted(unknown)}")

    gates: dict[str, CycleGates] = {}
    if "ideal" in modes:
        gates["ideal"] = ideal_gates()
    if "pulse" in modes:
        model = model_from_config(cfg)
        gates["pulse"] = pulse_level_gates(
            model, noise, t_meas=config_float(cfg, "t_meas_ns", T_MEAS_DEFAULT)
        )

    start = config_float(cfg, "sweep_start", 0.01)
    stop = config_float(cfg, "sweep_stop", 0.50)
    step = config_float(cfg, "sweep_step", 0.01)
    fractions = np.arange(start, stop + step / 2, step)
    taus = fractions * t2

    columns: dict[str, np.ndarray] = {}
    fits: dict[str, object] = {"t2_ns": t2, "single_cycle": {}}
    for mode, g in gates.items():
        corr = np.empty(len(taus))
        bare = np.empty(len(taus))
        for k, tau in enumerate(taus):
            corr[k], bare[k] = cycle_vs_bare(g, noise, tau)
        columns[f"F_{mode}"] = corr
        red = 1.0 - (1.0 - corr) / (1.0 - bare)
        kmax = int(np.argmax(red))
        entry = {
            "max_error_reduction": float(red[kmax]),
            "argmax_tau_over_t2": float(fractions[kmax]),
        }
        try:
            entry["break_even_tau_over_t2"] = interpolate_crossing(
                fractions, corr - bare
            )
        except ValueError:
            entry["break_even_tau_over_t2"] = None
        fits["single_cycle"][mode] = entry
    columns["F_bare"] = np.array([bare_fidelity(t, noise) for t in taus])

    header = ["tau_phi_ns", "tau_over_t2", "F_bare"] + [
        f"F_{m}" for m in gates
    ]
    lines = [",".join(header)]
    for k in range(len(taus)):
        row = [repr(float(taus[k])), repr(float(fractions[k])), repr(float(columns["F_bare"][k]))]
        row += [repr(float(columns[f"F_{m}"][k])) for m in gates]
        lines.append(",".join(row))
    os.makedirs(args.out_dir, exist_ok=True)
    write_atomic(os.path.join(args.out_dir, "qec_sweep.csv"), "\n".join(lines) + "\n")

    n_cycles = int(config_float(cfg, "n_cycles", 25))
    dts = config_floats(cfg, "delta_t_corr_ns", [2e3, 5e3, 10e3, 20e3, 50e3])
    if n_cycles < 3:
        fits["repeated"] = {"skipped": f"n_cycles = {n_cycles} < 3: fit underdetermined"}
        print(f"repeated-cycle fit skipped (n_cycles = {n_cycles} < 3)")
    else:
        rows = []
        for mode, g in gates.items():
            for dt in dts:
                times, fids = repeated_cycle_fidelities(g, noise, dt, n_cycles)
                fit = fit_fidelity_decay(times, fids)
                rows.append(
                    {
                        "mode": mode,
                        "delta_t_corr_ns": dt,
                        "t2_eff_ns": fit.t2_eff,
                        "f_inf": fit.f_inf,
                    }
                )
        # bare reference over the same wall-clock spans
        span = max(dts) * n_cycles
        times = np.linspace(span / n_cycles, span, n_cycles)
        fit = fit_fidelity_decay(times, np.array([bare_fidelity(t, noise) for t in times]))
        fits["repeated"] = rows
        fits["bare"] = {"t2_eff_ns": fit.t2_eff, "f_inf": fit.f_inf}

    ratios = config_floats(cfg, "t1_ratios", [])
    if ratios:
        frac = config_float(cfg, "t1_tau_phi", 0.12)
        sweep_fits = {}
        for mode, g in gates.items():
            if mode == "pulse":
                model = model_from_config(cfg)
                factory = lambda n: pulse_level_gates(  # noqa: E731
                    model, n, t_meas=config_float(cfg, "t_meas_ns", T_MEAS_DEFAULT)
                )
            else:
                factory = lambda n: g  # noqa: E731
            res = t1_sweep(factory, t2, np.asarray(ratios), wait_fraction=frac)
            sweep_fits[mode] = {
                "break_even_t1_over_t2": res.break_even_ratio,
                "ratios": list(res.ratios),
                "corrected": [float(x) for x in res.corrected],
                "bare": [float(x) for x in res.bare],
            }
        fits["t1_sweep"] = sweep_fits

    write_json(os.path.join(args.out_dir, "qec_fits.json"), fits)
    print(f"qec outputs in {args.out_dir}")
    return 0


def cmd_bench(args: argparse.Namespace) -> int:
    entries: list[tuple[str, QuditCircuit]] = []
    rng = np.random.default_rng(args.seed)
    u = unitary_group.rvs(16, random_state=rng)
    entries.append(("random_su16", csd_synthesize(u)))
    if args.hamiltonian:
        h = load_matrix(args.hamiltonian)
        if np.abs(h - h.conj().T).max() > 1e-10:
            raise ValidationError("workload matrix must be Hermitian")
        if h.shape[0] != 16:
            raise ValidationError(f"workload must be 16x16, got {h.shape[0]}")
        entries.append(("lih_t10", csd_synthesize(expm(-1j * args.time * h))))
    table = benchmark_table(entries)
    print(format_benchmark_table(table))
    if args.out:
        write_json(args.out, table)
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ququart",
        description="Ququart circuit synthesis, pulse simulation, and error correction.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synthesize", help="decompose a unitary into an ECR/local circuit")
    p.add_argument("matrix", help="JSON matrix file (16x16 unitary)")
    p.add_argument("--mode", choices=("csd", "cmu"), default="csd")
    p.add_argument("--m", type=int, default=None, help="control level for cmu mode")
    p.add_argument("--out", default=None, help="circuit JSON output path")
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("check", help="verify a circuit JSON against a target matrix")
    p.add_argument("circuit")
    p.add_argument("matrix")
    p.add_argument("--tol", type=float, default=1e-8)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("simulate-ecr", help="calibrate and simulate the echoed CR gate")
    p.add_argument("config")
    p.add_argument("--out-dir", default="ecr_out")
    p.set_defaults(func=cmd_simulate_ecr)

    p = sub.add_parser("qec", help="run error-correction cycle sweeps")
    p.add_argument("config")
    p.add_argument("--out-dir", default="qec_out")
    p.set_defaults(func=cmd_qec)

    p = sub.add_parser("bench", help="resource benchmark against reference counts")
    p.add_argument("--hamiltonian", default=None, help="Hermitian 16x16 JSON workload")
    p.add_argument("--time", type=float, default=10.0, help="evolution time for the workload")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--out", default=None, help="write the table as JSON")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        json.dump({"error": {"type": "validation", "message": str(exc)}}, sys.stderr)
        sys.stderr.write("\n")
        return 2
    except ConvergenceError as exc:
        json.dump({"error": {"type": "convergence", "message": str(exc)}}, sys.stderr)
        sys.stderr.write("\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
