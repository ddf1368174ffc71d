"""Command-line front end: run gates and protocols, sweep grids, optimize
capacities, and emit figure datasets with rendered plots and the
discrepancy report.

Single runs emit JSON; sweeps and figure datasets emit CSV (one row per
grid point). Floats are serialized with 17 significant digits so files
round-trip exactly, and identical invocations produce byte-identical
files. The environment variable CFDUPLEX_OUTDIR supplies the default
output directory.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict

import numpy as np

from . import channels, figures, hilbert, montecarlo, protocols, zeno
from .protocols import DuplexMessage, QubitState, TelexMessage
from .zeno import Variant, ZenoParams

SCHEMA_VERSION = 1
ENV_OUTDIR = "CFDUPLEX_OUTDIR"


# ----------------------------------------------------------------------
# serialization helpers


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return "%.17g" % v
    return str(v)


def _csv_text(header: list[str], rows: list[list]) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _resolve_out(path: str | None) -> str | None:
    if path is None:
        return None
    base = os.environ.get(ENV_OUTDIR)
    if base and not os.path.isabs(path):
        return os.path.join(base, path)
    return path


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(text)


def _parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex amplitude: {text!r}") from None


def _parse_qubit(a: str, b: str, names: str) -> QubitState:
    v0, v1 = _parse_complex(a), _parse_complex(b)
    n = abs(v0) ** 2 + abs(v1) ** 2
    if abs(n - 1.0) > 1e-9:
        raise ValueError(f"{names} amplitudes have norm^2 {n:.12g}, expected 1 within 1e-9")
    scale = 1.0 / math.sqrt(n)
    return QubitState(v0 * scale, v1 * scale)


def _parse_grid(text: str) -> list[int]:
    """Integer grid syntax: 'a,b,c' or 'lo:hi[:step]' or 'lo:hi:x2' (geometric)."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) == 2:
            lo, hi = int(parts[0]), int(parts[1])
            return list(range(lo, hi + 1))
        lo, hi, step = parts
        lo, hi = int(lo), int(hi)
        if step.startswith("x"):
            factor = float(step[1:])
            out, v = [], float(lo)
            while round(v) <= hi:
                out.append(int(round(v)))
                v *= factor
            return sorted(set(out))
        return list(range(lo, hi + 1, int(step)))
    return [int(x) for x in text.split(",") if x]


def _state_records(state: hilbert.StateVector) -> list[dict]:
    out = []
    arr = state.reshaped()
    for idx in np.ndindex(*state.dims):
        amp = arr[idx]
        rec = {lbl: int(i) for lbl, i in zip(state.labels, idx)}
        rec["re"] = float(amp.real)
        rec["im"] = float(amp.imag)
        out.append(rec)
    return out


def _relative_difference(value: float, reference: float) -> float:
    if reference <= 0.0:
        return 0.0 if value <= 0.0 else float("inf")
    return abs(value - reference) / reference


# ----------------------------------------------------------------------
# gate command


def _cmd_gate(args) -> int:
    params = ZenoParams(
        inner_cycles=args.n,
        outer_cycles=args.m,
        gate_count=None,
    )
    variant = Variant.H if args.variant == "h" else Variant.V
    pol = hilbert.SubsystemSpec("pol", 2)
    electron = hilbert.SubsystemSpec("electron", 2)

    def quantum_pair() -> hilbert.StateVector:
        e = hilbert.from_amplitudes([electron], _parse_qubit(args.alpha, args.beta, "electron").as_array())
        p = hilbert.basis_state([pol], (variant.pass_index,))
        return hilbert.tensor(e, p)

    def dual_rail() -> hilbert.StateVector:
        e = hilbert.from_amplitudes([electron], _parse_qubit(args.alpha, args.beta, "electron").as_array())
        photon = _parse_qubit(args.gamma, args.delta, "photon")
        rails = hilbert.from_amplitudes(
            [pol, hilbert.SubsystemSpec("path", 2)],
            [photon.amp0, 0.0, 0.0, photon.amp1],  # H on path 0, V on path 1
        )
        return hilbert.tensor(e, rails)

    if args.gate in ("qz", "cqz"):
        if args.gate == "cqz" and args.m is None:
            raise ValueError("cqz needs --m")
        fn = zeno.qz_gate if args.gate == "qz" else zeno.cqz_gate
        if args.control in ("absence", "presence"):
            state = hilbert.basis_state([pol], (variant.pass_index,))
            rep = fn(state, variant, args.control, params, mode=args.mode)
        else:
            rep = fn(quantum_pair(), variant, "electron", params, mode=args.mode)
    elif args.gate == "mqz":
        rep = zeno.mqz_gate(quantum_pair(), variant, "electron", params, mode=args.mode)
    elif args.gate == "dmqz":
        rep = zeno.dmqz_gate(dual_rail(), "electron", (0, 1), params, mode=args.mode)
    else:  # dcqz
        if args.m is None:
            raise ValueError("dcqz needs --m")
        rep = zeno.dcqz_entangle(dual_rail(), "electron", params, mode=args.mode)

    payload = {
        "schema_version": SCHEMA_VERSION,
        "gate": args.gate,
        "variant": args.variant,
        "mode": rep.mode,
        "n": args.n,
        "m": args.m,
        "herald_probability": rep.herald_probability,
        "closed_form_probability": rep.closed_form_probability,
        "relative_difference": _relative_difference(
            rep.herald_probability, rep.closed_form_probability
        ),
        "channel_exposure": rep.channel_exposure,
        "ledger": dict(sorted(rep.output_state.loss_ledger.items())),
        "output_amplitudes": _state_records(rep.output_state),
    }
    _emit(_json_text(payload), _resolve_out(args.out))
    return 0


# ----------------------------------------------------------------------
# protocol commands


def _cmd_duplex(args) -> int:
    params = ZenoParams(inner_cycles=args.n, gate_count=args.k)
    message = DuplexMessage(args.b1, args.b2)
    if args.mode == "montecarlo":
        ens = montecarlo.sample_protocol(
            "duplex", message, params, trials=args.trials, seed=args.seed, workers=args.workers
        )
        run = protocols.duplex_run(message, params, mode="cycle")
        payload = {
            "schema_version": SCHEMA_VERSION,
            "protocol": "duplex",
            "mode": "montecarlo",
            "n": args.n,
            "k": args.k,
            "sent_bits": [message.b1, message.b2],
            "trials": ens.trials,
            "seed": ens.seed,
            "counts": ens.counts,
            "empirical_rates": {t: list(r) for t, r in ens.empirical_rates.items()},
            "cycle_herald": run.herald_probability,
            "closed_form_herald": run.closed_form_herald,
        }
    else:
        run = protocols.duplex_run(message, params, mode=args.mode)
        payload = {
            "schema_version": SCHEMA_VERSION,
            "protocol": "duplex",
            "mode": run.mode,
            "n": args.n,
            "k": args.k,
            "sent_bits": [message.b1, message.b2],
            "status": run.status,
            "decoded_bits": list(run.decoded_bits) if run.decoded_bits else None,
            "decode_probability": run.decode_probability,
            "herald_probability": run.herald_probability,
            "closed_form_herald": run.closed_form_herald,
            "relative_difference": _relative_difference(
                run.herald_probability, run.closed_form_herald
            ),
            "ledger": dict(sorted(run.ledger.items())),
        }
    _emit(_json_text(payload), _resolve_out(args.out))
    return 0


def _cmd_telex(args) -> int:
    params = ZenoParams(inner_cycles=args.n, outer_cycles=args.m, gate_count=args.k)
    message = TelexMessage(
        _parse_qubit(args.alpha, args.beta, "eta1"),
        _parse_qubit(args.gamma, args.delta, "eta2"),
    )
    if args.mode == "montecarlo":
        ens = montecarlo.sample_protocol(
            "telex", message, params, trials=args.trials, seed=args.seed, workers=args.workers
        )
        run = protocols.telex_run(message, params, mode="cycle", mu=0)
        payload = {
            "schema_version": SCHEMA_VERSION,
            "protocol": "telex",
            "mode": "montecarlo",
            "m": args.m,
            "n": args.n,
            "k": args.k,
            "trials": ens.trials,
            "seed": ens.seed,
            "counts": ens.counts,
            "empirical_rates": {t: list(r) for t, r in ens.empirical_rates.items()},
            "cycle_herald": run.herald_probability,
            "closed_form_herald": run.closed_form_herald,
        }
    else:
        mu = None if args.mu == "sample" else int(args.mu)
        rng = np.random.default_rng(args.seed) if mu is None else None
        run = protocols.telex_run(message, params, mode=args.mode, mu=mu, rng=rng)
        payload = {
            "schema_version": SCHEMA_VERSION,
            "protocol": "telex",
            "mode": run.mode,
            "m": args.m,
            "n": args.n,
            "k": args.k,
            "status": run.status,
            "announcement": run.announcement,
            "fidelity": run.fidelity,
            "herald_probability": run.herald_probability,
            "closed_form_herald": run.closed_form_herald,
            "relative_difference": _relative_difference(
                run.herald_probability, run.closed_form_herald
            ),
            "ledger": dict(sorted(run.ledger.items())),
            "alice_state": None
            if run.output_states is None
            else [[c.real, c.imag] for c in (run.output_states[0].amp0, run.output_states[0].amp1)],
            "bob_state": None
            if run.output_states is None
            else [[c.real, c.imag] for c in (run.output_states[1].amp0, run.output_states[1].amp1)],
        }
    _emit(_json_text(payload), _resolve_out(args.out))
    return 0


# ----------------------------------------------------------------------
# capacity command

CAPACITY_HEADER = [
    "schema_version",
    "channel",
    "m",
    "n",
    "k",
    "alpha_sq",
    "gamma_sq",
    "lambda0",
    "lambda1",
    "zeta",
    "capacity",
    "p_star",
    "reference_capacity",
    "reference_p_star",
    "capacity_diff",
    "p_star_diff",
]

_CQZ_REFS = {(2, 2): (0.1515, 0.606), (2, 81): (0.8, 0.466)}


def _cmd_capacity(args) -> int:
    row = dict.fromkeys(CAPACITY_HEADER, "")
    row["schema_version"] = SCHEMA_VERSION
    row["channel"] = args.channel
    if args.channel == "cqz":
        if args.m is None or args.n is None:
            raise ValueError("cqz capacity needs --m and --n")
        ch = channels.cqz_channel(args.m, args.n)
        res = channels.bec_capacity(ch)
        row.update(
            m=args.m, n=args.n, lambda0=ch.lambda0, lambda1=ch.lambda1,
            capacity=res.capacity, p_star=res.p_star,
        )
        ref = _CQZ_REFS.get((args.m, args.n))
        if ref:
            row.update(
                reference_capacity=ref[0],
                reference_p_star=ref[1],
                capacity_diff=abs(res.capacity - ref[0]),
                p_star_diff=abs(res.p_star - ref[1]),
            )
    elif args.channel == "duplex":
        if args.n is None:
            raise ValueError("duplex capacity needs --n")
        if args.k is None:
            k, res = channels.optimize_duplex_K(args.n)
        else:
            k, res = args.k, channels.duplex_capacity(args.n, args.k)
        row.update(n=args.n, k=k, zeta=res.parameters["zeta_c"], capacity=res.capacity)
    else:  # telex
        if args.n is None:
            raise ValueError("telex capacity needs --n")
        if args.m is None or args.k is None:
            opt = channels.optimize_telex(args.n, args.alpha_sq, args.gamma_sq)
            m, k, zeta, q = opt.m_star, opt.k_star, opt.zeta_q, opt.q
        else:
            d1 = args.alpha_sq * args.gamma_sq + (1 - args.alpha_sq) * (1 - args.gamma_sq)
            zeta = zeno.lambda3(args.alpha_sq, args.m, args.n) * zeno.lambda4(
                d1, args.n, args.k
            ) ** args.k
            m, k, q = args.m, args.k, channels.telex_capacity(zeta)
        row.update(
            m=m, n=args.n, k=k, alpha_sq=args.alpha_sq, gamma_sq=args.gamma_sq,
            zeta=zeta, capacity=q,
        )
        if args.n == 218 and args.alpha_sq == 0.5 and args.m is None:
            row.update(reference_capacity=1.0, capacity_diff=abs(q - 1.0))
    rows = [[row[c] for c in CAPACITY_HEADER]]
    if args.format == "json":
        _emit(_json_text({c: row[c] for c in CAPACITY_HEADER}), _resolve_out(args.out))
    else:
        _emit(_csv_text(CAPACITY_HEADER, rows), _resolve_out(args.out))
    return 0


# ----------------------------------------------------------------------
# sweep command

SWEEP_HEADERS = {
    "cqz": ["schema_version", "m", "n", "lambda0", "lambda1", "capacity", "p_star"],
    "duplex": ["schema_version", "n", "k", "lambda2", "zeta_c", "capacity"],
    "telex": ["schema_version", "n", "m", "k", "alpha_sq", "gamma_sq", "zeta_q", "q"],
}


def _sweep_row(job: tuple) -> list:
    what, key, extra = job
    if what == "cqz":
        m, n = key
        ch = channels.cqz_channel(m, n)
        res = channels.bec_capacity(ch)
        return [SCHEMA_VERSION, m, n, ch.lambda0, ch.lambda1, res.capacity, res.p_star]
    if what == "duplex":
        n, k = key
        if k is None:
            k, res = channels.optimize_duplex_K(n)
        else:
            res = channels.duplex_capacity(n, k)
        return [SCHEMA_VERSION, n, k, zeno.lambda2(n, k), res.parameters["zeta_c"], res.capacity]
    n = key[0]
    alpha_sq, gamma_sq, m, k = extra
    if m is None or k is None:
        opt = channels.optimize_telex(n, alpha_sq, gamma_sq)
        m, k, zeta, q = opt.m_star, opt.k_star, opt.zeta_q, opt.q
    else:
        d1 = alpha_sq * gamma_sq + (1 - alpha_sq) * (1 - gamma_sq)
        zeta = zeno.lambda3(alpha_sq, m, n) * zeno.lambda4(d1, n, k) ** k
        q = channels.telex_capacity(zeta)
    return [SCHEMA_VERSION, n, m, k, alpha_sq, gamma_sq, zeta, q]


def _cmd_sweep(args) -> int:
    ns = _parse_grid(args.n_grid)
    if args.what == "cqz":
        ms = _parse_grid(args.m_grid) if args.m_grid else [2]
        jobs = [("cqz", (m, n), None) for m in ms for n in ns]
    elif args.what == "duplex":
        ks = _parse_grid(args.k_grid) if args.k_grid else [None]
        jobs = [("duplex", (n, k), None) for n in ns for k in ks]
    else:
        extra = (args.alpha_sq, args.gamma_sq, args.m, args.k)
        jobs = [("telex", (n,), extra) for n in ns]

    if args.workers <= 1:
        rows = [_sweep_row(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            rows = list(pool.map(_sweep_row, jobs))
    _emit(_csv_text(SWEEP_HEADERS[args.what], rows), _resolve_out(args.out))
    return 0


# ----------------------------------------------------------------------
# figures command


def _cmd_figures(args) -> int:
    outdir = _resolve_out(args.out) or os.environ.get(ENV_OUTDIR, ".")
    os.makedirs(outdir, exist_ok=True)
    which = ("fig4", "fig7", "fig9", "fig10") if args.which == "all" else (args.which,)
    written: list[str] = []

    def save(name: str, text: str) -> None:
        path = os.path.join(outdir, name)
        with open(path, "w", newline="") as fh:
            fh.write(text)
        written.append(path)

    if "fig4" in which:
        rows = figures.fig4_dataset(figures.geometric_grid(2, args.n_max))
        save("fig4.csv", _csv_text(figures.FIG4_HEADER, rows))
        if not args.no_plot:
            figures.render_fig4(rows, os.path.join(outdir, "fig4.png"))
            written.append(os.path.join(outdir, "fig4.png"))
    if "fig7" in which:
        ns = [2 ** j for j in range(1, int(math.log2(args.n_max)) + 1)]
        grid, traj = figures.fig7_dataset(ns)
        save("fig7_grid.csv", _csv_text(figures.FIG7_HEADER, grid))
        save("fig7_kstar.csv", _csv_text(figures.FIG7_KSTAR_HEADER, traj))
        if not args.no_plot:
            figures.render_fig7(grid, traj, os.path.join(outdir, "fig7.png"))
            written.append(os.path.join(outdir, "fig7.png"))
    if "fig9" in which:
        rows = figures.fig9_dataset(grid_points=args.grid_points)
        save("fig9.csv", _csv_text(figures.FIG9_HEADER, rows))
        if not args.no_plot:
            figures.render_fig9(rows, os.path.join(outdir, "fig9.png"))
            written.append(os.path.join(outdir, "fig9.png"))
    if "fig10" in which:
        ns = sorted(set(figures.geometric_grid(2, args.n_max)) | {218})
        rows = figures.fig10_dataset(ns)
        save("fig10.csv", _csv_text(figures.FIG10_HEADER, rows))
        if not args.no_plot:
            figures.render_fig10(rows, os.path.join(outdir, "fig10.png"))
            written.append(os.path.join(outdir, "fig10.png"))

    records = [asdict(r) for r in channels.collect_discrepancies()]
    save("discrepancy_report.json", _json_text({"schema_version": SCHEMA_VERSION, "records": records}))
    for r in records:
        status = "ok" if r["within_tolerance"] else "MISS"
        sys.stdout.write(
            f"[{status}] {r['name']} {r['parameters']}: formula={_fmt(r['formula_value'])} "
            f"reference={_fmt(r['reference_value'])} diff={_fmt(r['abs_diff'])}\n"
        )
    for path in written:
        sys.stdout.write(f"wrote {path}\n")
    return 0


# ----------------------------------------------------------------------
# parser


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cfduplex",
        description="Counterfactual full-duplex communication toolkit: Zeno gate "
        "simulators, duplex coding and telexchanging runners, capacity sweeps.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--out", "-o", default=None, help="output file (default stdout)")
        p.add_argument(
            "--config",
            default=None,
            help="key=value file supplying defaults; command-line flags override",
        )

    g = sub.add_parser("gate", help="run a single gate and report its herald")
    g.add_argument("--gate", required=True, choices=["qz", "cqz", "mqz", "dmqz", "dcqz"])
    g.add_argument("--variant", default="h", choices=["h", "v"])
    g.add_argument("--n", type=int, required=True, help="inner cycles N")
    g.add_argument("--m", type=int, default=None, help="outer cycles M (cqz/dcqz)")
    g.add_argument("--control", default="presence", choices=["absence", "presence", "quantum"])
    g.add_argument("--alpha", default="0.7071067811865476", help="electron amplitude for |0>")
    g.add_argument("--beta", default="0.7071067811865476", help="electron amplitude for |1>")
    g.add_argument("--gamma", default="0.7071067811865476", help="photon amplitude for H")
    g.add_argument("--delta", default="0.7071067811865476", help="photon amplitude for V")
    g.add_argument("--mode", default="cycle", choices=["analytic", "cycle"])
    add_common(g)
    g.set_defaults(func=_cmd_gate)

    d = sub.add_parser("duplex", help="run duplex coding for one bit pair")
    d.add_argument("--b1", type=int, required=True, choices=[0, 1])
    d.add_argument("--b2", type=int, required=True, choices=[0, 1])
    d.add_argument("--n", type=int, required=True)
    d.add_argument("--k", type=int, required=True)
    d.add_argument("--mode", default="cycle", choices=["analytic", "cycle", "montecarlo"])
    d.add_argument("--trials", type=int, default=10000)
    d.add_argument("--seed", type=int, default=1)
    d.add_argument("--workers", type=int, default=1)
    add_common(d)
    d.set_defaults(func=_cmd_duplex)

    t = sub.add_parser("telex", help="run telexchanging for one qubit pair")
    t.add_argument("--alpha", default="1", help="eta1 amplitude for |0>")
    t.add_argument("--beta", default="0", help="eta1 amplitude for |1>")
    t.add_argument("--gamma", default="1", help="eta2 amplitude for |0>")
    t.add_argument("--delta", default="0", help="eta2 amplitude for |1>")
    t.add_argument("--m", type=int, required=True)
    t.add_argument("--n", type=int, required=True)
    t.add_argument("--k", type=int, required=True)
    t.add_argument("--mode", default="cycle", choices=["analytic", "cycle", "montecarlo"])
    t.add_argument("--mu", default="sample", choices=["0", "1", "sample"])
    t.add_argument("--trials", type=int, default=10000)
    t.add_argument("--seed", type=int, default=1)
    t.add_argument("--workers", type=int, default=1)
    add_common(t)
    t.set_defaults(func=_cmd_telex)

    c = sub.add_parser("capacity", help="capacity of one channel configuration")
    c.add_argument("--channel", required=True, choices=["cqz", "duplex", "telex"])
    c.add_argument("--m", type=int, default=None)
    c.add_argument("--n", type=int, default=None)
    c.add_argument("--k", type=int, default=None)
    c.add_argument("--alpha-sq", type=float, default=0.5)
    c.add_argument("--gamma-sq", type=float, default=0.5)
    c.add_argument("--format", default="csv", choices=["csv", "json"])
    add_common(c)
    c.set_defaults(func=_cmd_capacity)

    s = sub.add_parser("sweep", help="capacity sweep over a parameter grid")
    s.add_argument("--what", required=True, choices=["cqz", "duplex", "telex"])
    s.add_argument("--n-grid", default="2:1024:x2", help="'a,b,c' or 'lo:hi[:step|:xF]'")
    s.add_argument("--m-grid", default=None)
    s.add_argument("--k-grid", default=None)
    s.add_argument("--m", type=int, default=None, help="fixed M for telex rows")
    s.add_argument("--k", type=int, default=None, help="fixed K for telex rows")
    s.add_argument("--alpha-sq", type=float, default=0.5)
    s.add_argument("--gamma-sq", type=float, default=0.5)
    s.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    add_common(s)
    s.set_defaults(func=_cmd_sweep)

    f = sub.add_parser("figures", help="emit figure datasets, plots, discrepancy report")
    f.add_argument("--which", default="all", choices=["fig4", "fig7", "fig9", "fig10", "all"])
    f.add_argument("--n-max", type=int, default=1024)
    f.add_argument("--grid-points", type=int, default=21)
    f.add_argument("--no-plot", action="store_true", help="datasets only, skip rendering")
    f.add_argument("--out", "-o", default=None, help="output directory")
    f.add_argument("--config", default=None)
    f.set_defaults(func=_cmd_figures)
    return parser


def _apply_config(argv: list[str]) -> list[str]:
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    if i + 1 >= len(argv):
        raise ValueError("--config needs a file path")
    path = argv[i + 1]
    rest = argv[:i] + argv[i + 2 :]
    if not rest:
        raise ValueError("--config requires a subcommand")
    injected: list[str] = []
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"bad config line (need key=value): {line!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            flag = "--" + key.replace("_", "-")
            if value.lower() in ("true", "yes"):
                injected.append(flag)
            elif value.lower() in ("false", "no"):
                continue
            else:
                injected.extend([flag, value])
    return [rest[0]] + injected + rest[1:]


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        argv = _apply_config(argv)
    except (OSError, ValueError) as exc:
        print(f"cfduplex: {exc}", file=sys.stderr)
        return 2
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"cfduplex: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"cfduplex: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
