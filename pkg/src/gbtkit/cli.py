"""Command-line front end.

Subcommands: discretize, bode, design, simulate, prewarp, verify-tables.
Structured results are printed as JSON; series data goes to CSV; optional
figures are rendered next to the delimited output when --plot is given.

Exit codes: 0 success, 1 domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import design as design_mod
from .design import (
    Channel,
    DesignScenario,
    TypeA,
    TypeB,
    TypeC,
    objective,
    normalization_ref,
    optimize_alpha,
    tradeoff_alpha,
)
from .errors import GbtError
from .gbtcore import DiscretizationSpec, alias_to_alpha, gbt_substitute, is_discrete_stable, prewarp
from .ratfun import PoleZeroGain
from .response import ResponseOptions, bode_grid, lpf_plant
from .simkit import compensate_delay, realize, sine_probe
from .verify import verify_tables

CSV_BODE_COLUMNS = [
    "freq_hz", "mag_db_analog", "mag_db_discrete",
    "phase_deg_analog", "phase_deg_discrete", "mag_err_db", "phase_err_deg",
]
CSV_SIM_COLUMNS = ["n", "t_s", "v_in", "v_out"]


def parse_plant(text: str) -> PoleZeroGain:
    """Parse the plant mini-language.

    ``lpf:fc=<Hz>`` builds the first-order low-pass; ``pzk:k=..,z=..,p=..``
    takes a gain plus ';'-separated complex zeros and poles, e.g.
    ``pzk:k=2,z=1+1j;1-1j,p=1;1``.
    """
    head, _, body = text.partition(":")
    fields = {}
    for item in body.split(","):
        if not item:
            continue
        key, _, value = item.partition("=")
        fields[key.strip()] = value.strip()
    if head == "lpf":
        if "fc" not in fields:
            raise GbtError("lpf plant needs fc=<Hz>")
        return lpf_plant(2.0 * math.pi * float(fields["fc"]))
    if head == "pzk":
        gain = float(fields.get("k", "1"))
        zeros = [complex(v) for v in fields.get("z", "").split(";") if v]
        poles = [complex(v) for v in fields.get("p", "").split(";") if v]
        return PoleZeroGain(gain=gain, zeros=zeros, poles=poles)
    raise GbtError(f"unknown plant kind {head!r} (expected lpf: or pzk:)")


def parse_method(text: str):
    """``euler``, ``tustin``, ``al-alaoui:a=0.3``, ``pole:ap=0.1``, ``gbt:alpha=0.6``."""
    name, _, rest = text.partition(":")
    if not rest:
        return alias_to_alpha(name)
    _, _, value = rest.partition("=")
    return alias_to_alpha(name, float(value))


def _resolve_spec(args) -> DiscretizationSpec:
    if args.alpha is not None and args.method:
        raise GbtError("give either --alpha or --method, not both")
    if args.alpha is not None:
        return DiscretizationSpec.from_alpha(args.alpha, args.fs)
    if args.method:
        shape = parse_method(args.method)
        return DiscretizationSpec(shape, 1.0 / args.fs)
    raise GbtError("one of --alpha or --method is required")


def _opts(args) -> ResponseOptions:
    return ResponseOptions(
        include_zoh=args.zoh,
        extra_delay=args.delay * 1e-9,
        phase_unwrap=True,
    )


def _write_csv(path: str, columns: list[str], rows: list[dict]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)


def _emit(obj: dict, out: str | None) -> None:
    text = json.dumps(obj, indent=2)
    print(text)
    if out:
        Path(out).write_text(text + "\n")


def cmd_discretize(args) -> int:
    plant = parse_plant(args.plant)
    spec = _resolve_spec(args)
    ztf = gbt_substitute(plant, spec)
    report = is_discrete_stable(ztf)
    deq = realize(ztf)
    _emit({
        "alpha": spec.alpha,
        "f_samp": spec.f_samp,
        "num_z_ascending": list(ztf.num.coeffs),
        "den_z_ascending": list(ztf.den.coeffs),
        "difference_equation": {
            "in_coeffs": list(deq.in_coeffs),
            "out_coeffs": list(deq.out_coeffs),
        },
        "stable": report.stable,
        "poles": [[p.real, p.imag] for p in report.poles],
        "pole_magnitudes": list(report.magnitudes),
    }, args.out)
    return 0


def cmd_bode(args) -> int:
    plant = parse_plant(args.plant)
    spec = _resolve_spec(args)
    opts = _opts(args)
    disc = bode_grid(plant, spec, args.f_lo, args.f_hi, args.n,
                     spacing=args.spacing, opts=opts, which="discrete")
    anlg = bode_grid(plant, spec, args.f_lo, args.f_hi, args.n,
                     spacing=args.spacing, opts=opts, which="analog")
    rows = [
        {
            "freq_hz": d.freq,
            "mag_db_analog": a.mag_db,
            "mag_db_discrete": d.mag_db,
            "phase_deg_analog": a.phase_deg,
            "phase_deg_discrete": d.phase_deg,
            "mag_err_db": d.mag_db - a.mag_db,
            "phase_err_deg": d.phase_deg - a.phase_deg,
        }
        for d, a in zip(disc, anlg)
    ]
    if args.out:
        _write_csv(args.out, CSV_BODE_COLUMNS, rows)
        print(f"wrote {len(rows)} rows to {args.out}")
    else:
        writer = csv.DictWriter(sys.stdout, fieldnames=CSV_BODE_COLUMNS,
                                lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    if args.plot:
        from .report import render_bode_figure

        fig_path = args.plot if isinstance(args.plot, str) else _fig_path(args.out)
        render_bode_figure(rows, fig_path,
                           title=f"alpha={spec.alpha}, fs={spec.f_samp:g} Hz")
        print(f"wrote figure {fig_path}")
    return 0


def _fig_path(out: str | None) -> str:
    if out:
        return str(Path(out).with_suffix(".png"))
    return "figure.png"


def load_scenario(path: str) -> tuple[DesignScenario, Channel | None, int | None]:
    doc = json.loads(Path(path).read_text())
    plant_doc = doc["plant"]
    if isinstance(plant_doc, str):
        plant = parse_plant(plant_doc)
    else:
        plant = PoleZeroGain(
            gain=plant_doc["gain"],
            zeros=[_as_complex(v) for v in plant_doc.get("zeros", [])],
            poles=[_as_complex(v) for v in plant_doc.get("poles", [])],
        )
    kind_name = str(doc["kind"]).upper()
    if kind_name == "A":
        kind = TypeA(f_exp=float(doc["f_exp"]))
    elif kind_name == "B":
        kind = TypeB(points=tuple(
            (float(f), float(kl), float(kp)) for f, kl, kp in doc["points"]
        ))
    elif kind_name == "C":
        kind = TypeC(f_start=float(doc["f_start"]), f_end=float(doc["f_end"]))
    else:
        raise GbtError(f"unknown scenario kind {doc['kind']!r}")
    scenario = DesignScenario(
        kind=kind,
        plant=plant,
        period=1.0 / float(doc["f_samp"]),
        f_ref=float(doc["f_ref"]) if "f_ref" in doc else None,
    )
    channel = _parse_channel(doc["channel"]) if "channel" in doc else None
    seed = int(doc["seed"]) if "seed" in doc else None
    return scenario, channel, seed


def _as_complex(v) -> complex:
    if isinstance(v, (list, tuple)):
        return complex(v[0], v[1])
    if isinstance(v, str):
        return complex(v)
    return complex(v)


def _parse_channel(name: str) -> Channel:
    table = {"mag": Channel.MAGNITUDE_FIRST, "magnitude": Channel.MAGNITUDE_FIRST,
             "phase": Channel.PHASE_FIRST, "tradeoff": Channel.TRADE_OFF,
             "trade-off": Channel.TRADE_OFF}
    if name not in table:
        raise GbtError(f"unknown channel {name!r} (mag|phase|tradeoff)")
    return table[name]


def cmd_design(args) -> int:
    scenario, channel, file_seed = load_scenario(args.scenario)
    if args.channel:
        channel = _parse_channel(args.channel)
    if channel is None:
        raise GbtError("channel missing: set it in the scenario file or via --channel")
    seed = args.seed if args.seed is not None else file_seed

    if channel is Channel.TRADE_OFF:
        result = tradeoff_alpha(scenario)
    else:
        result = optimize_alpha(scenario, channel, seed=seed)

    doc = {
        "channel": channel.value,
        "alpha_opt": result.alpha_opt,
        "q_value": result.q_value,
        "normalization_refs": {
            "L_err_max_db": result.normalization_refs[0],
            "phi_err_max_deg": result.normalization_refs[1],
        },
    }
    _emit(doc, args.out)
    print()
    print(f"{'field':<20} {'value':>14}")
    print(f"{'channel':<20} {channel.value:>14}")
    print(f"{'alpha_opt':<20} {result.alpha_opt:>14.6f}")
    print(f"{'q_value':<20} {result.q_value:>14.6f}")
    print(f"{'L_err_max [dB]':<20} {result.normalization_refs[0]:>14.6f}")
    print(f"{'phi_err_max [deg]':<20} {result.normalization_refs[1]:>14.6f}")

    if args.plot:
        from .report import render_design_figure

        alphas = np.linspace(0.5, 1.0, 101)
        refs = result.normalization_refs
        q_mag = [objective(scenario, Channel.MAGNITUDE_FIRST, a, ref=refs[0])
                 for a in alphas]
        q_phase = [objective(scenario, Channel.PHASE_FIRST, a, ref=refs[1])
                   for a in alphas]
        fig_path = args.plot if isinstance(args.plot, str) else _fig_path(args.out)
        render_design_figure(alphas, q_mag, q_phase, result, fig_path)
        print(f"wrote figure {fig_path}")
    return 0


def cmd_simulate(args) -> int:
    plant = parse_plant(args.plant)
    spec = _resolve_spec(args)
    ztf = gbt_substitute(plant, spec)
    deq = realize(ztf)
    probe = sine_probe(deq, args.f, spec.f_samp,
                       settle_cycles=args.settle, fit_cycles=args.cycles)
    if args.delay:
        probe = compensate_delay(probe, args.delay * 1e-9)

    # replay for the sample log
    deq.reset()
    n_total = math.ceil((args.settle + args.cycles) * spec.f_samp / args.f)
    omega = 2.0 * math.pi * args.f
    samples = []
    for n in range(n_total):
        v_in = math.sin(omega * n * spec.period)
        samples.append({
            "n": n,
            "t_s": n * spec.period,
            "v_in": v_in,
            "v_out": deq.step(v_in),
        })

    _emit({
        "freq": probe.freq,
        "mag_db": probe.mag_db,
        "phase_deg": probe.phase_deg,
        "cycles_used": probe.cycles_used,
        "residual": probe.residual,
        "delay_compensation_ns": args.delay,
    }, None)
    if args.out:
        _write_csv(args.out, CSV_SIM_COLUMNS, samples)
        print(f"wrote {len(samples)} samples to {args.out}")
    if args.plot:
        from .report import render_simulation_figure

        fig_path = args.plot if isinstance(args.plot, str) else _fig_path(args.out)
        tail = samples[-min(len(samples), 600):]
        render_simulation_figure(tail, fig_path,
                                 title=f"f={args.f:g} Hz, alpha={spec.alpha}")
        print(f"wrote figure {fig_path}")
    return 0


def cmd_prewarp(args) -> int:
    omega = 2.0 * math.pi * args.f
    period = 1.0 / args.fs
    warped = prewarp(omega, period)
    _emit({
        "f_hz": args.f,
        "omega_rad_s": omega,
        "omega_prewarped_rad_s": warped,
        "f_prewarped_hz": warped / (2.0 * math.pi),
    }, args.out)
    return 0


def cmd_verify_tables(args) -> int:
    report = verify_tables(seed=args.seed if args.seed is not None else 0)
    doc = report.to_dict()
    for table in doc["tables"]:
        status = "PASS" if table["passed"] else "FAIL"
        suffix = " (expected failure)" if table["expect_failure"] else ""
        print(f"[{status}] {table['title']}{suffix}")
        for entry in table["entries"]:
            mark = "ok " if entry["passed"] else "BAD"
            line = (f"  {mark} {entry['name']}: computed {entry['computed']}"
                    f" vs published {entry['expected']} (tol {entry['tol']})")
            if entry.get("note"):
                line += f" -- {entry['note']}"
            print(line)
        if table["note"]:
            print(f"  note: {table['note']}")
    if args.out:
        Path(args.out).write_text(json.dumps(doc, indent=2) + "\n")
        print(f"wrote report to {args.out}")
    if args.plot:
        from .report import render_verify_figure

        fig_path = args.plot if isinstance(args.plot, str) else _fig_path(args.out)
        render_verify_figure(doc, fig_path)
        print(f"wrote figure {fig_path}")
    print("OVERALL:", "PASS" if doc["passed"] else "FAIL")
    return 0 if doc["passed"] else 1


def _add_common_plant_flags(p) -> None:
    p.add_argument("--plant", required=True, help="lpf:fc=<Hz> or pzk:k=..,z=..,p=..")
    p.add_argument("--fs", type=float, required=True, help="sampling frequency [Hz]")
    p.add_argument("--alpha", type=float, help="shape factor in [0, 1]")
    p.add_argument("--method",
                   help="euler | tustin | al-alaoui:a=.. | pole:ap=.. | gbt:alpha=..")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gbtkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("discretize", help="substitute s -> z and report coefficients")
    _add_common_plant_flags(p)
    p.add_argument("--out", help="write result JSON here")
    p.set_defaults(func=cmd_discretize)

    p = sub.add_parser("bode", help="analog vs discrete frequency response CSV")
    _add_common_plant_flags(p)
    p.add_argument("--f-lo", type=float, required=True)
    p.add_argument("--f-hi", type=float, required=True)
    p.add_argument("--n", type=int, default=200)
    p.add_argument("--spacing", choices=["log", "linear"], default="log")
    p.add_argument("--zoh", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--delay", type=float, default=0.0, help="extra delay [ns]")
    p.add_argument("--out", help="CSV path (stdout when omitted)")
    p.add_argument("--plot", nargs="?", const=True, default=None,
                   help="render a figure (optional path)")
    p.set_defaults(func=cmd_bode)

    p = sub.add_parser("design", help="optimal shape factor for a scenario file")
    p.add_argument("--scenario", required=True, help="scenario JSON document")
    p.add_argument("--channel", choices=["mag", "phase", "tradeoff"])
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="write result JSON here")
    p.add_argument("--plot", nargs="?", const=True, default=None)
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("simulate", help="difference-equation sine probe")
    _add_common_plant_flags(p)
    p.add_argument("--f", type=float, required=True, help="probe frequency [Hz]")
    p.add_argument("--settle", type=int, default=50, help="settle cycles")
    p.add_argument("--cycles", type=int, default=20, help="fit cycles")
    p.add_argument("--delay", type=float, default=0.0,
                   help="compensate this processing delay [ns]")
    p.add_argument("--out", help="per-sample CSV path")
    p.add_argument("--plot", nargs="?", const=True, default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("prewarp", help="tangent frequency pre-warp")
    p.add_argument("--f", type=float, required=True, help="frequency [Hz]")
    p.add_argument("--fs", type=float, required=True, help="sampling frequency [Hz]")
    p.add_argument("--out", help="write result JSON here")
    p.set_defaults(func=cmd_prewarp)

    p = sub.add_parser("verify-tables", help="reproduce the published study tables")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="write report JSON here")
    p.add_argument("--plot", nargs="?", const=True, default=None)
    p.set_defaults(func=cmd_verify_tables)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except GbtError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
