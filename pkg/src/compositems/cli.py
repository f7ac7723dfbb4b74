"""Command-line entry point: ``python -m compositems <command> ...``."""
from __future__ import annotations

import argparse
import logging
import math
import sys
from dataclasses import replace

from . import analytic, composite, scan
from .dynamics import ErrorModel, IntegrationError, IntegratorSettings, population_history
from .hilbert import HilbertConfig, basis_state
from .modulation import PRESETS


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--preset", choices=["yb171"], help="physical preset (overrides shape/eps/window)")
    p.add_argument("--shape", default="sin32", choices=sorted(PRESETS), help="coupling envelope")
    p.add_argument("--sequence", default="B2", choices=["single", "B1", "B2"])
    p.add_argument("--eps", type=scan.parse_number, help="detuning (natural units)")
    p.add_argument("--window", type=scan.parse_window, help="envelope window, e.g. 0:2pi")
    p.add_argument("--theta", type=scan.parse_number, default=math.pi / 4, help="target rotation")
    p.add_argument("--n-fock", type=int, help="Fock truncation (default 14 single, 40 sequences)")
    p.add_argument("--tol", type=float, default=1e-10, help="integrator relative tolerance")
    p.add_argument("--threads", type=int, default=1, help="worker processes for sweeps")
    p.add_argument("--out", help="output path (with --config: directory for relative recipe outputs)")
    return p


def _error_model(items) -> ErrorModel:
    err = ErrorModel()
    for item in items or ():
        key, sep, value = item.partition("=")
        if not sep or key not in ErrorModel.CHANNELS:
            raise ValueError(f"--error expects channel=value with channel in {ErrorModel.CHANNELS}, got {item!r}")
        err = err.with_(**{key: scan.parse_number(value)})
    return err


def _sequence_spec(args) -> scan.SequenceSpec:
    return scan.SequenceSpec(args.sequence, args.shape, args.theta, args.eps, args.window, args.preset)


def _settings(args) -> IntegratorSettings:
    return IntegratorSettings(rel_tol=args.tol, abs_tol=min(args.tol, 1e-12))


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="compositems", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", parents=[common], help="simulate one sequence under one error model")
    p.add_argument("--error", action="append", metavar="CHANNEL=VALUE")
    p.add_argument("--metric", choices=["gate", "state"], default="gate")
    p.add_argument("--populations", type=int, metavar="N",
                   help="also print spin populations, N samples per pulse")
    p.add_argument("--dump-manifest", action="store_true")

    for name, n_axes in (("sweep1d", 1), ("sweep2d", 2)):
        p = sub.add_parser(name, parents=[common], help=f"{n_axes}D error sweep to CSV")
        p.add_argument("--config", help="INI recipe; runs every [sweep*] section")
        p.add_argument("--axis", action="append", metavar="CHANNEL:FROM:TO:POINTS")
        p.add_argument("--error", action="append", metavar="CHANNEL=VALUE", help="fixed baseline error")
        p.add_argument("--metric", choices=["gate", "state"], default="gate")
        p.set_defaults(n_axes=n_axes)

    p = sub.add_parser("closure-phase", parents=[common], help="zeta- closing one pulse pair")
    p.add_argument("--pulse", type=int, default=1, help="pair index (1-3) within the six-pulse window")

    sub.add_parser("calibrate", parents=[common], help="amplitude reaching --theta over --window")
    sub.add_parser("manifest", parents=[common], help="print the sequence manifest")
    return parser


def _cmd_simulate(args) -> int:
    spec = _sequence_spec(args)
    seq = spec.build()
    cfg = HilbertConfig(args.n_fock or spec.default_n_fock())
    err = _error_model(args.error)
    settings = _settings(args)
    if args.dump_manifest:
        print(composite.manifest(seq), end="")
    fid = scan.evaluate_point(seq, err, args.metric, cfg, settings)
    print(f"kind={args.metric} fidelity={fid:.12g} infidelity={1 - fid:.12g} n_fock={cfg.n_fock}")
    if args.populations:
        times, pops = population_history(basis_state("00", 0, cfg), seq, err, settings, cfg,
                                         args.populations)
        print("t,p00,p01,p10,p11")
        for t, p in zip(times, pops):
            print(",".join(format(v, ".12g") for v in (t, *p)))
    return 0


def _cmd_sweep(args) -> int:
    if args.config:
        specs = scan.load_config(args.config, out_dir=args.out)
    else:
        axes = [scan.Axis.parse(a) for a in (args.axis or ())]
        if len(axes) != args.n_axes:
            raise ValueError(f"{args.command} needs exactly {args.n_axes} --axis option(s)")
        specs = {"sweep": scan.SweepSpec(
            axis1=axes[0], axis2=axes[1] if args.n_axes == 2 else None,
            fixed=_error_model(args.error), sequence=_sequence_spec(args), metric=args.metric,
            n_fock=args.n_fock, settings=_settings(args), output_path=args.out, threads=args.threads)}
    for name, spec in specs.items():
        if len(spec.axes) != args.n_axes:
            raise ValueError(f"section [{name}] has {len(spec.axes)} axes; {args.command} expects {args.n_axes}")
        if args.threads > 1 and spec.threads == 1:
            spec = replace(spec, threads=args.threads)
        result = scan.run_sweep(spec)
        if spec.output_path:
            scan.write_csv(result, spec.output_path)
            print(f"[{name}] wrote {len(result.rows)} rows to {spec.output_path}")
        else:
            print(",".join(result.axis_names + ("fidelity", "infidelity")))
            for row in result.rows:
                print(",".join(format(v, ".12g") for v in row))
    return 0


def _cmd_closure(args) -> int:
    name, mod, eps, window = composite._resolve(args.shape, args.eps, args.window,
                                                 composite.SEQUENCE_DEFAULTS)
    if not 1 <= args.pulse <= 3:
        raise ValueError("--pulse must be 1, 2 or 3")
    width = (window[1] - window[0]) / 6
    t0 = window[0] + 2 * (args.pulse - 1) * width
    z = analytic.closure_phase(mod, 1j, eps, (t0, t0 + width), (t0 + width, t0 + 2 * width))
    print(f"{z:.12g}")
    return 0


def _cmd_calibrate(args) -> int:
    name, mod, eps, window = composite._resolve(args.shape, args.eps, args.window,
                                                 composite.SINGLE_DEFAULTS)
    print(f"{analytic.calibrate_amplitude(mod, eps, window, args.theta):.12g}")
    return 0


def _cmd_manifest(args) -> int:
    text = composite.manifest(_sequence_spec(args).build())
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        print(text, end="")
    return 0


_COMMANDS = {"simulate": _cmd_simulate, "sweep1d": _cmd_sweep, "sweep2d": _cmd_sweep,
             "closure-phase": _cmd_closure, "calibrate": _cmd_calibrate, "manifest": _cmd_manifest}


def cli_main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, IntegrationError, analytic.ClosureError, analytic.CalibrationError,
            scan.SweepAborted, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main():
    sys.exit(cli_main())
