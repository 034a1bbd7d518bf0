"""Command line entry point: ``macsf simulate|normalize|verify|reduce --config <path>``.

Exit codes: 0 success, 1 parse or validation error, 2 solver error,
3 verification failure.
"""

import argparse
import math
import os
import sys
import warnings

from . import export
from .config import parse_config
from .contorsion import norm, psi_coefficients, reduce_by_translation, reduce_to_canonical
from .curve import SupportGrid, area, diagnostics
from .errors import MacsfError, ParseError, SolverError, ValidationError
from .flow import HypothesisWarning, run
from .normalized import area_stop_for_tau, normalize_trace, run_normalized, summarize
from .verify import format_report, run_verify

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_SOLVER = 2
EXIT_VERIFY = 3


def _load(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ValidationError("config", f"cannot read {path}: {exc.strerror}") from exc
    except UnicodeDecodeError as exc:
        raise ParseError(f"config is not UTF-8: {exc}") from exc
    cfg = parse_config(text)
    return cfg, os.path.dirname(os.path.abspath(path))


def _hypothesis_lines(k0, c):
    out = []
    for factor in (2, 3):
        bound = factor * c
        verdict = "yes" if k0 > bound else "no"
        sign = ">" if k0 > bound else "<="
        out.append(f"k0 > {factor}c: {verdict} ({k0:.3g} {sign} {bound:.3g})")
    return out


def _simulate(cfg, S0, area_stop=None):
    co = psi_coefficients(cfg.tensor())
    flow_cfg = cfg.flow_config() if area_stop is None else cfg.flow_config(area_stop=area_stop)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", HypothesisWarning)
        return run(S0, co, flow_cfg, c=norm(cfg.tensor()))


def _write_trace(trace, out, svg):
    export.write_trace_csv(trace, os.path.join(out, "trace.csv"))
    export.write_summary_csv(trace, os.path.join(out, "summary.csv"))
    if svg:
        export.export_svg(export.trace_curves(trace), os.path.join(out, "curves.svg"))


def _print_run(trace, S0, c):
    k0 = diagnostics(S0).k_min
    print(f"stop_reason: {trace.stop_reason.value}")
    print(f"steps: {trace.steps}")
    print(f"t_final: {trace.final.t!r}")
    for line in _hypothesis_lines(k0, c):
        print(line)
    print(f"omega_hat: {'none' if trace.omega_hat is None else repr(trace.omega_hat)}")


def cmd_simulate(cfg, base, out, svg):
    S0 = cfg.initial_support(base)
    trace = _simulate(cfg, S0)
    _write_trace(trace, out, svg)
    _print_run(trace, S0, norm(cfg.tensor()))
    return EXIT_OK


def cmd_normalize(cfg, base, out, svg):
    S0 = cfg.initial_support(base)
    stop = area_stop_for_tau(area(S0), cfg.tau_max)
    if cfg.area_stop is not None:
        stop = min(stop, cfg.area_stop)
    trace = _simulate(cfg, S0, area_stop=stop)
    _write_trace(trace, out, svg)
    _print_run(trace, S0, norm(cfg.tensor()))
    if cfg.normalized_mode == "direct":
        if trace.omega_hat is None:
            normalize_trace(trace)  # raises with the stop reason
        S_tilde0 = SupportGrid(S0.values / math.sqrt(2.0 * trace.omega_hat))
        states = run_normalized(S_tilde0, psi_coefficients(cfg.tensor()), trace.omega_hat,
                                cfg.tau_max, cfg.cfl, cfg.record_every, cfg.k_cap)
    else:
        states = [s for s in normalize_trace(trace) if s.tau <= cfg.tau_max]
    export.write_normalized_csv(states, os.path.join(out, "normalized.csv"))
    export.write_normalized_summary_csv(states, os.path.join(out, "normalized_summary.csv"))
    last = summarize(states[-1:])[0]
    print(f"normalized_mode: {cfg.normalized_mode}")
    print(f"tau: {last.tau!r}")
    print(f"entropy: {last.entropy!r}")
    print(f"circle_deviation: {last.circle_deviation!r}")
    print(f"stationarity_residual: {last.stationarity_residual!r}")
    return EXIT_OK


def cmd_verify(cfg, base, out, svg):
    S0 = cfg.initial_support(base)
    res = run_verify(S0, cfg.tensor(), cfg.flow_config(), cfg.tau_max, cfg.normalized_mode)
    report = format_report(res)
    with open(os.path.join(out, "verify_report.txt"), "w", newline="") as fh:
        fh.write(report)
    if res.trace is not None:
        _write_trace(res.trace, out, svg)
    if res.normalized:
        export.write_normalized_summary_csv(res.normalized, os.path.join(out, "normalized_summary.csv"))
    sys.stdout.write(report)
    failed = any(cl.status == "FAIL" for cl in res.claims)
    return EXIT_VERIFY if failed else EXIT_OK


def cmd_reduce(cfg, base, out, svg):
    tensor = cfg.tensor()
    co = psi_coefficients(tensor)
    red = reduce_to_canonical(co)
    trans = reduce_by_translation(co)
    print(f"a30: {co.a30!r}")
    print(f"a03: {co.a03!r}")
    print(f"a12: {co.a12!r}")
    print(f"a21: {co.a21!r}")
    print(f"c: {norm(tensor)!r}")
    print(f"drift: ({trans.drift[0]!r}, {trans.drift[1]!r})")
    print(f"rotation: {red.rotation!r}")
    print(f"canonical_drift: ({red.drift[0]!r}, {red.drift[1]!r})")
    print(f"a_tilde: {red.reduced.a30!r}")
    return EXIT_OK


COMMANDS = {
    "simulate": cmd_simulate,
    "normalize": cmd_normalize,
    "verify": cmd_verify,
    "reduce": cmd_reduce,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser():
    p = _Parser(prog="macsf", description="Curve shortening flow in the metric-affine plane.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--config", required=True, help="path to a key = value config file")
    p.add_argument("--out", default="macsf_out", help="output directory (default: macsf_out)")
    p.add_argument("--svg", action="store_true", help="also write curves.svg")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    stage = "config"
    try:
        cfg, base = _load(args.config)
        stage = args.command
        if args.command != "reduce":
            os.makedirs(args.out, exist_ok=True)
        return COMMANDS[args.command](cfg, base, args.out, args.svg)
    except (ParseError, ValidationError) as exc:
        print(f"macsf: {stage}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SolverError, MacsfError, ValueError) as exc:
        print(f"macsf: {stage}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except OSError as exc:
        print(f"macsf: {stage}: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
