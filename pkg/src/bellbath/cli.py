"""Command-line interface: ``bellbath {eval,sweep,tc,dfs,oracle}``.

Exit codes: 0 success, 1 invalid config or input, 2 numerical failure,
3 oracle truncation failure. Errors are reported as one ``error: ...`` line
on stderr.
"""

import argparse
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
import math
import os
import sys

import numpy as np

from . import dephasing, dfs, oracle, qstate, spectral
from ._validation import (
    DomainError,
    ModelMismatchError,
    NumericalError,
    TruncationError,
    ValidationError,
)
from .config import load_config

WORKERS_ENV = "BELLBATH_WORKERS"
CSV_HEADER = "t,T,S,gamma,violates"
PARALLEL_MIN_ROWS = 64


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(message, 1)


def fmt(x):
    return format(float(x), ".17g")


@dataclass(frozen=True)
class Grid:
    start: float
    stop: float
    count: int
    log: bool = False

    def values(self):
        if self.count == 1:
            return np.array([self.start])
        if self.log:
            return np.geomspace(self.start, self.stop, self.count)
        return np.linspace(self.start, self.stop, self.count)


def parse_grid(text):
    """Parse ``start:stop:count[:log]``."""
    parts = text.split(":")
    if len(parts) not in (3, 4) or (len(parts) == 4 and parts[3] not in ("log", "linear")):
        raise ValidationError(f"grid {text!r} must be start:stop:count[:log]")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ValidationError(f"grid {text!r} has non-numeric fields") from None
    log = len(parts) == 4 and parts[3] == "log"
    if not (math.isfinite(start) and math.isfinite(stop)):
        raise ValidationError(f"grid {text!r} bounds must be finite")
    if count < 1:
        raise ValidationError("grid count must be >= 1")
    if stop < start:
        raise ValidationError("grid stop must be >= start")
    if start < 0:
        raise ValidationError("grid values must be >= 0")
    if log and start <= 0:
        raise ValidationError("log spacing needs a positive start")
    return Grid(start, stop, count, log)


def evaluate_point(config, t, T):
    """``(t, T, S, gamma, violates)`` for one grid point."""
    ctx = config.context(t, T)
    bath = config.bath()
    total = bath.alpha_coth_sum(ctx.t, ctx.T, ctx.k_B)
    rho = dephasing.evolve(config.rho(), bath, ctx, total=total)
    s_value = qstate.chsh(rho, config.setting())
    gamma = 2.0 * ctx.c * total
    return t, T, s_value, gamma, qstate.violates(s_value)


def format_row(row):
    t, T, s_value, gamma, flag = row
    return ",".join([fmt(t), fmt(T), fmt(s_value), fmt(gamma), "true" if flag else "false"])


def worker_count():
    raw = os.environ.get(WORKERS_ENV)
    if raw is None:
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError:
        raise ValidationError(f"{WORKERS_ENV} must be an integer") from None
    if n < 1:
        raise ValidationError(f"{WORKERS_ENV} must be >= 1")
    return n


def _point_star(args):
    return evaluate_point(*args)


def sweep_rows(config, t_grid, T_grid, workers=1):
    jobs = [(config, float(t), float(T)) for t in t_grid.values() for T in T_grid.values()]
    if workers > 1 and len(jobs) >= PARALLEL_MIN_ROWS:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_point_star, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    return [evaluate_point(*job) for job in jobs]


def _emit(text, out_path):
    if out_path is None:
        sys.stdout.write(text)
        return
    try:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(f"cannot write {out_path}: {exc.strerror}", 1) from None


def cmd_eval(config, args):
    row = evaluate_point(config, args.time, args.temp)
    _emit(CSV_HEADER + "\n" + format_row(row) + "\n", args.out)


def cmd_sweep(config, args):
    rows = sweep_rows(config, parse_grid(args.t_grid), parse_grid(args.T_grid), worker_count())
    _emit(CSV_HEADER + "\n" + "".join(format_row(r) + "\n" for r in rows), args.out)


def cmd_tc(config, args):
    J = config.bath()
    if not isinstance(J, spectral.SpectralDensity):
        raise ValidationError("tc needs a continuum bath (ohmic or tabulated)")
    lines = [f"tc_paper={fmt(spectral.tc_paper(J, config.k_b))}"]
    if args.time is not None:
        try:
            root = spectral.tc_numeric(J, args.time, config.context())
        except DomainError:
            lines.append(f"no threshold at this t (t={fmt(args.time)})")
        else:
            lines.append(f"tc_numeric={fmt(root)}")
    _emit("\n".join(lines) + "\n", args.out)


def cmd_dfs(config, args):
    rho = config.rho()
    report = dfs.is_dfs(rho)
    dependence = dfs.predict_chsh_temperature_dependence(rho, config.setting())

    def bits(pair):
        return f"|{pair[0][0]}{pair[0][1]}><{pair[1][0]}{pair[1][1]}|"

    lines = [
        f"in_dfs={str(report.in_dfs).lower()}",
        f"decay_free={str(report.decay_free).lower()}",
        f"predicted_t_independent={str(report.predicted_t_independent).lower()}",
        f"chsh_temperature_dependence={dependence}",
        "offending_elements=" + ";".join(bits(p) for p in report.offending_elements),
        "outside_support=" + ";".join(f"|{j}{k}>" for j, k in report.outside_support),
    ]
    _emit("\n".join(lines) + "\n", args.out)


def cmd_oracle(config, args):
    bath = config.bath()
    if not isinstance(bath, dephasing.DiscreteBath) or len(bath.modes) > 2:
        raise ValidationError("oracle needs a discrete bath with at most 2 modes")
    ctx = config.context(args.time, args.temp)
    n_max = args.n_max
    if n_max is None:
        n_max = oracle.choose_n_max(bath.modes, ctx.T, ctx.k_B)
    spec = oracle.TruncatedBathSpec(bath.modes, n_max)
    exact = oracle.evolve_exact(config.rho(), spec, ctx)
    devs = {}
    for c in sorted(dephasing.CALIBRATIONS.values()):
        approx = dephasing.evolve(config.rho(), bath, replace(ctx, c=c))
        devs[c] = float(np.max(np.abs(exact - approx)))
    lines = [f"n_max={n_max}"]
    lines += [f"deviation_c{c:g}={fmt(d)}" for c, d in devs.items()]
    matching = [c for c in oracle.CANDIDATES if devs[c] < 1e-8]
    if len(matching) == len(oracle.CANDIDATES):
        verdict = "indeterminate"
    elif len(matching) == 1:
        verdict = f"c={matching[0]:g}"
    else:
        verdict = "mismatch"
    lines.append(f"verdict={verdict}")
    _emit("\n".join(lines) + "\n", args.out)
    if verdict == "mismatch":
        raise ModelMismatchError(
            "neither c=1 nor c=4 reproduces the exact dynamics within 1e-8")


def build_parser():
    parser = _Parser(prog="bellbath", description=__doc__.splitlines()[0])
    common = _Parser(add_help=False)
    common.add_argument("--config", required=True, help="JSON run configuration")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--dump-config", action="store_true",
                        help="print the effective configuration and exit")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("eval", parents=[common], help="CHSH value at one (t, T)")
    p.add_argument("--time", type=float, default=0.0)
    p.add_argument("--temp", type=float, default=0.0)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("sweep", parents=[common], help="CSV over a (t, T) grid")
    p.add_argument("--t-grid", required=True, metavar="START:STOP:COUNT[:log]")
    p.add_argument("--T-grid", required=True, metavar="START:STOP:COUNT[:log]")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("tc", parents=[common], help="critical temperatures")
    p.add_argument("--time", type=float, default=None)
    p.set_defaults(func=cmd_tc)

    p = sub.add_parser("dfs", parents=[common], help="decoherence-free-subspace report")
    p.set_defaults(func=cmd_dfs)

    p = sub.add_parser("oracle", parents=[common], help="compare against exact evolution")
    p.add_argument("--n-max", type=int, default=None)
    p.add_argument("--time", type=float, default=1.0)
    p.add_argument("--temp", type=float, default=0.0)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        config = load_config(args.config)
        if args.dump_config:
            _emit(config.dumps(), args.out)
            return 0
        args.func(config, args)
        return 0
    except CliError as exc:
        code, message = exc.code, str(exc)
    except TruncationError as exc:
        code, message = 3, str(exc)
    except NumericalError as exc:
        code, message = 2, str(exc)
    except (ValidationError, DomainError) as exc:
        code, message = 1, str(exc)
    print("error: " + " ".join(message.split()), file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
