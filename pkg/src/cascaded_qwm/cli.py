"""Command-line front end: ``qwm spectrum | sweep | expand | verify``.

Every flag can also be given in a plain-text config file (``--config``)
as ``key = value`` lines, ``#`` starting a comment; keys are flag names
with or without the leading dashes.  Flags on the command line win.

Exit codes: 0 success, 1 usage error, 2 numeric failure, 3 verification
failure.
"""

from __future__ import annotations

import argparse
import io
import json
import logging
import math
import os
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import analytics
from .model import N_STATE, STATE_LABELS, ParameterError, SystemParams
from .neumann import MAX_ORDER, ConfigurationError, expand
from .ode import OdeConfigurationError, OdeSettings, StiffnessError, ode_spectrum
from .series import series_table
from .spectrum import format_float
from .stationary import (
    DEFAULT_SAMPLES,
    AliasingError,
    extract_spectrum,
    suppression_ratio_numeric,
)
from .verify import flipped_entries, format_report, run_checks

log = logging.getLogger("cascaded_qwm")

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_VERIFY = 0, 1, 2, 3

DEFAULTS = {
    "gamma_s": 1.0,
    "gamma_pr": 5.0,
    "mu": 1.0,
    "method": "exact",
    "harmonics": "-7:7",
    "format": "csv",
    "samples": DEFAULT_SAMPLES,
    "order": 5,
    "component": 1,
    "r_min": 0.01,
    "r_max": 100.0,
    "points": 41,
    "workers": 0,
    "quick": False,
    "inject_fault": False,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_common(p):
    g = p.add_argument_group("system")
    g.add_argument("--gamma-s", type=float, help="source decay rate")
    g.add_argument("--gamma-pr", type=float, help="probe decay rate")
    g.add_argument("--r", type=float, help="linewidth ratio; sets gamma_s = r * gamma_pr")
    g.add_argument("--mu", type=float, help="fraction of source radiation reaching the probe")
    g.add_argument("--eps-pr", type=float, help="probe drive voltage, Omega_pr = sqrt(gamma_pr) eps_pr")
    g.add_argument("--eps-s", type=float, help="source drive voltage, Omega_s = sqrt(gamma_s) eps_s")
    g.add_argument("--omega-pr-re", type=float)
    g.add_argument("--omega-pr-im", type=float)
    g.add_argument("--omega-s-re", type=float)
    g.add_argument("--omega-s-im", type=float)
    g.add_argument("--delta-omega", type=float, help="beat frequency for ode runs (default 0.01 gamma_pr)")
    o = p.add_argument_group("output")
    o.add_argument("--out", help="output path (default stdout)")
    o.add_argument("--format", choices=("csv", "json"))
    o.add_argument("--config", help="key = value config file")
    o.add_argument("--samples", type=int, help=f"phase samples M (default {DEFAULT_SAMPLES})")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qwm", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("spectrum", help="side-peak amplitudes of <sigma_-^pr>")
    _add_common(sp)
    sp.add_argument("--method", help="exact | neumann:N | ode")
    sp.add_argument("--harmonics", help="inclusive range a:b")

    sw = sub.add_parser("sweep", help="suppression ratios over a log grid of gamma_s")
    _add_common(sw)
    sw.add_argument("--r-min", type=float)
    sw.add_argument("--r-max", type=float)
    sw.add_argument("--points", type=int)
    sw.add_argument("--workers", type=int, help="worker threads (0 = one per CPU)")

    ex = sub.add_parser("expand", help="weak-drive monomial table")
    _add_common(ex)
    ex.add_argument("--order", type=int)
    ex.add_argument("--component", type=int, help=f"state component 1..{N_STATE} (default 1)")

    ve = sub.add_parser("verify", help="run the cross-verification suite")
    _add_common(ve)
    ve.add_argument("--quick", action="store_true", default=None, help="sub-second subset")
    ve.add_argument("--inject-fault", action="store_true", default=None,
                    help="flip the sign of one drive-matrix entry (mutation sanity check)")
    return parser


def read_config(path) -> dict:
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (s.strip() for s in line.split("=", 1))
            values[key.lstrip("-").replace("-", "_")] = value
    return values


def _coerce(action, value):
    if isinstance(action, argparse._StoreTrueAction):
        return value.lower() in ("1", "true", "yes", "on")
    if action.choices and value not in action.choices:
        raise UsageError(f"invalid value {value!r} for {action.dest}")
    return action.type(value) if action.type else value


def merge_config(parser, args) -> argparse.Namespace:
    """Fill unset flags from the config file, then from :data:`DEFAULTS`."""
    sub = parser._subparsers._group_actions[0].choices[args.command]
    actions = {a.dest: a for a in sub._actions}
    if getattr(args, "config", None):
        for key, value in read_config(args.config).items():
            if key not in actions or key in ("config", "help"):
                raise UsageError(f"unknown config key {key!r} for {args.command}")
            if getattr(args, key) is None:
                try:
                    setattr(args, key, _coerce(actions[key], value))
                except ValueError as exc:
                    raise UsageError(f"config key {key}: {exc}") from exc
    for key, value in DEFAULTS.items():
        if key in actions and getattr(args, key) is None:
            setattr(args, key, value)
    return args


def params_from_args(args, require_drives=True) -> SystemParams:
    gamma_pr = args.gamma_pr
    gamma_s = args.r * gamma_pr if args.r is not None else args.gamma_s
    eps = (args.eps_pr, args.eps_s)
    omegas = (args.omega_pr_re, args.omega_pr_im, args.omega_s_re, args.omega_s_im)
    use_eps = any(v is not None for v in eps)
    use_omega = any(v is not None for v in omegas)
    if use_eps and use_omega:
        raise UsageError("give drives either as --eps-* voltages or as --omega-* amplitudes, not both")
    if require_drives and not (use_eps or use_omega):
        raise UsageError("drive amplitudes missing: supply --eps-pr/--eps-s or --omega-*")
    delta_omega = args.delta_omega if args.delta_omega is not None else 0.0
    try:
        if use_eps:
            return SystemParams.from_voltages(
                gamma_s, gamma_pr, eps_s=args.eps_s or 0.0, eps_pr=args.eps_pr or 0.0,
                mu=args.mu, delta_omega=delta_omega,
            )
        w_pr = complex(args.omega_pr_re or 0.0, args.omega_pr_im or 0.0)
        w_s = complex(args.omega_s_re or 0.0, args.omega_s_im or 0.0)
        return SystemParams(gamma_s, gamma_pr, args.mu, w_s, w_pr, delta_omega)
    except ParameterError as exc:
        raise UsageError(str(exc)) from exc


def parse_harmonics(spec: str):
    try:
        a, b = (int(s) for s in spec.split(":"))
    except ValueError:
        raise UsageError(f"harmonic range must look like a:b, got {spec!r}") from None
    if b < a:
        raise UsageError(f"empty harmonic range {spec!r}")
    return list(range(a, b + 1))


def _write(text: str, out):
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _table_text(columns, rows, fmt, metadata):
    if fmt == "json":
        return json.dumps({"metadata": metadata, "columns": columns, "rows": rows}, indent=2) + "\n"
    buf = io.StringIO()
    buf.write(",".join(columns) + "\n")
    for row in rows:
        buf.write(",".join(str(v) if isinstance(v, int) else format_float(v) for v in row) + "\n")
    return buf.getvalue()


def cmd_spectrum(args) -> int:
    params = params_from_args(args)
    harmonics = parse_harmonics(args.harmonics)
    method = args.method
    if method == "exact":
        spec = extract_spectrum(params, args.samples, harmonics)
    elif method.startswith("neumann:"):
        try:
            order = int(method.split(":", 1)[1])
        except ValueError:
            raise UsageError(f"bad method {method!r}; use neumann:N") from None
        spec = expand(params, order).spectrum(params, harmonics)
    elif method == "ode":
        if args.delta_omega is None:
            params = SystemParams(params.gamma_s, params.gamma_pr, params.mu,
                                  params.omega_s_amp, params.omega_pr_amp, 0.01 * params.gamma_pr)
        if params.delta_omega <= 0:
            raise UsageError("ode method needs --delta-omega > 0")
        spec = ode_spectrum(params, harmonics, OdeSettings())
    else:
        raise UsageError(f"unknown method {method!r}; use exact, neumann:N or ode")
    _write(spec.to_json() if args.format == "json" else spec.to_csv(), args.out)
    return EXIT_OK


SWEEP_COLUMNS = [
    "gamma_s", "r",
    "S3_numeric", "S3_closed", "S3_asymptote",
    "Sm5_numeric", "Sm5_closed", "Sm5_asymptote",
    "Sp5_numeric", "Sp5_closed", "Sp5_asymptote",
]


def sweep_point(gamma_s, gamma_pr, eps_s, eps_pr, mu, samples):
    p = SystemParams.from_voltages(gamma_s, gamma_pr, eps_s=eps_s, eps_pr=eps_pr, mu=mu)
    row = [gamma_s, p.r]
    for n in analytics.SUPPRESSED_PEAKS:
        row += [
            suppression_ratio_numeric(p, n, samples),
            analytics.suppression_ratio_closed(n, gamma_s, gamma_pr),
            analytics.suppression_asymptote(n, p.r),
        ]
    return row


def cmd_sweep(args) -> int:
    if args.omega_pr_re is not None or args.omega_s_re is not None:
        raise UsageError("sweeps run at fixed drive voltages; use --eps-pr/--eps-s")
    if args.eps_pr is None or args.eps_s is None:
        raise UsageError("sweep needs --eps-pr and --eps-s")
    if not (0 < args.r_min < args.r_max) or args.points < 2:
        raise UsageError("grid needs 0 < r-min < r-max and at least 2 points")
    gamma_pr = args.gamma_pr
    if not gamma_pr > 0:
        raise UsageError("gamma_pr must be positive")
    grid = gamma_pr * np.logspace(math.log10(args.r_min), math.log10(args.r_max), args.points)
    workers = args.workers or min(8, os.cpu_count() or 1)

    def job(gs):
        return sweep_point(float(gs), gamma_pr, args.eps_s, args.eps_pr, args.mu, args.samples)

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(job, grid))
    for w in {str(w.message) for w in caught}:
        log.warning("%s", w)
    meta = {
        "gamma_pr": gamma_pr, "mu": args.mu, "eps_pr": args.eps_pr, "eps_s": args.eps_s,
        "r_min": args.r_min, "r_max": args.r_max, "points": args.points, "samples": args.samples,
    }
    _write(_table_text(SWEEP_COLUMNS, rows, args.format, meta), args.out)
    return EXIT_OK


def cmd_expand(args) -> int:
    if not 1 <= args.component <= N_STATE:
        raise UsageError(f"component must be in 1..{N_STATE}")
    if args.order > MAX_ORDER:
        raise UsageError(f"order {args.order} exceeds the cap {MAX_ORDER}")
    params = params_from_args(args, require_drives=False)
    exp = expand(params, args.order)
    rows = [list(row) for row in series_table(exp.component(args.component - 1))]
    meta = {
        "r": params.r, "alpha": params.alpha, "mu": params.mu, "order": args.order,
        "component": args.component, "label": STATE_LABELS[args.component - 1],
    }
    _write(_table_text(["a", "b", "c", "d", "n", "re", "im"], rows, args.format, meta), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    entries = flipped_entries() if args.inject_fault else None
    kwargs = {} if entries is None else {"entries": entries}
    results = run_checks(quick=args.quick, **kwargs)
    _write(format_report(results), args.out)
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY


COMMANDS = {"spectrum": cmd_spectrum, "sweep": cmd_sweep, "expand": cmd_expand, "verify": cmd_verify}


def _glue_ranges(argv):
    # keep "--harmonics -7:7" from being read as an unknown flag
    out = []
    for tok in argv:
        if out and out[-1] == "--harmonics" and tok.startswith("-"):
            out[-1] = f"--harmonics={tok}"
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(_glue_ranges(sys.argv[1:] if argv is None else list(argv)))
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    logging.captureWarnings(True)
    try:
        args = merge_config(parser, args)
        return COMMANDS[args.command](args)
    except (UsageError, ConfigurationError, OdeConfigurationError, OSError) as exc:
        print(f"qwm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (AliasingError, StiffnessError, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"qwm: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
