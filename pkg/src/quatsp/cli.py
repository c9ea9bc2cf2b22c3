"""``qsp``: batch command-line front end.

Exit codes: 0 success, 1 failed check, 2 unreadable input, 3 invalid flags,
4 degenerate spectrum, 5 filter divergence.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import filters, hrcalc, io, linalg, stats
from . import qarray as qa
from .core import Quaternion, Rotor, imag_norm
from .errors import DegenerateSpectrumError, DivergenceError

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_PARSE = 2
EXIT_FLAGS = 3
EXIT_DEGENERATE = 4
EXIT_DIVERGENCE = 5

GRADCHECK_TOL = 1e-6
PURE_TOL = 1e-12


class UsageError(Exception):
    """Flags are individually valid but inconsistent with each other or the input."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_FLAGS, f"{self.prog}: error: {message}\n")


def _emit(doc: dict, out: str | None, table: str | None = None) -> None:
    text = io.dumps_report(doc)
    if out:
        Path(out).write_text(text, encoding="utf-8")
        if table:
            sys.stdout.write(table)
    else:
        sys.stdout.write(text)


def _fmt_q(v) -> str:
    return str(Quaternion.from_array(np.round(np.asarray(v, dtype=float), 2) + 0.0))


def _check_L(L: int | None, signal: io.SignalFile) -> int:
    top = len(signal) - 1
    if L is None:
        return top
    if L < 0 or L > top:
        raise UsageError(f"--L/--lags must lie in 0..{top} for a signal of {len(signal)} samples")
    return L


# commands --------------------------------------------------------------------

def cmd_autocorr(args) -> int:
    sig = io.read_signal(args.input)
    L = _check_L(args.lags, sig)
    estimator = "unbiased" if args.unbiased else "biased"
    s = stats.autocorr_set(sig.q, estimator=estimator, pure_mode=args.pure)
    kinds = list(stats.KINDS) if args.kind == "all" else [args.kind]
    keep = np.abs(s.lags) <= L
    lags = s.lags[keep]
    sequences = {k: s.sequence(k)[keep] for k in kinds}
    results = {
        "lags": lags.tolist(),
        "sequences": {k: io.quaternion_list(v) for k, v in sequences.items()},
        "magnitudes": {k: qa.qnorm(v).tolist() for k, v in sequences.items()},
    }
    residuals = {}
    if args.kind == "all":
        residuals["dependency"] = stats.check_dependency(s)
    params = {"kind": args.kind, "pure": args.pure, "estimator": estimator, "lags": L}
    lines = ["lag  " + "  ".join(f"r_{k:<28}|r_{k}|" for k in kinds)]
    for pos, lag in enumerate(lags):
        cells = [f"{_fmt_q(sequences[k][pos]):<30}{qa.qnorm(sequences[k][pos]):8.2f}" for k in kinds]
        lines.append(f"{lag:>3}  " + "  ".join(cells))
    _emit(io.build_report("autocorr", params, results, residuals, sig.digest), args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def _matrices(args):
    sig = io.read_signal(args.input)
    L = _check_L(args.L, sig)
    estimator = "unbiased" if args.unbiased else "biased"
    s = stats.autocorr_set(sig.q, estimator=estimator, pure_mode=args.pure)
    return sig, L, estimator, s, stats.toeplitz(s, L)


def cmd_matrices(args) -> int:
    sig, L, estimator, s, mats = _matrices(args)
    results = {f"R_{k}": io.quaternion_list(mats.get(k)) for k in stats.KINDS}
    residuals = {"hermitian_c": qa.frobenius(mats.R_c - qa.hermitian(mats.R_c))}
    for eta in linalg.ETA_AXES:
        r = mats.get(eta)
        residuals[f"eta_hermitian_{eta}"] = qa.frobenius(r - qa.eta_hermitian(r, eta))
    params = {"L": L, "pure": args.pure, "estimator": estimator}
    _emit(io.build_report("matrices", params, results, residuals, sig.digest), args.out)
    return EXIT_OK


def cmd_duality(args) -> int:
    sig, L, estimator, s, mats = _matrices(args)
    real = stats.duality_extract(mats)
    direct = stats.real_corr_set(sig.q, L, estimator=estimator, pure_mode=args.pure)
    dev = max(float(np.max(np.abs(real.get(x, y) - direct.get(x, y)))) for x in "rijk" for y in "rijk")
    parts = stats.pseudo_decompose(real)
    pdev = max(float(np.max(np.abs(parts[c] - mats.R_p[..., c]))) for c in range(4))
    results = {f"R_{name}": mat.tolist() for name, mat in real.as_dict().items()}
    params = {"L": L, "pure": args.pure, "estimator": estimator}
    residuals = {"max_deviation_from_direct": dev, "pseudo_decomposition": pdev}
    table = "".join(f"R_{name}\n{np.array2string(m, precision=2, suppress_small=True)}\n"
                    for name, m in real.as_dict().items()) if args.out else None
    _emit(io.build_report("duality", params, results, residuals, sig.digest), args.out, table)
    return EXIT_OK


def cmd_takagi(args) -> int:
    sig, L, estimator, s, mats = _matrices(args)
    r = mats.get(args.eta)
    fact = linalg.eta_takagi(r, args.eta)
    results = {"diameter": io.quaternion_list(fact.diameter), "lambda": fact.lam.tolist()}
    residuals = {"reconstruction": fact.residual(r), "unitarity": fact.unitarity_defect()}
    params = {"L": L, "eta": args.eta, "pure": args.pure, "estimator": estimator}
    _emit(io.build_report("takagi", params, results, residuals, sig.digest), args.out)
    return EXIT_OK


def _run_filter(args, command: str) -> int:
    sig = io.read_signal(args.input)
    tgt = io.read_signal(args.target)
    if len(sig) != len(tgt):
        raise io.SignalFormatError(f"input has {len(sig)} rows but target has {len(tgt)}")
    if args.taps < 1:
        raise UsageError("--taps must be >= 1")
    if not (args.gain >= 0 and math.isfinite(args.gain)):
        raise UsageError("--gain must be a nonnegative number")
    state = filters.run_filter(sig.q, tgt.q, args.taps, args.gain, args.activation)
    sq = state.squared_errors
    window = max(1, int(math.ceil(0.1 * sq.size)))
    if args.trace:
        lines = ["n,err_sq"] + [f"{int(n)},{v!r}" for n, v in zip(sig.n, sq.tolist())]
        Path(args.trace).write_text("\n".join(lines) + "\n", encoding="utf-8")
    results = {
        "weights": io.quaternion_list(state.weights),
        "squared_errors": sq.tolist(),
        "final_window_mse": float(sq[-window:].mean()),
    }
    params = {"taps": args.taps, "gain": args.gain, "activation": args.activation,
              "target_digest": tgt.digest}
    residuals = {"final_window_mse": results["final_window_mse"], "target_power": float(np.mean(np.sum(tgt.q ** 2, axis=1)))}
    _emit(io.build_report(command, params, results, residuals, sig.digest), args.out)
    return EXIT_OK


def cmd_qlms(args) -> int:
    return _run_filter(args, "qlms")


def cmd_nlqlms(args) -> int:
    return _run_filter(args, "nlqlms")


def cmd_gradcheck(args) -> int:
    if args.function not in hrcalc.CATALOG:
        raise UsageError(f"unknown function {args.function!r}; choose from {', '.join(sorted(hrcalc.CATALOG))}")
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    worst = hrcalc.gradcheck(args.function, args.trials, args.seed)
    params = {"function": args.function, "trials": args.trials, "seed": args.seed}
    results = {"max_relative_error": worst, "tolerance": GRADCHECK_TOL, "passed": worst < GRADCHECK_TOL}
    _emit(io.build_report("gradcheck", params, results, {"max_relative_error": worst}, None), args.out,
          f"{args.function}: max relative error {worst:.3e}\n")
    return EXIT_OK if worst < GRADCHECK_TOL else EXIT_CHECK_FAILED


def _parse_axis(text: str) -> Quaternion:
    try:
        parts = [float(p) for p in text.split(",")]
    except ValueError:
        raise UsageError(f"--axis must be three comma-separated numbers, got {text!r}") from None
    if len(parts) != 3 or not all(math.isfinite(p) for p in parts):
        raise UsageError(f"--axis must be three comma-separated numbers, got {text!r}")
    axis = Quaternion(0.0, *parts)
    n = imag_norm(axis)
    if n == 0.0:
        raise UsageError("--axis must be nonzero")
    return axis / n


def cmd_rotate(args) -> int:
    axis = _parse_axis(args.axis)
    sig = io.read_signal(args.input)
    scale = np.maximum(1.0, qa.qnorm(sig.q))
    bad = np.flatnonzero(np.abs(sig.q[:, 0]) > PURE_TOL * scale)
    if bad.size:
        raise UsageError(f"rows with nonzero real part (n = {sig.n[bad].tolist()}); rotate needs pure samples")
    rotor = Rotor.from_axis_angle(axis, args.angle)
    out = np.array([rotor.apply(Quaternion.from_array(v)).to_array() for v in sig.q])
    out[:, 0] = 0.0
    before = qa.qnorm(sig.q)
    after = qa.qnorm(out)
    if args.csv:
        io.write_signal(args.csv, out, sig.n)
    results = {"n": sig.n.tolist(), "rotated": io.quaternion_list(out), "norm_before": before.tolist(),
               "norm_after": after.tolist()}
    params = {"axis": list(axis.vector), "angle": args.angle}
    residuals = {"max_norm_change": float(np.max(np.abs(after - before)))}
    _emit(io.build_report("rotate", params, results, residuals, sig.digest), args.out)
    return EXIT_OK


# parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qsp", description="Quaternion signal-processing batch tool.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def stats_flags(sp):
        sp.add_argument("input", help="signal CSV with header n,r,i,j,k")
        sp.add_argument("--pure", action="store_true", help="drop real parts before estimation")
        sp.add_argument("--unbiased", action="store_true", help="divide lag sums by N-|l| instead of N")
        sp.add_argument("--out", help="write the JSON report here (default: stdout)")

    sp = sub.add_parser("autocorr", help="autocorrelation sequences")
    stats_flags(sp)
    sp.add_argument("--kind", choices=["c", "i", "j", "k", "p", "all"], default="c")
    sp.add_argument("--lags", type=int, help="largest |lag| reported (default N-1)")
    sp.set_defaults(func=cmd_autocorr)

    for name, func, help_ in (
        ("matrices", cmd_matrices, "Toeplitz autocorrelation matrices"),
        ("duality", cmd_duality, "real correlation matrices recovered from the quaternion ones"),
        ("takagi", cmd_takagi, "eta-Hermitian factorisation of R_eta"),
    ):
        sp = sub.add_parser(name, help=help_)
        stats_flags(sp)
        sp.add_argument("--L", type=int, help="matrix order minus one (default N-1)")
        sp.add_argument("--eta", choices=list(linalg.ETA_AXES), default="i")
        sp.set_defaults(func=func)

    for name, func, act in (("qlms", cmd_qlms, "linear"), ("nlqlms", cmd_nlqlms, "tanh")):
        sp = sub.add_parser(name, help=f"{name.upper()} adaptive filter")
        sp.add_argument("input", help="input signal CSV")
        sp.add_argument("--target", required=True, help="target signal CSV, row-aligned with the input")
        sp.add_argument("--taps", type=int, default=1)
        sp.add_argument("--gain", type=float, default=filters.DEFAULT_GAIN)
        sp.add_argument("--activation", choices=list(filters.ACTIVATIONS), default=act)
        sp.add_argument("--trace", help="write per-step squared error CSV here")
        sp.add_argument("--out", help="write the JSON report here (default: stdout)")
        sp.set_defaults(func=func)

    sp = sub.add_parser("gradcheck", help="catalog derivatives against finite differences")
    sp.add_argument("--function", required=True)
    sp.add_argument("--trials", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", help="write the JSON report here (default: stdout)")
    sp.set_defaults(func=cmd_gradcheck)

    sp = sub.add_parser("rotate", help="rotate a pure-quaternion signal")
    sp.add_argument("input", help="pure signal CSV")
    sp.add_argument("--axis", required=True, help="rotation axis as x,y,z")
    sp.add_argument("--angle", type=float, required=True, help="angle in radians")
    sp.add_argument("--csv", help="write the rotated signal CSV here")
    sp.add_argument("--out", help="write the JSON report here (default: stdout)")
    sp.set_defaults(func=cmd_rotate)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.func(args)
    except io.SignalFormatError as exc:
        print(f"qsp: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except UsageError as exc:
        print(f"qsp: {exc}", file=sys.stderr)
        return EXIT_FLAGS
    except DegenerateSpectrumError as exc:
        print(f"qsp: degenerate spectrum: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except DivergenceError as exc:
        print(f"qsp: filter diverged: {exc}", file=sys.stderr)
        return EXIT_DIVERGENCE


if __name__ == "__main__":
    sys.exit(main())
