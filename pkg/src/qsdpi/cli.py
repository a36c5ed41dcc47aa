"""Command-line front end.

Exit codes: 0 on success, 2 on validation errors (bad states, POVMs, rank
or dimension-budget violations), 3 on unreadable or malformed input files.
Errors are reported as one JSON object on standard error.
"""
import argparse
import csv
import io as _stdio
import json
import sys

import numpy as np

from . import io
from .correlation import BipartiteState, maximal_correlation
from .errors import ParseError, ParamError, QsdpiError
from .kappa import KappaFunction
from .metric import petz_recovery
from .qubit import figure_data
from .sdpi import (
    chi_squared,
    contraction_coefficient_estimate,
    sdpi_constant_eig,
    sdpi_constant_svd,
)
from .tensorization import counterexample_search, tensorization_check


def parse_grid(text):
    """``start:end:count`` inclusive of both ends; a bare number is one point."""
    parts = text.split(":")
    try:
        if len(parts) == 1:
            return [float(parts[0])]
        if len(parts) == 3:
            start, end, count = float(parts[0]), float(parts[1]), int(parts[2])
            if count < 1:
                raise ValueError
            return [float(x) for x in np.linspace(start, end, count)]
    except ValueError:
        pass
    raise ParamError(f"grid must be start:end:count, got {text!r}")


def _kappa(text):
    try:
        return KappaFunction.parse(text)
    except ParamError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _dims(text):
    try:
        dims = tuple(int(d) for d in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"dims must be comma-separated integers: {text!r}") from None
    if len(dims) != 2 or min(dims) < 1:
        raise argparse.ArgumentTypeError("dims must be two positive integers")
    return dims


# -- subcommands ----------------------------------------------------------------


def cmd_chisq(args):
    rho = io.load_state(args.rho)
    sigma = io.load_state(args.sigma)
    val = chi_squared(rho, sigma, args.kappa)
    infinite = val == float("inf")
    return {"kappa": str(args.kappa), "value": None if infinite else val, "infinite": infinite}


def cmd_sdpi(args):
    ch = io.load_channel(args.channel)
    sigma = io.load_state(args.sigma)
    if args.method == "svd":
        rep = sdpi_constant_svd(ch, sigma, args.kappa)
        out = rep.to_dict()
        out["residuals"] = {"unitality": out.pop("fixed_point_residual")}
        return out
    rep = sdpi_constant_eig(ch, sigma, args.kappa)
    out = rep.to_dict()
    out["residuals"] = {"fixed_point": out.pop("fixed_point_residual")}
    if args.method == "both":
        svd = sdpi_constant_svd(ch, sigma, args.kappa)
        out["method"] = "both"
        out["eta_svd"] = svd.eta
        out["svd_spectrum"] = [float(x) for x in svd.spectrum]
        out["residuals"]["eig_svd_gap"] = abs(rep.eta - svd.eta)
    return out


def cmd_tensorize(args):
    channels = [io.load_channel(p) for p in args.channels]
    sigmas = [io.load_state(p) for p in args.sigmas]
    return tensorization_check(channels, sigmas, args.kappa).to_dict()


def cmd_maxcorr(args):
    state = BipartiteState(io.load_state(args.state), args.dims)
    res = maximal_correlation(state, args.kappa)
    return {"mu": res.mu, "kappa": str(args.kappa), "constraint_residuals": res.constraint_residuals}


def cmd_petz(args):
    ch = io.load_channel(args.channel)
    sigma = io.load_state(args.sigma)
    return io.channel_to_json(petz_recovery(ch, sigma))


def cmd_contraction(args):
    ch = io.load_channel(args.channel)
    est = contraction_coefficient_estimate(ch, args.kappa, trials=args.trials, seed=args.seed)
    return {
        "eta_lower_bound": est.eta,
        "kappa": str(args.kappa),
        "trials": est.trials,
        "seed": args.seed,
        "sigma": io.matrix_to_json(est.sigma.matrix),
    }


def cmd_search(args):
    dims = (args.dim,) * args.factors
    res = counterexample_search(args.kappa, dims, args.trials, args.seed, args.family)
    return res.to_dict()


def cmd_figure(args):
    if args.kind == "bsc":
        return figure_data("bsc_sweep", {"eps": args.eps}, parse_grid(args.s))
    if args.s is None:
        raise ParamError("figure qc needs --s")
    params = {"xi": args.xi, "s": float(args.s)}
    kind = "qc_alpha_sweep" if args.family == "alpha" else "qc_wyd_sweep"
    return figure_data(kind, params, parse_grid(args.grid))


# -- output ---------------------------------------------------------------------


def _flatten(d, prefix=""):
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            yield from _flatten(v, key + ".")
        elif isinstance(v, list):
            yield key, json.dumps(v)
        else:
            yield key, v


def _cell(v):
    return repr(v) if isinstance(v, float) else v


def render(result, fmt):
    if fmt == "json":
        return json.dumps(result, indent=2) + "\n"
    buf = _stdio.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if isinstance(result, list):
        header = list(result[0])
        writer.writerow(header)
        for row in result:
            writer.writerow([_cell(row[h]) for h in header])
    else:
        writer.writerow(["key", "value"])
        for k, v in _flatten(result):
            writer.writerow([k, _cell(v)])
    return buf.getvalue()


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default=None)

    parser = argparse.ArgumentParser(
        prog="qsdpi", description="Quantum chi^2_kappa SDPI constants and related quantities."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=func)
        return p

    p = add("chisq", cmd_chisq, "chi^2_kappa divergence between two states")
    p.add_argument("--rho", required=True)
    p.add_argument("--sigma", required=True)
    p.add_argument("--kappa", type=_kappa, default="half")

    p = add("sdpi", cmd_sdpi, "SDPI constant of a channel at a reference state")
    p.add_argument("--channel", required=True)
    p.add_argument("--sigma", required=True)
    p.add_argument("--kappa", type=_kappa, default="half")
    p.add_argument("--method", choices=("eig", "svd", "both"), default="eig")

    p = add("tensorize", cmd_tensorize, "compare product-channel and local SDPI constants")
    p.add_argument("--channels", nargs="+", required=True)
    p.add_argument("--sigmas", nargs="+", required=True)
    p.add_argument("--kappa", type=_kappa, default="half")

    p = add("maxcorr", cmd_maxcorr, "kappa-quantum maximal correlation of a bipartite state")
    p.add_argument("--state", required=True)
    p.add_argument("--dims", type=_dims, required=True)
    p.add_argument("--kappa", type=_kappa, default="half")

    p = add("petz", cmd_petz, "Petz recovery map of a channel at a reference state")
    p.add_argument("--channel", required=True)
    p.add_argument("--sigma", required=True)

    p = add("contraction", cmd_contraction, "lower-bound estimate of the contraction coefficient")
    p.add_argument("--channel", required=True)
    p.add_argument("--kappa", type=_kappa, default="half")
    p.add_argument("--trials", type=int, default=20)

    p = add("search", cmd_search, "random search for tensorization gaps")
    p.add_argument("--kappa", type=_kappa, default="half")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--factors", type=int, default=2)
    p.add_argument("--family", choices=("general", "qc"), default="general")
    p.add_argument("--trials", type=int, default=100)

    p = add("figure", cmd_figure, "closed-form vs numeric tables for the qubit examples")
    p.add_argument("kind", choices=("bsc", "qc"))
    p.add_argument("--eps", type=float, default=0.05)
    p.add_argument("--s", default=None, help="bsc: grid over s; qc: a single s")
    p.add_argument("--xi", type=float, default=0.95)
    p.add_argument("--family", choices=("alpha", "wyd"), default="alpha")
    p.add_argument("--grid", default="0:1:101", help="kappa parameter grid for qc")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "figure" and args.kind == "bsc" and args.s is None:
        args.s = "0:0.95:50"
    fmt = args.format or ("csv" if args.command == "figure" else "json")
    try:
        result = args.func(args)
    except ParseError as exc:
        sys.stderr.write(json.dumps(io.error_payload(exc)) + "\n")
        return 3
    except QsdpiError as exc:
        sys.stderr.write(json.dumps(io.error_payload(exc)) + "\n")
        return 2
    text = render(result, fmt)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
