"""Command-line front end: ``cantormoduli <command> [flags]``.

Every command parses its inputs, calls one library function and serialises
the result. JSON outputs carry a ``config`` block with every default filled
in; CSV outputs start with ``#``-prefixed config lines.
"""

import argparse
import json
import sys
from pathlib import Path

import mpmath

from . import bounds, cantor, equivalence, ergodic, rings, sequences
from .numeric import DEFAULT_PREC, as_rational, fmt_number, precision


class ValidationError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(message)


def _literal(text):
    try:
        sequences.parse_literal(text)
    except (sequences.SequenceError, OSError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    return text


def _rational(text):
    try:
        return as_rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive_int(text):
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {n}")
    return n


def _int_list(text):
    return [_positive_int(x) for x in text.split(",") if x]


def _rational_list(text):
    return [_rational(x) for x in text.split(",") if x]


def _t_grid(text):
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected lo:hi:n, got {text!r}")
    try:
        lo, hi = mpmath.mpf(parts[0]), mpmath.mpf(parts[1])
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad grid bounds in {text!r}") from None
    n = _positive_int(parts[2])
    if not 0 < lo <= hi:
        raise argparse.ArgumentTypeError(f"need 0 < lo <= hi, got {text!r}")
    return parts[0], parts[1], n


def _cylinder(text):
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected i:lo:hi, got {text!r}")
    return _positive_int(parts[0]), _rational(parts[1]), _rational(parts[2])


def build_parser():
    p = _Parser(prog="cantormoduli", description="Generalized Cantor sets and their moduli.")
    p.add_argument("--prec", type=_positive_int, default=DEFAULT_PREC, help="working precision in bits")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--out", type=Path, default=None, help="output file (default: stdout)")
        return sp

    sp = add("build", "construct E_k(omega) exactly")
    sp.add_argument("--omega", type=_literal, required=True)
    sp.add_argument("--depth", type=int, required=True)
    sp.add_argument("--format", choices=["json", "csv"], default="json")

    sp = add("verify", "check closed-form lengths against the construction")
    sp.add_argument("--omega", type=_literal, required=True)
    sp.add_argument("--depth", type=int, required=True)

    sp = add("bounds", "length bounds for every gamma_k^j up to a depth")
    sp.add_argument("--omega", type=_literal, required=True)
    sp.add_argument("--depth", type=_positive_int, required=True)
    sp.add_argument("--delta", type=_rational, default=None, help="default: the sequence's lower bound")

    sp = add("moduli", "Psi(t) bounds against the modulus oracle, or the modulus chain")
    sp.add_argument("--t-grid", type=_t_grid, default=None, help="lo:hi:n, log-spaced")
    sp.add_argument("--chain-q", type=_rational_list, default=None, help="comma-separated q values")
    sp.add_argument("--chain-k", type=_positive_int, default=30, help="largest k for the chain")

    sp = add("classify", "three-valued equivalence verdict for a pair")
    sp.add_argument("--a", type=_literal, required=True)
    sp.add_argument("--b", type=_literal, required=True)
    sp.add_argument("--horizon", type=_positive_int, default=1000)
    sp.add_argument("--delta", type=_rational, default=None)
    sp.add_argument("--heuristic-threshold", type=_rational, default=None)

    sp = add("matrix", "pairwise verdicts over the family q_n = 1 - exp(-n^alpha)")
    sp.add_argument("--alphas", type=_rational_list, default=_rational_list("1.1,1.5,2,3,5"))
    sp.add_argument("--horizon", type=_positive_int, default=1000)
    sp.add_argument("--format", choices=["json", "csv"], default="json")

    sp = add("simulate", "Monte Carlo volume experiment and shift-preservation checks")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--samples", type=_positive_int, default=10_000)
    sp.add_argument("--trunc", type=_positive_int, default=200)
    sp.add_argument("--threshold", type=_rational, default=5)
    sp.add_argument("--ref", type=_literal, default="power_exp:1:2")
    sp.add_argument("--checkpoints", type=_int_list, default=None, help="default: 10,50,100,trunc")
    sp.add_argument("--cylinder", type=_cylinder, action="append", default=[], help="i:lo:hi, repeatable")
    return p


def _config(args):
    cfg = {}
    for key, val in sorted(vars(args).items()):
        if key == "out":
            continue
        if isinstance(val, list):
            val = [_plain(v) for v in val]
        else:
            val = _plain(val)
        cfg[key] = val
    return cfg


def _plain(v):
    if v is None or isinstance(v, (bool, int, str)):
        return v
    if isinstance(v, tuple):
        return [_plain(x) for x in v]
    return fmt_number(v)


def _json_text(payload):
    return json.dumps(payload, indent=2) + "\n"


def _csv_text(cfg, body):
    head = "".join(f"# {k}={json.dumps(v)}\n" for k, v in cfg.items())
    return head + body


def _cmd_build(args, cfg):
    level = cantor.build_level(sequences.parse_literal(args.omega), args.depth)
    if args.format == "csv":
        return _csv_text(cfg, level.to_csv())
    return _json_text({"config": cfg, "level": level.to_json()})


def _cmd_verify(args, cfg):
    report = cantor.verify_formulas(sequences.parse_literal(args.omega), args.depth)
    return _json_text({"config": cfg, "report": report.to_json()})


def _cmd_bounds(args, cfg):
    omega = sequences.parse_literal(args.omega)
    delta = args.delta if args.delta is not None else sequences.lower_bound(omega)
    cfg["delta"] = _plain(delta)
    return _csv_text(cfg, bounds.bounds_csv(omega, range(1, args.depth + 1), delta))


def _cmd_moduli(args, cfg):
    if args.chain_q is not None:
        return _csv_text(cfg, rings.chain_csv(args.chain_q, range(1, args.chain_k + 1)))
    lo, hi, n = args.t_grid or ("1e-3", "1e6", 1000)
    cfg["t_grid"] = f"{lo}:{hi}:{n}"
    return _csv_text(cfg, rings.psi_csv(rings.log_grid(lo, hi, n)))


def _cmd_classify(args, cfg):
    a, b = sequences.parse_literal(args.a), sequences.parse_literal(args.b)
    verdict = equivalence.classify(a, b, args.horizon, args.delta, args.heuristic_threshold)
    cfg["delta"] = _plain(verdict.delta)
    return _json_text({"config": cfg, "verdict": verdict.to_json()})


def _cmd_matrix(args, cfg):
    matrix = equivalence.pairwise_matrix(args.alphas, args.horizon)
    if args.format == "csv":
        return _csv_text(cfg, equivalence.matrix_csv(args.alphas, matrix))
    rows = [
        {"alpha": fmt_number(a), "alpha_prime": fmt_number(b), "verdict": v.to_json()}
        for a, row in zip(args.alphas, matrix)
        for b, v in zip(args.alphas, row)
    ]
    return _json_text({"config": cfg, "pairs": rows})


def _cmd_simulate(args, cfg):
    if args.checkpoints is None:
        args.checkpoints = sorted({c for c in (10, 50, 100) if c < args.trunc} | {args.trunc})
        cfg["checkpoints"] = args.checkpoints
    batch = ergodic.sample_batch(args.seed, args.trunc, args.samples)
    report = ergodic.volume_experiment(
        sequences.parse_literal(args.ref), batch, args.threshold, checkpoints=args.checkpoints
    )
    out = {"config": cfg, "volume": report.to_json()}
    if args.cylinder:
        cyl_reports = [
            ergodic.shift_preservation_test(batch, ergodic.CylinderSet(tuple(args.cylinder[i:i + 1])))
            for i in range(len(args.cylinder))
        ]
        out["preservation"] = [r.to_json() for r in cyl_reports]
    return _json_text(out)


COMMANDS = {
    "build": _cmd_build,
    "verify": _cmd_verify,
    "bounds": _cmd_bounds,
    "moduli": _cmd_moduli,
    "classify": _cmd_classify,
    "matrix": _cmd_matrix,
    "simulate": _cmd_simulate,
}


def _fail(exc):
    err = {"error": type(exc).__name__, "message": str(exc)}
    sys.stderr.write(json.dumps(err) + "\n")
    return 2


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
    except ValidationError as exc:
        return _fail(exc)
    cfg = _config(args)
    try:
        with precision(args.prec):
            text = COMMANDS[args.command](args, cfg)
    except (ValueError, IndexError, ArithmeticError) as exc:
        return _fail(exc)
    if args.out is None:
        sys.stdout.write(text)
    else:
        args.out.write_text(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
