"""``imkit`` command-line front end.

Every subcommand reads JSON inputs (see :mod:`imkit.io`) and writes JSON, or
CSV for ``region``, to ``--out`` or stdout. Exit status is 0 on success, 1 on
a domain error (a JSON object ``{"error": name, "detail": text}`` goes to
stderr) and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from contextlib import contextmanager

import numpy as np

from . import channels, conversion, discrimination, io, linalg, measures, optics
from .config import Config
from .errors import ImaginarityError, InvalidInput, UnknownTolerance


class UsageError(Exception):
    pass


def _tolerance(text: str) -> tuple[str, float]:
    name, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE, got {text!r}")
    try:
        return name.strip(), float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"tolerance value {value!r} is not a number") from None


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=None, help="RNG seed (fallback: $IMKIT_SEED, then 0)")
    p.add_argument("--tol", type=_tolerance, action="append", default=[], metavar="NAME=VALUE",
                   help="override a named tolerance; repeatable")
    p.add_argument("--out", metavar="FILE", help="write output here instead of stdout")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="imkit", description="Imaginarity resource-theory toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_):
        return sub.add_parser(name, help=help_, parents=[common])

    p = add("measure", "robustness, fidelity of imaginarity and (pure) geometric imaginarity")
    p.add_argument("--state", metavar="FILE")
    p.add_argument("--bloch", metavar="x,y,z")

    p = add("convert", "optimal real-operation conversion between pure states")
    p.add_argument("--state", metavar="FILE", required=True)
    p.add_argument("--target", metavar="FILE", required=True)

    p = add("region", "CSV of qubit states reachable deterministically from a y-z plane state")
    p.add_argument("--bloch", metavar="x,y,z", required=True)
    p.add_argument("--grid", type=int, default=401, metavar="N")

    p = add("distill", "optimal real channel towards |+i>")
    p.add_argument("--state", metavar="FILE")
    p.add_argument("--bloch", metavar="x,y,z")

    p = add("discriminate", "LRCC protocol for two orthogonal real bipartite pure states")
    p.add_argument("--state", metavar="FILE", required=True)
    p.add_argument("--target", metavar="FILE", required=True)
    p.add_argument("--dim-a", type=int, required=True, metavar="N")
    p.add_argument("--trials", type=int, default=0, metavar="N",
                   help="Monte Carlo trials per state (0: exact branch sum)")

    p = add("optics", "two-level decompositions and wave-plate counts")
    osub = p.add_subparsers(dest="action", required=True)
    d = osub.add_parser("decompose", parents=[common], help="factor an orthogonal matrix into rotations")
    d.add_argument("--state", "--matrix", dest="state", metavar="FILE", required=True)
    d.add_argument("--proper", action="store_true", help="reject determinant -1")
    c = osub.add_parser("cost", parents=[common], help="unset wave-plate counts")
    g = c.add_mutually_exclusive_group(required=True)
    g.add_argument("--measurement", type=int, metavar="N", help="outcomes of a qubit measurement")
    g.add_argument("--dilation", type=int, metavar="D", help="channel dimension")

    p = add("validate", "check a state or Kraus set")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--state", metavar="FILE")
    g.add_argument("--channel", metavar="FILE")
    p.add_argument("--complete", action="store_true", help="complete an incomplete real Kraus set")

    p = add("random", "seeded random states and matrices")
    p.add_argument("--kind", required=True,
                   choices=["pure", "mixed", "real-pure", "real-mixed", "orthogonal", "unitary", "real-channel"])
    p.add_argument("--dim", type=int, required=True, metavar="N")
    p.add_argument("--kraus", type=int, default=2, metavar="N", help="operators for real-channel")
    return parser


def _config(args) -> Config:
    cfg = Config()
    if args.tol:
        cfg = cfg.replace(**dict(args.tol))
    return cfg


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("IMKIT_SEED")
    if env is None or env == "":
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"IMKIT_SEED must be an integer, got {env!r}") from None


def _bloch(text: str) -> linalg.BlochVector:
    try:
        return linalg.BlochVector.parse(text)
    except ImaginarityError:
        raise
    except ValueError as exc:
        raise InvalidInput(f"bad Bloch vector {text!r}: {exc}") from None


def _load_state(args, cfg: Config):
    if args.state is not None and getattr(args, "bloch", None) is not None:
        raise UsageError("give either --state or --bloch, not both")
    if args.state is not None:
        return linalg.as_state(io.array_from_json(io.read_json(args.state)), cfg)
    if getattr(args, "bloch", None) is not None:
        return _bloch(args.bloch).to_state()
    raise UsageError("one of --state or --bloch is required")


def _load_vector(path: str, cfg: Config) -> np.ndarray:
    arr = io.array_from_json(io.read_json(path))
    if arr.ndim == 2:
        return measures.pure_vector(arr, cfg).amplitudes
    return linalg.as_pure(arr, cfg).amplitudes


def cmd_measure(args, cfg, seed):
    return measures.measure_report(_load_state(args, cfg), cfg).as_dict()


def cmd_convert(args, cfg, seed):
    psi, phi = _load_vector(args.state, cfg), _load_vector(args.target, cfg)
    plan = conversion.pure_conversion_plan(psi, phi, cfg)
    return {
        "probability": plan.probability,
        "deterministic": plan.deterministic,
        "success_outcomes": plan.n_success,
        "channel": io.kraus_to_json(plan.kraus_set()),
    }


def cmd_region(args, cfg, seed):
    if args.grid < 2:
        raise UsageError(f"--grid must be >= 2, got {args.grid}")
    r = _bloch(args.bloch)
    return ("csv", lambda stream: conversion.write_region_csv(r, args.grid, stream))


def cmd_distill(args, cfg, seed):
    st = _load_state(args, cfg)
    res = conversion.distill(st, cfg)
    return {
        "achieved": res.achieved,
        "fidelity_of_imaginarity": measures.fidelity_of_imaginarity(st),
        "output": io.array_to_json(res.output.matrix),
        "channel": io.kraus_to_json(conversion.optimal_distillation_channel(st, cfg)),
    }


def cmd_discriminate(args, cfg, seed):
    psi, phi = _load_vector(args.state, cfg), _load_vector(args.target, cfg)
    proto = discrimination.synthesize_protocol(psi, phi, args.dim_a, cfg)
    rng = np.random.default_rng(seed)
    success = {w: discrimination.simulate_protocol(proto, w, args.trials, rng, cfg) for w in ("psi", "phi")}
    return {"success": success, "trials": args.trials, "protocol": proto.as_dict()}


def cmd_optics(args, cfg, seed):
    if args.action == "decompose":
        m = io.array_from_json(io.read_json(args.state))
        return optics.decompose_orthogonal(m, allow_reflection=not args.proper, config=cfg).as_dict()
    if args.measurement is not None:
        return optics.measurement_cost(args.measurement).as_dict()
    return optics.dilation_cost(args.dilation).as_dict()


def cmd_validate(args, cfg, seed):
    if args.state is not None:
        st = linalg.as_state(io.array_from_json(io.read_json(args.state)), cfg)
        return {"valid": True, "kind": "state", "dim": st.dim, "real": st.is_real(cfg.real),
                "purity": st.purity()}
    k = channels.validate_real(io.kraus_from_json(io.read_json(args.channel), real=False),
                               complete=not args.complete, config=cfg)
    out = {"valid": True, "kind": "channel", "outcomes": len(k), "dim_in": k.dim_in, "dim_out": k.dim_out,
           "completeness_residual": k.completeness_residual(), "complete": k.is_complete(cfg.tr)}
    if args.complete:
        out["completed"] = io.kraus_to_json(channels.complete_set(k, cfg))
    return out


def cmd_random(args, cfg, seed):
    if args.dim < 1:
        raise UsageError(f"--dim must be >= 1, got {args.dim}")
    kind, d = args.kind, args.dim
    if kind == "pure":
        return io.array_to_json(linalg.random_pure(d, seed).amplitudes)
    if kind == "real-pure":
        return io.array_to_json(linalg.random_real_pure(d, seed).amplitudes)
    if kind == "mixed":
        return io.array_to_json(linalg.random_state(d, seed).matrix)
    if kind == "real-mixed":
        return io.array_to_json(linalg.random_real_state(d, seed).matrix)
    if kind == "orthogonal":
        return io.array_to_json(linalg.random_orthogonal(d, seed))
    if kind == "unitary":
        return io.array_to_json(linalg.random_unitary(d, seed))
    return io.kraus_to_json(channels.random_real_channel(d, d, args.kraus, seed))


COMMANDS = {
    "measure": cmd_measure,
    "convert": cmd_convert,
    "region": cmd_region,
    "distill": cmd_distill,
    "discriminate": cmd_discriminate,
    "optics": cmd_optics,
    "validate": cmd_validate,
    "random": cmd_random,
}


@contextmanager
def _output(path):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", newline="\n") as fh:
            yield fh


def _emit_error(name: str, detail: str) -> None:
    sys.stderr.write(json.dumps({"error": name, "detail": detail}) + "\n")


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code is None else int(exc.code)
    try:
        cfg = _config(args)
        seed = _seed(args)
        result = COMMANDS[args.command](args, cfg, seed)
    except (UsageError, UnknownTolerance) as exc:
        _emit_error(type(exc).__name__, str(exc))
        return 2
    except ImaginarityError as exc:
        _emit_error(exc.name, exc.detail)
        return 1
    try:
        with _output(args.out) as stream:
            if isinstance(result, tuple) and result[0] == "csv":
                result[1](stream)
            else:
                stream.write(io.dumps(result))
    except OSError as exc:
        _emit_error("InvalidInput", f"cannot write {args.out}: {exc.strerror}")
        return 1
    return 0


def main() -> None:
    sys.exit(run())
