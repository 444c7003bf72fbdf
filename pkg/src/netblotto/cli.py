"""Command-line front end.

Subcommands: ring-solve, sweep, symmetric, simulate, certify, make-spec.
Players and fields are labelled 1..n in all output; list position i holds
label i + 1.

Exit codes: 0 success, 1 bad input, 2 singular ring system, 3 failed
equilibrium certification.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import model, ring, symmetric
from .errors import BlottoError, SingularSystem
from .simulator import SimConfig, simulate, verify_equilibrium

EXIT_OK, EXIT_USAGE, EXIT_SINGULAR, EXIT_NOT_EQUILIBRIUM = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of numbers, got {text!r}") from None


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of integers, got {text!r}") from None


def _emit(doc) -> None:
    sys.stdout.write(json.dumps(doc, indent=2) + "\n")


def _action_label(action: model.PureAction) -> str:
    return "abstain" if action.is_abstain else f"hunt:{action.field + 1}"


def _write_text(path: str, write) -> None:
    try:
        with open(path, "w", newline="") as f:
            write(f)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}") from None


# -- ring-solve ------------------------------------------------------------


def _ring_from_args(args) -> ring.RingGame:
    if (args.weights is None) == (args.epsilon is None):
        raise UsageError("give exactly one of --weights or --epsilon")
    if args.weights is not None:
        if len(args.weights) != args.n:
            raise UsageError(f"--weights has {len(args.weights)} entries, expected {args.n}")
        return ring.RingGame(args.n, np.array(args.weights), args.r)
    return ring.RingGame.arithmetic(args.n, args.epsilon, args.r)


def cmd_ring_solve(args) -> int:
    game = _ring_from_args(args)
    eq = ring.solve_ring(game)
    _emit(
        {
            "n": game.n,
            "r": game.tie_factor,
            "weights": game.weights.tolist(),
            "p": eq.p.tolist(),
            "residual": eq.residual,
            "interior": eq.interior,
            "payoffs": ring.ring_payoffs(game, eq).tolist(),
            "survival_rate": float(ring.ring_survival(eq.p).mean()),
        }
    )
    return EXIT_OK


# -- sweep -----------------------------------------------------------------


def _require(args, *names):
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"--mode {args.mode} requires {', '.join(missing)}")


def cmd_sweep(args) -> int:
    if args.mode == "ring":
        _require(args, "n", "epsilon_max", "steps")
        if args.steps < 1:
            raise UsageError("--steps must be at least 1")
        grid = np.linspace(0.0, args.epsilon_max, args.steps)
        rows = ring.dispersion_sweep(args.n, grid, args.r)
        _write_text(args.out, lambda f: ring.write_sweep_csv(rows, args.n, f))
    elif args.mode == "survival-curve":
        _require(args, "v", "x_max")
        if args.x_max < 2:
            raise UsageError("--x-max must be at least 2")
        xs = range(2, args.x_max + 1)
        _write_text(args.out, lambda f: symmetric.write_curve_csv(xs, args.v, args.r, f))
    else:
        _require(args, "k", "n_list")
        if args.v_steps < 1:
            raise UsageError("--v-steps must be at least 1")
        vs = np.linspace(args.v_min, args.v_max, args.v_steps)
        params = [
            symmetric.SymmetricParams(n, n, k, float(v), r)
            for r in args.r_list
            for k in args.k
            for n in args.n_list
            for v in vs
        ]
        _write_text(args.out, lambda f: symmetric.write_compare_csv(params, f))
    return EXIT_OK


# -- symmetric -------------------------------------------------------------


def cmd_symmetric(args) -> int:
    n = args.n if args.n is not None else max(args.k, 2)
    m = args.m if args.m is not None else n
    params = symmetric.SymmetricParams(n, m, args.k, args.v, args.r)
    if args.topology == "regular":
        doc = {
            "topology": "regular",
            "k": params.k,
            "v": params.v,
            "r": params.r,
            "threshold": symmetric.regular_threshold(params.k, params.r),
            "hunt_prob": symmetric.regular_hunt_prob(params),
            "survival": symmetric.regular_survival(params),
            "net_payoff": symmetric.expected_net_payoff("regular", params),
        }
    elif args.topology == "random":
        # k is deliberately absent: nothing here depends on it
        doc = {
            "topology": "random",
            "n": params.n,
            "m": params.m,
            "v": params.v,
            "r": params.r,
            "threshold": symmetric.random_threshold(params.n, params.m, params.r),
            "hunt_prob": symmetric.random_hunt_prob(params),
            "survival": symmetric.random_survival(params),
            "net_payoff": symmetric.expected_net_payoff("random", params),
        }
        if params.v > 0:
            doc["hunt_prob_limit"] = symmetric.hunt_prob_limit(params.v, params.r)
            doc["limit_saturated"] = symmetric.hunt_prob_limit_saturated(params.v, params.r)
    else:
        c = symmetric.compare_topologies(params)
        doc = {
            "topology": "compare",
            "k": params.k,
            "n": params.n,
            "v": params.v,
            "r": params.r,
            "case": c.case.value,
            "s_reg": c.s_reg,
            "s_rnd": c.s_rnd,
            "w_reg": c.w_reg,
            "w_rnd": c.w_rnd,
            "p_reg": c.p_reg,
            "p_rnd": c.p_rnd,
            "threshold_reg": c.a_reg,
            "threshold_rnd": c.a_rnd,
        }
    _emit(doc)
    return EXIT_OK


# -- simulate / certify ----------------------------------------------------


def _ring_of_spec(spec: model.GameSpec) -> ring.RingGame:
    if spec.n != spec.m or spec.n < 3 or spec.network != model.make_regular_network(spec.n, spec.n, 2):
        raise UsageError("--use-solved needs a 2-regular ring spec (player i accesses fields i and i+1)")
    if spec.hunting_cost != 0:
        raise UsageError("--use-solved needs a ring spec without hunting cost (v = 0)")
    return ring.RingGame(spec.n, spec.weights, spec.tie_factor)


def _load_profile(args, spec: model.GameSpec) -> model.StrategyProfile:
    if (args.profile is None) == (not args.use_solved):
        raise UsageError("give exactly one of --profile or --use-solved")
    if args.use_solved:
        game = _ring_of_spec(spec)
        return ring.to_profile(game, ring.solve_ring(game))
    doc = model._loads(Path(args.profile).read_text())
    if isinstance(doc, dict) and "p" in doc and "hunt" not in doc:
        game = _ring_of_spec(spec)
        p = np.array(doc["p"], dtype=float)
        return ring.to_profile(game, ring.RingEquilibrium(p, float("nan"), bool(np.all((p > 0) & (p < 1)))))
    if not isinstance(doc, dict):
        raise UsageError("profile must be a JSON object")
    return model.profile_from_dict(doc)


def cmd_simulate(args) -> int:
    if args.reps < 1:
        raise UsageError("--reps must be at least 1")
    spec = model.load_spec(args.spec)
    profile = _load_profile(args, spec)
    report = simulate(spec, profile, SimConfig(args.reps, args.seed, workers=args.workers))
    sys.stdout.write(report.to_json() + "\n")
    return EXIT_OK


def cmd_certify(args) -> int:
    spec = model.load_spec(args.spec)
    profile = _load_profile(args, spec)
    report = verify_equilibrium(spec, profile, args.tolerance)
    doc = report.to_dict()
    doc["best_actions"] = [_action_label(a) for a in report.improving_actions]
    doc["improving"] = [
        {"player": i + 1, "gain": float(g), "action": _action_label(a)}
        for i, (g, a) in enumerate(zip(report.gains, report.improving_actions))
        if g > args.tolerance
    ]
    _emit(doc)
    return EXIT_OK if report.is_equilibrium else EXIT_NOT_EQUILIBRIUM


# -- make-spec -------------------------------------------------------------


def cmd_make_spec(args) -> int:
    m = args.m if args.m is not None else args.n
    if args.topology == "regular":
        net = model.make_regular_network(args.n, m, args.k)
    else:
        net = model.make_random_network(args.n, m, args.k, args.seed)
    weights = np.ones(m) if args.weights is None else np.array(args.weights)
    spec = model.GameSpec(net, weights, args.r, args.v)
    text = model.dumps_spec(spec) + "\n"
    if args.out is None:
        sys.stdout.write(text)
    else:
        _write_text(args.out, lambda f: f.write(text))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="netblotto", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("ring-solve", help="solve the 2-regular ring game")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--weights", type=_floats)
    p.add_argument("--epsilon", type=float, help="arithmetic weights 1 + (j - ceil(n/2)) * epsilon")
    p.add_argument("--r", type=float, default=0.5)
    p.set_defaults(func=cmd_ring_solve)

    p = sub.add_parser("sweep", help="write plot-ready CSV sweeps")
    p.add_argument("--mode", choices=["ring", "survival-curve", "compare"], default="ring")
    p.add_argument("--out", required=True)
    p.add_argument("--r", type=float, default=None, help="tie factor (default 0.5 for ring, 0 for the survival curve)")
    p.add_argument("--n", type=int)
    p.add_argument("--epsilon-max", type=float)
    p.add_argument("--steps", type=int)
    p.add_argument("--v", type=float)
    p.add_argument("--x-max", type=int)
    p.add_argument("--k", type=_ints, help="compare mode: comma list of degrees")
    p.add_argument("--n-list", type=_ints, help="compare mode: comma list of player counts")
    p.add_argument("--r-list", type=_floats, default=[0.0], help="compare mode: comma list of tie factors")
    p.add_argument("--v-min", type=float, default=0.05)
    p.add_argument("--v-max", type=float, default=0.95)
    p.add_argument("--v-steps", type=int, default=19)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("symmetric", help="closed-form symmetric equilibria with hunting cost")
    p.add_argument("--topology", choices=["regular", "random", "compare"], required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--v", type=float, required=True)
    p.add_argument("--r", type=float, default=0.0)
    p.set_defaults(func=cmd_symmetric)

    for name, func, help_ in (
        ("simulate", cmd_simulate, "Monte Carlo estimate of payoffs and survival"),
        ("certify", cmd_certify, "exact deviation gains and an epsilon-equilibrium verdict"),
    ):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--spec", required=True, help="GameSpec JSON")
        p.add_argument("--profile", help="profile JSON: {hunt, abstain} or, for ring specs, {p}")
        p.add_argument("--use-solved", action="store_true", help="use the solved ring equilibrium")
        if name == "simulate":
            p.add_argument("--reps", type=int, required=True)
            p.add_argument("--seed", type=int, default=0)
            p.add_argument("--workers", type=int, default=1)
        else:
            p.add_argument("--tolerance", type=float, default=1e-9)
        p.set_defaults(func=func)

    p = sub.add_parser("make-spec", help="write a GameSpec JSON document")
    p.add_argument("--topology", choices=["regular", "random"], default="regular")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--weights", type=_floats)
    p.add_argument("--r", type=float, default=0.5)
    p.add_argument("--v", type=float, default=0.0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_make_spec)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "mode", None) == "ring" and args.r is None:
        args.r = 0.5
    elif getattr(args, "mode", None) == "survival-curve" and args.r is None:
        args.r = 0.0
    try:
        return args.func(args)
    except SingularSystem as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    except (UsageError, BlottoError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
