"""pennyflip command line.

Exit codes: 0 win, 1 verified lose, 2 input error, 3 singular problem,
4 no strategy according to the classifier.
"""

from __future__ import annotations

import argparse
import logging
import math
import os
import sys
import time
from typing import Callable

import numpy as np

from ..errors import (
    DegenerateCompositionError,
    DomainError,
    ParameterInconsistencyError,
    SingularProblemError,
)
from ..gamesim import (
    DEFAULT_GRID,
    EPS_WIN,
    GameSpec,
    StrategyPair,
    bloch_trace,
    evolve_branch,
    quantum_payoff,
    verify_strategy,
)
from ..nash import MixedStrategyP, MixedStrategyQ, expected_payoff, is_nash_equilibrium
from ..qalg import random_unitary
from ..solver import (
    ChappellParams,
    PhaseVariableParams,
    brute_force_oracle,
    chappell_family,
    classify_multiple,
    meyer_hadamard,
    phase_variable_family,
    phase_variable_spec,
    restoring_state_exists,
    sigma13_family,
    synthesize,
)
from ..solver.multiple import NO_IN_GENERAL
from ..solver.oracle import DEFAULT_GRID as ORACLE_GRID
from . import io

log = logging.getLogger("pennyflip")

EXIT_WIN, EXIT_LOSE, EXIT_INPUT, EXIT_SINGULAR, EXIT_NO_STRATEGY = 0, 1, 2, 3, 4
ORACLE_WIN = 1.0 - 1e-4

FAMILIES = ("meyer", "chappell", "sigma13", "phase", "two-unitary")
THETA_RANGE = (0.5 * math.pi, 1.5 * math.pi)
PHI_RANGE = (0.0, 2.0 * math.pi)
PHASE_RANGE = (0.0, 4.0 * math.pi)


class CliError(Exception):
    def __init__(self, code: int, message: str, report: dict | None = None):
        super().__init__(message)
        self.code = code
        self.report = report


def _eps_win() -> float:
    raw = os.environ.get("PENNYFLIP_EPS")
    if raw is None:
        return EPS_WIN
    try:
        eps = float(raw)
    except ValueError:
        raise CliError(EXIT_INPUT, f"PENNYFLIP_EPS must be a number, got {raw!r}") from None
    if not (eps > 0 and math.isfinite(eps)):
        raise CliError(EXIT_INPUT, "PENNYFLIP_EPS must be positive")
    return eps


def _angle(text: str) -> float:
    try:
        return io.parse_angle(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _sign(text: str) -> int:
    value = int(text) if text.lstrip("+-").isdigit() else 0
    if value not in (1, -1):
        raise argparse.ArgumentTypeError(f"sign must be +1 or -1, got {text!r}")
    return value


def _spec_source(args) -> str:
    source = args.spec_path or args.spec
    if not source:
        raise CliError(EXIT_INPUT, "no game spec given (positional or --spec)")
    return source


def _load_spec(args, default_alpha: float = 0.0, default_beta: float = 0.0) -> tuple[dict, GameSpec]:
    alpha = default_alpha if getattr(args, "alpha", None) is None else args.alpha
    beta = default_beta if getattr(args, "beta", None) is None else args.beta
    data = io.load_spec_dict(_spec_source(args), alpha, beta)
    return data, io.spec_from_dict(data)


def _theta(args, default: float = math.pi) -> float:
    return default if args.theta is None else args.theta


def family_pair(family: str, args, spec: GameSpec) -> tuple[StrategyPair, dict]:
    """Q's strategy from a named family and the parameter flags."""
    if family == "meyer":
        return meyer_hadamard(), {}
    if family in ("chappell", "sigma13"):
        p = ChappellParams(_theta(args), args.phi or 0.0, args.delta1, args.delta2, args.a_sign, args.b_sign)
        build = chappell_family if family == "chappell" else sigma13_family
        return build(p), vars_of(p)
    if family == "phase":
        p = PhaseVariableParams(_theta(args), args.phi or 0.0, args.alpha or 0.0, args.beta or 0.0,
                                args.delta1, args.delta2, args.a_sign, args.b_sign)
        return phase_variable_family(p), vars_of(p)
    if family == "two-unitary":
        if spec.n_ops != 2:
            raise CliError(EXIT_INPUT, "the two-unitary family needs a spec with exactly two operations")
        method, pair, problem = synthesize(spec, args.c_sign, args.phi or 0.0, args.delta1, args.delta2,
                                           gamma=args.gamma, theta1=args.theta)
        return pair, _problem_params(method, problem)
    raise CliError(EXIT_INPUT, f"unknown family {family!r}")


def vars_of(p) -> dict:
    return {k: getattr(p, k) for k in p.__dataclass_fields__}


def _problem_params(method: str, problem) -> dict:
    out = {"method": method}
    if problem is not None:
        out.update(theta1=problem.theta1, theta2=problem.theta2, gamma=problem.gamma,
                   delta1=problem.delta1, delta2=problem.delta2, c_sign=problem.c_sign)
    return out


def _strategy_from_args(args, spec: GameSpec) -> tuple[StrategyPair, dict]:
    sources = [args.family is not None, args.u1 is not None or args.u2 is not None, args.strategy_file is not None]
    if sum(sources) != 1:
        raise CliError(EXIT_INPUT, "give exactly one of --family, --u1/--u2 or --strategy-file")
    if args.family is not None:
        return family_pair(args.family, args, spec)
    if args.strategy_file is not None:
        return io.load_strategy_file(args.strategy_file), {"strategy_file": args.strategy_file}
    if args.u1 is None or args.u2 is None:
        raise CliError(EXIT_INPUT, "--u1 and --u2 must be given together")
    return StrategyPair(_matrix_arg(args.u1), _matrix_arg(args.u2)), {"u1": args.u1, "u2": args.u2}


def _matrix_arg(text: str) -> np.ndarray:
    stripped = text.strip()
    if stripped.startswith("["):
        import json

        try:
            return io.decode_matrix(json.loads(stripped))
        except json.JSONDecodeError as exc:
            raise CliError(EXIT_INPUT, f"cannot parse matrix {text!r}: {exc}") from None
    return io.parse_op(stripped)


def verification_report(spec: GameSpec, pair: StrategyPair, grid: int, eps: float) -> dict:
    rep = verify_strategy(spec, pair, grid_size=grid, eps_win=eps)
    payoffs = [quantum_payoff(evolve_branch(spec, pair, k), spec.initial) for k in range(spec.n_ops)]
    return {
        "verdict": rep.verdict,
        "worst_fidelity": rep.worst_fidelity,
        "branch_fidelities": rep.branch_fidelities,
        "grid_fidelities": rep.grid_fidelities,
        "eps_win": eps,
        "payoffs": [{"branch": k, "P": u_p, "Q": u_q} for k, (u_p, u_q) in enumerate(payoffs)],
        "bloch_trace": bloch_trace(spec, pair),
        "strategy": io.strategy_dict(pair),
    }


def _spec_summary(spec: GameSpec, data: dict) -> dict:
    return {"label": spec.label, "ops": data.get("ops"), "weights": list(spec.weights)}


def cmd_verify(args) -> tuple[int, dict]:
    data, spec = _load_spec(args)
    pair, params = _strategy_from_args(args, spec)
    report = {"command": "verify", "spec": _spec_summary(spec, data), "params": params}
    report.update(verification_report(spec, pair, args.grid or DEFAULT_GRID, _eps_win()))
    return (EXIT_WIN if report["verdict"] == "win" else EXIT_LOSE), report


def _classification(data: dict) -> dict | None:
    typed = [io.parse_typed(x) for x in data.get("ops", [])]
    if any(t is None for t in typed):
        return None
    c = classify_multiple(typed)
    return {"kind": c.kind, "s": c.s, "ell": c.ell, "strategy_exists": c.strategy_exists}


def cmd_solve(args) -> tuple[int, dict]:
    data, spec = _load_spec(args)
    eps = _eps_win()
    report: dict = {"command": "solve", "spec": _spec_summary(spec, data)}
    if args.oracle:
        res = brute_force_oracle(spec, grid=args.grid or ORACLE_GRID, seed=args.seed)
        report.update(method="oracle", seed=args.seed, best_worst_fidelity=res.best_worst_fidelity,
                      evaluations=res.evaluations, strategy=io.strategy_dict(res.argmax))
        return (EXIT_WIN if res.best_worst_fidelity >= ORACLE_WIN else EXIT_LOSE), report

    if spec.n_ops > 2:
        cls = _classification(data)
        if cls is not None:
            report["classification"] = cls
        if not restoring_state_exists(spec.ops):
            raise CliError(EXIT_NO_STRATEGY, "no winning strategy: P's operations share no restoring state", report)
    method, pair, problem = synthesize(spec, args.c_sign, args.phi or 0.0, args.delta1, args.delta2,
                                       gamma=args.gamma, theta1=args.theta)
    report["params"] = _problem_params(method, problem)
    report.update(verification_report(spec, pair, args.grid or DEFAULT_GRID, eps))
    return (EXIT_WIN if report["verdict"] == "win" else EXIT_LOSE), report


def cmd_classify(args) -> tuple[int, dict]:
    data = io.load_spec_dict(_spec_source(args))
    cls = _classification(data)
    if cls is None:
        raise CliError(EXIT_INPUT, "classify needs flip(alpha)/nonflip(beta) operations (or sigma1, identity, sigma3)")
    spec = io.spec_from_dict(data)
    cls["restoring_state_exists"] = restoring_state_exists(spec.ops)
    report = {"command": "classify", "spec": _spec_summary(spec, data), "classification": cls}
    return (EXIT_NO_STRATEGY if cls["strategy_exists"] == NO_IN_GENERAL else EXIT_WIN), report


def _parse_q(text: str) -> MixedStrategyQ:
    try:
        values = [float(x) for x in text.split(",")]
    except ValueError:
        raise CliError(EXIT_INPUT, f"--q must be four comma-separated numbers, got {text!r}") from None
    if len(values) != 4:
        raise CliError(EXIT_INPUT, f"--q needs four probabilities, got {len(values)}")
    return MixedStrategyQ(*values)


def cmd_nash(args) -> tuple[int, dict]:
    p = MixedStrategyP.from_pn(args.pn)
    q = _parse_q(args.q)
    payoff = expected_payoff(p, q)
    eq = is_nash_equilibrium(p, q, n_deviations=args.deviations)
    report = {
        "command": "nash",
        "p": {"N": p.p_N, "F": p.p_F},
        "q": {"NN": q.q_NN, "NF": q.q_NF, "FN": q.q_FN, "FF": q.q_FF},
        "payoff_P": payoff,
        "payoff_Q": -payoff,
        "equilibrium": eq,
    }
    return EXIT_WIN, report


def _axis(points: int | None, flag: float | None, lo: float, hi: float, closed: bool) -> list[float]:
    if not points or points == 1:
        return [flag if flag is not None else lo]
    if points < 1:
        raise CliError(EXIT_INPUT, "grid sizes must be positive")
    return list(np.linspace(lo, hi, points, endpoint=closed))


def _sweep_points(args, rng: np.random.Generator):
    family = args.family
    if args.samples:
        for _ in range(args.samples):
            yield {
                "theta": rng.choice([-1, 1]) * rng.uniform(*THETA_RANGE),
                "phi": rng.uniform(*PHI_RANGE),
                "alpha": rng.uniform(*PHASE_RANGE),
                "beta": rng.uniform(*PHASE_RANGE),
                "delta1": rng.uniform(*PHI_RANGE),
                "delta2": rng.uniform(*PHI_RANGE),
                "a_sign": int(rng.choice([-1, 1])),
                "b_sign": int(rng.choice([-1, 1])),
            }
        return
    thetas = _axis(args.theta_grid, args.theta if args.theta is not None else math.pi, *THETA_RANGE, True)
    phis = _axis(args.phi_grid, args.phi or 0.0, *PHI_RANGE, False)
    alphas = _axis(args.alpha_grid, args.alpha or 0.0, *PHASE_RANGE, False) if family == "phase" else [args.alpha or 0.0]
    betas = _axis(args.beta_grid, args.beta or 0.0, *PHASE_RANGE, False) if family == "phase" else [args.beta or 0.0]
    for theta in thetas:
        for phi in phis:
            for alpha in alphas:
                for beta in betas:
                    yield {"theta": float(theta), "phi": float(phi), "alpha": float(alpha), "beta": float(beta),
                           "delta1": args.delta1, "delta2": args.delta2, "a_sign": args.a_sign, "b_sign": args.b_sign}


def _sweep_two_unitary(args, rng: np.random.Generator, eps: float, grid: int):
    for _ in range(max(1, args.samples or 1)):
        spec = GameSpec.uniform([random_unitary(rng), random_unitary(rng)])
        _, pair, _ = synthesize(spec, args.c_sign, args.phi or 0.0, args.delta1, args.delta2)
        yield {"ops": [io.encode_matrix(op) for op in spec.ops]}, verify_strategy(spec, pair, grid, eps)


def cmd_sweep(args) -> tuple[int, dict]:
    if args.family is None:
        raise CliError(EXIT_INPUT, "sweep needs --family")
    eps, grid = _eps_win(), args.grid or DEFAULT_GRID
    rng = np.random.default_rng(args.seed)
    if args.family == "two-unitary":
        results = list(_sweep_two_unitary(args, rng, eps, grid))
        label = "random two-unitary adversaries"
    else:
        if args.family != "phase":
            _, base_spec = _load_spec(args)
        results = []
        for point in _sweep_points(args, rng):
            ns = argparse.Namespace(**{**vars(args), **point})
            spec = phase_variable_spec(point["alpha"], point["beta"]) if args.family == "phase" else base_spec
            pair, _ = family_pair(args.family, ns, spec)
            results.append((point, verify_strategy(spec, pair, grid, eps)))
        label = "phase-variable" if args.family == "phase" else base_spec.label
    if not results:
        raise CliError(EXIT_INPUT, "empty sweep")
    worst_point, worst = min(results, key=lambda r: r[1].worst_fidelity)
    wins = sum(r.won for _, r in results)
    report = {
        "command": "sweep",
        "family": args.family,
        "spec": label,
        "seed": args.seed,
        "points": len(results),
        "wins": wins,
        "min_fidelity": worst.worst_fidelity,
        "worst_point": worst_point,
        "eps_win": eps,
    }
    return (EXIT_WIN if wins == len(results) else EXIT_LOSE), report


def cmd_oracle(args) -> tuple[int, dict]:
    data, spec = _load_spec(args)
    t0 = time.perf_counter()
    res = brute_force_oracle(spec, grid=args.grid or ORACLE_GRID, seed=args.seed)
    report = {
        "command": "oracle",
        "spec": _spec_summary(spec, data),
        "seed": args.seed,
        "grid": args.grid or ORACLE_GRID,
        "best_worst_fidelity": res.best_worst_fidelity,
        "evaluations": res.evaluations,
        "seconds": time.perf_counter() - t0,
        "strategy": io.strategy_dict(res.argmax),
    }
    cls = _classification(data)
    if cls is not None:
        report["classification"] = cls
    return (EXIT_WIN if res.best_worst_fidelity >= ORACLE_WIN else EXIT_LOSE), report


COMMANDS: dict[str, Callable] = {
    "verify": cmd_verify,
    "solve": cmd_solve,
    "classify": cmd_classify,
    "nash": cmd_nash,
    "sweep": cmd_sweep,
    "oracle": cmd_oracle,
}


def _add_spec_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("spec_path", nargs="?", help="JSON spec file or meyer-spec / sigma13-spec / phase-spec")
    p.add_argument("--spec", help="same as the positional spec")


def _add_param_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", choices=FAMILIES)
    p.add_argument("--theta", type=_angle, help="rotation angle of Q's first move")
    p.add_argument("--phi", type=_angle, help="free z-rotation of Q's second move")
    p.add_argument("--alpha", type=_angle)
    p.add_argument("--beta", type=_angle)
    p.add_argument("--gamma", type=_angle, help="two-unitary gamma (default: the consistent branch)")
    p.add_argument("--delta1", type=_angle, default=0.0)
    p.add_argument("--delta2", type=_angle, default=0.0)
    p.add_argument("--a-sign", type=_sign, default=1)
    p.add_argument("--b-sign", type=_sign, default=1)
    p.add_argument("--c-sign", type=_sign, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pennyflip", description="Quantum penny-flip strategy tool")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the JSON report here as well as to stdout")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--grid", type=int, help="p-grid size (verify) or angular grid (oracle)")

    v = sub.add_parser("verify", parents=[common], help="verify a strategy pair")
    _add_spec_args(v)
    _add_param_args(v)
    v.add_argument("--u1", help="preset name or JSON matrix")
    v.add_argument("--u2", help="preset name or JSON matrix")
    v.add_argument("--strategy-file", help="report whose strategy matrices are re-verified")

    s = sub.add_parser("solve", parents=[common], help="synthesize a winning strategy")
    _add_spec_args(s)
    _add_param_args(s)
    s.add_argument("--oracle", action="store_true", help="use the brute-force search instead")

    c = sub.add_parser("classify", parents=[common], help="classify a multi-operation adversary")
    _add_spec_args(c)

    n = sub.add_parser("nash", parents=[common], help="classical mixed-strategy payoff and equilibrium check")
    n.add_argument("--pn", type=float, required=True, help="probability that P does not flip")
    n.add_argument("--q", required=True, help="q_NN,q_NF,q_FN,q_FF")
    n.add_argument("--deviations", type=int, default=101)

    w = sub.add_parser("sweep", parents=[common], help="verify a family over a parameter grid")
    _add_spec_args(w)
    _add_param_args(w)
    w.add_argument("--theta-grid", type=int)
    w.add_argument("--phi-grid", type=int)
    w.add_argument("--alpha-grid", type=int)
    w.add_argument("--beta-grid", type=int)
    w.add_argument("--samples", type=int, default=0, help="random points (seeded) instead of a grid")

    o = sub.add_parser("oracle", parents=[common], help="brute-force best guaranteed fidelity")
    _add_spec_args(o)
    o.add_argument("--alpha", type=_angle)
    o.add_argument("--beta", type=_angle)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        code, report = COMMANDS[args.command](args)
    except CliError as exc:
        print(f"pennyflip: {exc}", file=sys.stderr)
        if exc.report is not None:
            print(io.dump_report({**exc.report, "error": str(exc)}, getattr(args, "out", None)))
        return exc.code
    except (SingularProblemError, DegenerateCompositionError) as exc:
        print(f"pennyflip: singular problem: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    except (DomainError, ParameterInconsistencyError, ValueError) as exc:
        print(f"pennyflip: invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(io.dump_report(report, args.out))
    log.debug("exit %d", code)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
