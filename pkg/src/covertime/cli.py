"""Command-line driver: ``covertime <subcommand> ...``.

Exit codes: 0 success, 1 a gating check failed, 2 bad usage or input,
3 a walk budget or linear solve failed.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, field
from typing import Sequence

from . import fixtures, pathkit, verify
from .errors import (
    BudgetExceeded,
    CoverTimeError,
    RejectionBudgetExceeded,
    SolverFailure,
    UsageError,
)
from .gff import build_gff, estimate_M
from .network import ElectricalNetwork, read_graph
from .report import VerificationReport, write_atomic
from .rng import generator
from .walk import CoverAll, FixedJumpCount, InverseLocalTime, simulate_ctrw, write_trace_csv

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RUNTIME = 0, 1, 2, 3

VERIFY_EXPERIMENTS = ("ray-knight", "domination", "projection", "conditioned-path", "first-rk", "tails", "sandwich")


@dataclass
class RunConfig:
    command: str
    experiment: str | None = None
    graph: str | None = None
    fixture: str | None = None
    trials: int | None = None
    seed: int = 0
    workers: int = 1
    alpha: float = 0.01
    out: str | None = None
    format: str | None = None
    t: float | None = None
    lambdas: list[float] | None = None
    N: list[int] | None = None
    r: float = 1.0
    eps: list[float] | None = None
    pair: list[str] | None = None
    family: list[str] | None = None
    rule: str = "cover"
    jumps: int | None = None
    trace: str | None = None
    invocation: list[str] = field(default_factory=list)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _names(text: str) -> list[str]:
    return [x.strip() for x in text.split(",") if x.strip()]


def _common(p: argparse.ArgumentParser, *, graph: bool = True) -> None:
    if graph:
        g = p.add_mutually_exclusive_group()
        g.add_argument("--graph", help="edge-list file")
        g.add_argument("--fixture", help="built-in network, e.g. triangle, cycle4, k16, torus8")
    p.add_argument("--trials", type=int, help="Monte Carlo trials")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--alpha", type=float, default=0.01)
    p.add_argument("--out", help="report path (stdout when omitted)")
    p.add_argument("--format", choices=("json", "csv"), help="report format (default json; printed when --out is omitted)")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="covertime", description="Cover-time, local-time and free-field experiments on electrical networks.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("resist", help="effective resistances")
    _common(s)
    s.add_argument("--pair", nargs=2, metavar=("X", "Y"))

    s = sub.add_parser("estimate-m", help="Monte Carlo estimate of E max of the free field")
    _common(s)

    s = sub.add_parser("cover", help="cover-time concentration around |E| M^2")
    _common(s)
    s.add_argument("--lambda", dest="lambdas", type=_floats, help="comma-separated lambda grid")

    s = sub.add_parser("hitting", help="hitting/cover times and the commute identity")
    _common(s)
    s.add_argument("--pair", nargs=2, metavar=("X", "Y"))

    s = sub.add_parser("verify", help="statistical verification experiments")
    vs = s.add_subparsers(dest="experiment", required=True, parser_class=_Parser)
    for name in VERIFY_EXPERIMENTS:
        e = vs.add_parser(name)
        _common(e, graph=name not in ("conditioned-path", "first-rk", "sandwich"))
        if name in ("ray-knight", "domination", "projection"):
            e.add_argument("--t", type=float)
        if name in ("projection", "conditioned-path", "first-rk"):
            e.add_argument("--N", type=_ints, help="refinement level(s) or path length")
        if name == "conditioned-path":
            e.add_argument("--r", type=float, default=1.0)
        if name == "tails":
            e.add_argument("--t", type=float)
            e.add_argument("--eps", type=_floats, help="disk-avoidance epsilons")
            e.add_argument("--lambda", dest="lambdas", type=_floats)
        if name == "sandwich":
            e.add_argument("--family", type=_names, help="comma-separated fixtures, smallest first")

    s = sub.add_parser("simulate", help="one walk trajectory")
    _common(s)
    s.add_argument("--rule", choices=("cover", "inverse-local-time", "jumps"), default="cover")
    s.add_argument("--t", type=float)
    s.add_argument("--jumps", type=int)
    s.add_argument("--trace", help="write the sojourn trace to this CSV file")
    return p


def parse_args(argv: Sequence[str]) -> RunConfig:
    ns = build_parser().parse_args(list(argv))
    cfg = RunConfig(command=ns.command, invocation=["covertime", *argv])
    for key in vars(ns):
        if key == "N":
            cfg.N = ns.N
        elif hasattr(cfg, key):
            setattr(cfg, key, getattr(ns, key))
    if cfg.trials is not None and cfg.trials < 1:
        raise UsageError("--trials must be positive")
    if cfg.workers < 1:
        raise UsageError("--workers must be at least 1")
    if not 0 < cfg.alpha < 1:
        raise UsageError("--alpha must lie in (0, 1)")
    if cfg.t is not None and not cfg.t > 0:
        raise UsageError("--t must be positive")
    if cfg.command == "simulate":
        if cfg.rule == "inverse-local-time" and cfg.t is None:
            raise UsageError("--rule inverse-local-time needs --t")
        if cfg.rule == "jumps" and (cfg.jumps is None or cfg.jumps < 0):
            raise UsageError("--rule jumps needs a non-negative --jumps")
    return cfg


def _network(cfg: RunConfig, default: str = "triangle") -> ElectricalNetwork:
    if cfg.graph:
        return read_graph(cfg.graph)
    try:
        return fixtures.fixture(cfg.fixture or default)
    except KeyError as exc:
        raise UsageError(str(exc))


def _trials(cfg: RunConfig, default: int) -> int:
    return default if cfg.trials is None else cfg.trials


def _query(cfg, net, params) -> VerificationReport:
    return VerificationReport(cfg.command, net.describe(), params, cfg.seed, cfg.workers)


def _run_resist(cfg: RunConfig):
    net = _network(cfg)
    rep = _query(cfg, net, {"pair": cfg.pair})
    if cfg.pair:
        x, y = cfg.pair
        R = float(net.resistance_matrix[net.idx(x), net.idx(y)])
        rep.diagnostics["resistance"] = R
        text = repr(R)
    else:
        rep.diagnostics["resistance_matrix"] = net.resistance_matrix
        rep.diagnostics["vertex_ids"] = list(net.ids)
        rep.diagnostics["max_resistance"] = net.max_resistance
        text = f"max R_eff = {net.max_resistance!r}"
    return rep, text


def _run_estimate_m(cfg: RunConfig):
    net = _network(cfg)
    n = _trials(cfg, 100_000)
    rep = _query(cfg, net, {"trials": n})
    est = estimate_M(build_gff(net), n, cfg.seed, workers=cfg.workers)
    rep.diagnostics.update({"M_hat": est.M_hat, "std_error": est.std_error, "R": est.R,
                            "sigma2_max": est.sigma2_max})
    return rep, f"M_hat = {est.M_hat:.6g} +/- {est.std_error:.2g}"


def _run_simulate(cfg: RunConfig):
    net = _network(cfg)
    rule = {"cover": lambda: CoverAll(), "inverse-local-time": lambda: InverseLocalTime(cfg.t),
            "jumps": lambda: FixedJumpCount(cfg.jumps)}[cfg.rule]()
    rep = _query(cfg, net, {"rule": cfg.rule, "t": cfg.t, "jumps": cfg.jumps})
    f = simulate_ctrw(net, net.base, rule, generator(cfg.seed), record_trace=cfg.trace is not None)
    if cfg.trace:
        write_trace_csv(f, cfg.trace, net.ids)
    rep.diagnostics.update({"stop_time": f.stop_time, "stop_reason": f.stop_reason, "n_jumps": f.n_jumps,
                            "final_vertex": net.ids[f.final_vertex], "local_time": f.local_time,
                            "visits": f.visits, "first_visit": f.first_visit})
    return rep, f"stopped ({f.stop_reason}) at time {f.stop_time:.6g} after {f.n_jumps} jumps"


def _run_experiment(cfg: RunConfig) -> VerificationReport:
    kw = {"seed": cfg.seed, "workers": cfg.workers}
    if cfg.command == "cover":
        return verify.verify_cover_concentration(_network(cfg, "k16"), cfg.lambdas or (1.0, 2.0, 4.0, 8.0),
                                                 _trials(cfg, 20_000), **kw)
    if cfg.command == "hitting":
        return verify.verify_commute(_network(cfg), _trials(cfg, 20_000), pair=cfg.pair, **kw)
    e = cfg.experiment
    if e == "ray-knight":
        return verify.verify_ray_knight(_network(cfg), cfg.t, _trials(cfg, 100_000), cfg.alpha, **kw)
    if e == "domination":
        return verify.verify_domination(_network(cfg), cfg.t, _trials(cfg, 100_000), cfg.alpha, **kw)
    if e == "projection":
        N = (cfg.N or [4])[0]
        return verify.verify_projection(_network(cfg), N, cfg.t or 1.0, _trials(cfg, 100_000), cfg.alpha, **kw)
    if e == "conditioned-path":
        N = (cfg.N or [2])[0]
        return verify.verify_conditioned_path(N, cfg.r, _trials(cfg, 100_000), cfg.alpha, **kw)
    if e == "first-rk":
        return verify.verify_first_ray_knight(pathkit.unit_path((cfg.N or [8])[0]), _trials(cfg, 100_000),
                                              cfg.alpha, **kw)
    if e == "tails":
        p = verify.TailParams(tau_network=_network(cfg))
        if cfg.trials is not None:
            p.exp_sum_trials, p.disk_paths, p.tau_trials = 10 * cfg.trials, cfg.trials, cfg.trials
        if cfg.t is not None:
            p.tau_t = cfg.t
        if cfg.eps is not None:
            lams = cfg.lambdas or [1e-6, 1e-30]
            p.disk_grid = {e_: lams for e_ in cfg.eps}
        elif cfg.lambdas is not None:
            p.tau_lambdas = cfg.lambdas
        return verify.verify_tail_lemmas(p, **kw)
    if e == "sandwich":
        names = cfg.family or ["k8", "k16", "k32", "k64"]
        try:
            nets = {name: fixtures.fixture(name) for name in names}
        except KeyError as exc:
            raise UsageError(str(exc))
        starts = {name: [net.base] for name, net in nets.items() if name.startswith("k")}
        return verify.verify_sandwich(nets, _trials(cfg, 2000), starts=starts, **kw)
    raise UsageError(f"unknown experiment {e!r}")


def run(cfg: RunConfig, stdout=None) -> int:
    stdout = stdout or sys.stdout
    if cfg.command == "resist":
        rep, text = _run_resist(cfg)
    elif cfg.command == "estimate-m":
        rep, text = _run_estimate_m(cfg)
    elif cfg.command == "simulate":
        rep, text = _run_simulate(cfg)
    else:
        rep = _run_experiment(cfg)
        text = "\n".join(rep.summary_lines())
    rep.invocation = cfg.invocation
    body = rep.to_csv() if cfg.format == "csv" else rep.to_json() + "\n"
    if cfg.out:
        write_atomic(cfg.out, body)
    if cfg.format and not cfg.out:
        stdout.write(body)
    else:
        print(text, file=stdout)
    return EXIT_OK if rep.passed else EXIT_FAIL


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        return run(parse_args(argv))
    except UsageError as exc:
        print(f"covertime: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (BudgetExceeded, RejectionBudgetExceeded, SolverFailure) as exc:
        print(f"covertime: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except (CoverTimeError, OSError, ValueError) as exc:
        print(f"covertime: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
