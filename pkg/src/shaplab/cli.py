"""Command-line experiment runner.

Subcommands: ``quantum``, ``classical``, ``verify``, ``rectangle`` and ``sweep``.
Every stochastic trial ``k`` draws from ``trial_rng(seed, k, stream)``, and
records are emitted in trial order, so output bytes do not depend on
``--threads``.  Options can also come from a JSON file given with
``--config``; flags on the command line win.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional, Sequence

from . import __version__
from .analysis.rectangles import RectanglePair, rectangle_bias, rectangle_entropy_condition
from .analysis.suites import SUITES, suite_trial
from .classical import DEFAULT_C, DEFAULT_THETA, SamplingConfig, sample_budget, sampling_trial
from .errors import DomainError, IntegrityError, ResourceError, ShapError
from .problem import DistributionSpec, PromiseClass, ShapInstance, classify, sample
from .quantum import (
    DEFAULT_CAP,
    DEFAULT_TAU,
    ProtocolConfig,
    cost_report,
    exact_answer_prob,
    format_trace,
    register_qubits,
    run_protocol,
)
from .reports import RunReport, emit_report, wilson_interval
from .seeding import make_rng, trial_rng

__all__ = ["ExperimentConfig", "run", "main", "build_parser"]

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3
EXIT_INTEGRITY = 4

DISTS = ("mu", "mu0", "mu1", "promise")
PROMISE_TRIES = 10_000

QUANTUM_COLUMNS = ["trial", "n", "t", "tau", "true_class", "answer", "p_one", "error"]
CLASSICAL_COLUMNS = ["trial", "n", "k", "theta", "true_class", "answer", "min_west", "cost_bits", "error"]
VERIFY_COLUMNS = ["name", "lhs", "rhs", "slack", "holds", "params"]
RECTANGLE_COLUMNS = [
    "set", "n", "size_a", "size_b", "mu0_mass", "mu1_mass", "mu1_mass_exact", "ratio",
    "entropy_condition_a", "entropy_condition_b",
]
SWEEP_COLUMNS = [
    "n", "t", "tau", "qubits", "c", "k", "classical_bits", "classical_bits_uncapped",
    "trials", "quantum_error", "classical_error",
]


@dataclass
class ExperimentConfig:
    command: str
    n: Optional[int] = None
    ns: list[int] = field(default_factory=list)
    t: int = 1
    tau: float = DEFAULT_TAU
    eps: float = 0.1
    k: Optional[int] = None
    c: float = DEFAULT_C
    theta: float = DEFAULT_THETA
    trials: int = 100
    seed: Optional[int] = None
    dist: str = "mu"
    exact: bool = False
    suite: str = "all"
    n_max: int = 10
    sets: list[str] = field(default_factory=list)
    cap: int = DEFAULT_CAP
    threads: int = 1
    timing: bool = False
    trace: Optional[str] = None

    # fields that never influence the emitted records
    _NOT_ECHOED = ("threads", "timing", "trace")

    def validate(self) -> None:
        if self.trials < 0:
            raise DomainError("--trials must be non-negative")
        if self.threads < 1:
            raise DomainError("--threads must be at least 1")
        if self.dist not in DISTS:
            raise DomainError(f"--dist must be one of {DISTS}")
        if self.command in ("quantum", "classical") and self.n is None:
            raise DomainError("--n is required")
        if self.command == "sweep" and not self.ns:
            raise DomainError("--n is required")
        stochastic = self.command in ("quantum", "classical", "verify") or (
            self.command == "sweep" and self.trials > 0
        )
        if stochastic and self.seed is None:
            raise DomainError("--seed is required for stochastic runs")
        if self.command == "rectangle" and not self.sets:
            raise DomainError("--sets is required")
        if self.command == "verify" and self.suite != "all" and self.suite not in SUITES:
            raise DomainError(f"--suite must be 'all' or one of {sorted(SUITES)}")

    def echo(self) -> dict:
        d = asdict(self)
        for key in self._NOT_ECHOED:
            d.pop(key)
        return d


def _pool_map(fn: Callable[[int], object], count: int, threads: int) -> list:
    if threads == 1 or count <= 1:
        return [fn(k) for k in range(count)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, range(count)))


def _draw_instance(n: int, dist: str, rng) -> ShapInstance:
    if dist != "promise":
        return sample(DistributionSpec(dist, n), rng)
    spec = DistributionSpec("mu", n)
    for _ in range(PROMISE_TRIES):
        inst = sample(spec, rng)
        if classify(inst) is not PromiseClass.UNDEFINED:
            return inst
    raise DomainError(f"no defined instance within {PROMISE_TRIES} draws at n={n}")


def _error(cls: PromiseClass, answer: Optional[int], p_one: Optional[float]) -> Optional[float]:
    if cls is PromiseClass.UNDEFINED:
        return None
    want = cls.value
    if p_one is not None:
        return 1.0 - p_one if want == 1 else p_one
    return float(answer != want)


def _error_aggregates(records: list[dict], exact: bool = False) -> dict:
    defined = [r for r in records if r["error"] is not None]
    errs = sum(r["error"] for r in defined)
    total = len(defined)
    agg = {
        "trials": len(records),
        "defined": total,
        "undefined": len(records) - total,
        "errors": errs,
        "error_rate": errs / total if total else None,
    }
    if exact:
        agg["ci_low"] = agg["ci_high"] = None
    else:
        lo, hi = wilson_interval(int(errs), total)
        agg["ci_low"], agg["ci_high"] = lo, hi
    return agg


# --- subcommands ---------------------------------------------------------------------------


def _run_quantum(cfg: ExperimentConfig) -> RunReport:
    pcfg = ProtocolConfig(cfg.n, t=cfg.t, tau=cfg.tau, eps_target=cfg.eps, cap=cfg.cap)
    pcfg.check_cap()
    traces: dict[int, str] = {}

    def trial(k: int) -> dict:
        inst = _draw_instance(cfg.n, cfg.dist, trial_rng(cfg.seed, k, 0))
        cls = classify(inst)
        if cfg.exact:
            p_one = exact_answer_prob(inst, pcfg)
            answer = None
        else:
            res = run_protocol(inst, pcfg, trial_rng(cfg.seed, k, 1))
            answer, p_one = res.answer, None
            if cfg.trace:
                traces[k] = format_trace(res.trace)
        return {
            "trial": k, "n": cfg.n, "t": cfg.t, "tau": cfg.tau, "true_class": str(cls),
            "answer": answer, "p_one": p_one, "error": _error(cls, answer, p_one),
        }

    records = _pool_map(trial, cfg.trials, cfg.threads)
    if cfg.trace:
        with open(cfg.trace, "w", encoding="utf-8") as fh:
            for k in sorted(traces):
                fh.write(f"trial={k}\n{traces[k]}")
    agg = _error_aggregates(records, cfg.exact)
    agg["meets_eps"] = agg["error_rate"] is not None and agg["error_rate"] <= cfg.eps
    cost = cost_report(pcfg)
    costs = {
        "qubits_sent": cost.qubits_sent,
        "entanglement_bits": cost.entanglement_bits,
        "register_qubits": register_qubits(cfg.n),
        "threshold": pcfg.threshold,
        "eps_round": pcfg.eps_round,
    }
    return RunReport("quantum", cfg.echo(), QUANTUM_COLUMNS, records, agg, costs)


def _run_classical(cfg: ExperimentConfig) -> RunReport:
    scfg = SamplingConfig(cfg.n, k=cfg.k, theta=cfg.theta, c=cfg.c)

    def trial(k: int) -> dict:
        inst = _draw_instance(cfg.n, cfg.dist, trial_rng(cfg.seed, k, 0))
        cls = classify(inst)
        res = sampling_trial(inst, scfg, trial_rng(cfg.seed, k, 1))
        return {
            "trial": k, "n": cfg.n, "k": scfg.samples, "theta": cfg.theta, "true_class": str(cls),
            "answer": res.answer, "min_west": res.min_estimate, "cost_bits": scfg.cost_bits,
            "error": _error(cls, res.answer, None),
        }

    records = _pool_map(trial, cfg.trials, cfg.threads)
    agg = _error_aggregates(records)
    agg["meets_eps"] = agg["error_rate"] is not None and agg["error_rate"] <= cfg.eps
    return RunReport("classical", cfg.echo(), CLASSICAL_COLUMNS, records, agg, {"cost_bits": scfg.cost_bits})


def _run_verify(cfg: ExperimentConfig) -> RunReport:
    names = list(SUITES) if cfg.suite == "all" else [cfg.suite]
    jobs = [(name, k) for name in names for k in range(cfg.trials)]
    batches = _pool_map(lambda j: suite_trial(jobs[j][0], cfg.seed, jobs[j][1], cfg.n_max), len(jobs), cfg.threads)
    records = []
    for batch in batches:
        for rep in batch:
            records.append(json.loads(rep.to_json()))
    failed = sum(1 for r in records if not r["holds"])
    agg = {"reports": len(records), "violations": failed, "all_hold": failed == 0}
    agg["min_slack"] = min((r["slack"] for r in records if r["slack"] is not None), default=None)
    return RunReport("verify", cfg.echo(), VERIFY_COLUMNS, records, agg, {})


def read_sets(path: str) -> list[list[ShapInstance]]:
    """Instance lines grouped into sets; a line ``---`` starts a new set, ``#`` lines are comments."""
    groups: list[list[ShapInstance]] = [[]]
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if line == "---":
                groups.append([])
                continue
            groups[-1].append(ShapInstance.from_text(line))
    return [g for g in groups if g]


def _run_rectangle(cfg: ExperimentConfig) -> RunReport:
    records = []
    idx = 0
    for path in cfg.sets:
        for group in read_sets(path):
            rect = RectanglePair.from_instances(group)
            n = rect.n
            if n <= 6:
                bias = rectangle_bias(rect)
                mu0, mu1 = float(bias.mu0_mass), float(bias.mu1_mass)
                exact = str(bias.mu1_mass)
                ratio = float(bias.ratio) if bias.ratio is not None else None
            else:
                mu0 = mu1 = exact = ratio = None
            records.append({
                "set": idx, "n": n, "size_a": int(rect.A.size), "size_b": int(rect.B.size),
                "mu0_mass": mu0, "mu1_mass": mu1, "mu1_mass_exact": exact, "ratio": ratio,
                "entropy_condition_a": rectangle_entropy_condition(rect.A, n),
                "entropy_condition_b": rectangle_entropy_condition(rect.B, n),
            })
            idx += 1
    return RunReport("rectangle", cfg.echo(), RECTANGLE_COLUMNS, records, {"sets": len(records)}, {})


def _run_sweep(cfg: ExperimentConfig) -> RunReport:
    records = []
    skipped = []
    for n in cfg.ns:
        qubits = 4 * cfg.t * register_qubits(n)
        uncapped = math.ceil(cfg.c * math.sqrt(n * math.log(n))) if n > 1 else 1
        k = cfg.k if cfg.k is not None else sample_budget(n, cfg.c)
        q_err = c_err = None
        if cfg.trials > 0:
            pcfg = ProtocolConfig(n, t=cfg.t, tau=cfg.tau, eps_target=cfg.eps, cap=cfg.cap)
            scfg = SamplingConfig(n, k=k, theta=cfg.theta, c=cfg.c)
            within_cap = pcfg.dim <= pcfg.cap
            if not within_cap:
                skipped.append(n)

            def trial(j: int, n=n, pcfg=pcfg, scfg=scfg, within_cap=within_cap):
                inst = _draw_instance(n, cfg.dist, make_rng(cfg.seed, n, j, 0))
                cls = classify(inst)
                qe = _error(cls, None, exact_answer_prob(inst, pcfg)) if within_cap else None
                ce = _error(cls, sampling_trial(inst, scfg, make_rng(cfg.seed, n, j, 1)).answer, None)
                return qe, ce

            rows = _pool_map(trial, cfg.trials, cfg.threads)
            qs = [q for q, _ in rows if q is not None]
            cs = [c for _, c in rows if c is not None]
            q_err = sum(qs) / len(qs) if qs else None
            c_err = sum(cs) / len(cs) if cs else None
        records.append({
            "n": n, "t": cfg.t, "tau": cfg.tau, "qubits": qubits, "c": cfg.c, "k": k,
            "classical_bits": 2 * k, "classical_bits_uncapped": 2 * uncapped,
            "trials": cfg.trials, "quantum_error": q_err, "classical_error": c_err,
        })
    return RunReport("sweep", cfg.echo(), SWEEP_COLUMNS, records, {"rows": len(records), "over_cap": skipped}, {})


RUNNERS = {
    "quantum": _run_quantum,
    "classical": _run_classical,
    "verify": _run_verify,
    "rectangle": _run_rectangle,
    "sweep": _run_sweep,
}


def run(cfg: ExperimentConfig) -> RunReport:
    cfg.validate()
    start = time.perf_counter()
    report = RUNNERS[cfg.command](cfg)
    if cfg.timing:
        report.wall_clock = time.perf_counter() - start
    return report


def exit_status(report: RunReport) -> int:
    if report.kind == "verify" and not report.aggregates["all_hold"]:
        return EXIT_FAIL
    return EXIT_OK


# --- argument parsing --------------------------------------------------------------------


def _n_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in str(text).split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int)
    common.add_argument("--trials", type=int, default=100)
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--config", help="JSON file of option values; flags override it")
    common.add_argument("--timing", action="store_true", help="record wall-clock time")
    common.add_argument("--cap", type=int, default=DEFAULT_CAP, help="largest state dimension")
    common.add_argument("--dist", choices=DISTS, default="mu", help="instance distribution")

    parser = argparse.ArgumentParser(prog="shaplab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    q = sub.add_parser("quantum", parents=[common], help="swap-test protocol trials")
    q.add_argument("--n", type=int)
    q.add_argument("--t", type=int, default=1)
    q.add_argument("--tau", type=float, default=DEFAULT_TAU)
    q.add_argument("--eps", type=float, default=0.1)
    q.add_argument("--exact", action="store_true", help="exact answer probabilities instead of sampling")
    q.add_argument("--trace", help="write per-round traces to this file")

    c = sub.add_parser("classical", parents=[common], help="sampling protocol trials")
    c.add_argument("--n", type=int)
    group = c.add_mutually_exclusive_group()
    group.add_argument("--k", type=int)
    group.add_argument("--c", type=float, default=DEFAULT_C)
    c.add_argument("--theta", type=float, default=DEFAULT_THETA)
    c.add_argument("--eps", type=float, default=0.1)

    v = sub.add_parser("verify", parents=[common], help="inequality suites")
    v.add_argument("--suite", default="all", help=f"'all' or one of {', '.join(SUITES)}")
    v.add_argument("--n-max", dest="n_max", type=int, default=10)

    r = sub.add_parser("rectangle", parents=[common], help="bias and entropy condition of given sets")
    r.add_argument("--sets", action="append", default=[], help="instance file; repeatable")

    s = sub.add_parser("sweep", parents=[common], help="cost and error versus n")
    s.add_argument("--n", type=_n_list)
    s.add_argument("--t", type=int, default=1)
    s.add_argument("--tau", type=float, default=DEFAULT_TAU)
    s.add_argument("--eps", type=float, default=0.1)
    s.add_argument("--k", type=int)
    s.add_argument("--c", type=float, default=DEFAULT_C)
    s.add_argument("--theta", type=float, default=DEFAULT_THETA)
    s.set_defaults(trials=0)

    parser._subparser_map = sub.choices  # used to apply --config defaults
    return parser


def _parse(argv: Optional[Sequence[str]]) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            values = json.load(fh)
        if not isinstance(values, dict):
            parser.error("--config must hold a JSON object")
        subparser = parser._subparser_map[args.command]
        known = {a.dest for a in subparser._actions}
        unknown = sorted(set(values) - known)
        if unknown:
            parser.error(f"unknown keys in --config: {unknown}")
        if args.command == "sweep" and "n" in values and not isinstance(values["n"], list):
            values["n"] = _n_list(values["n"])
        subparser.set_defaults(**values)
        args = parser.parse_args(argv)
    return args


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    fields = {
        k: getattr(args, k)
        for k in ("t", "tau", "eps", "k", "c", "theta", "trials", "seed", "dist", "exact", "suite",
                  "n_max", "sets", "cap", "threads", "timing", "trace")
        if hasattr(args, k)
    }
    cfg = ExperimentConfig(command=args.command, **fields)
    if args.command == "sweep":
        cfg.ns = list(args.n or [])
    elif hasattr(args, "n"):
        cfg.n = args.n
    return cfg


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _parse(argv)
    try:
        cfg = config_from_args(args)
        report = run(cfg)
        emit_report(report, args.format, args.out if args.out else sys.stdout)
    except ResourceError as exc:
        print(f"shaplab: resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except IntegrityError as exc:
        print(f"shaplab: numerical integrity failure: {exc}", file=sys.stderr)
        return EXIT_INTEGRITY
    except (DomainError, ShapError) as exc:
        print(f"shaplab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"shaplab: {exc}", file=sys.stderr)
        return EXIT_FAIL
    return exit_status(report)


if __name__ == "__main__":
    sys.exit(main())
