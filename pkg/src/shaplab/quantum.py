"""Exact state-vector simulation of the entangled simultaneous-message protocol.

Alice and Bob share two maximally entangled pairs, apply input-dependent phase
flips and forward everything to the referee.  The full state always lives in
``span{|k,k>|j,j>}``, so one repetition is stored as an ``n x n`` amplitude
array indexed by ``(k, j)``: ``k`` labels the first pair (phases from
``x1 ^ y1``), ``j`` the second (phases from ``x2 ^ y2``).

For shift ``i`` the referee's swap test is realised by the projectors
``(I +/- W_i) / 2`` with the involution

    W_i |k, j> = |j - i, k + i>       (indices mod n)

so that ``<psi|W_i|psi> = <A_2|B_1>**2`` on the initial product state, where
``<A_2|B_1> = 1 - 2 w_i / n``.  With ``t`` repetitions the referee accepts
round ``i`` when at least ``ceil(tau * t)`` of the per-repetition tests accept.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Optional, Sequence

import numpy as np

from . import _kernels
from .bits import check_shift
from .errors import DomainError, IntegrityError, ResourceError
from .problem import PromiseClass, ShapInstance, all_shift_weights, classify_weight, shift_xor_weight

__all__ = [
    "NORM_TOL",
    "PairedState",
    "JointState",
    "ProtocolConfig",
    "RoundRecord",
    "ProtocolRun",
    "RoundResult",
    "DisturbanceReport",
    "CostReport",
    "prepare_initial",
    "prepare_joint",
    "inner_product",
    "inner_product_closed_form",
    "inner_product_exact",
    "shift_swap",
    "swap_accept_prob",
    "accept_coefficients",
    "accept_projection",
    "measure_round",
    "run_protocol",
    "exact_answer_prob",
    "round_accept_probs_fresh",
    "disturbance_report",
    "cost_report",
    "register_qubits",
    "format_trace",
]

NORM_TOL = 1e-9
DEFAULT_CAP = 1 << 24
DEFAULT_TAU = 0.511
# branches below this probability are treated as impossible
ZERO_BRANCH = 1e-24


def _check_norm(amp: np.ndarray) -> None:
    nrm = float(np.vdot(amp, amp).real)
    if abs(nrm - 1.0) > NORM_TOL:
        raise IntegrityError(f"state norm drifted to {nrm!r}")


@dataclass(frozen=True)
class PairedState:
    """One repetition: amplitudes ``amp[k, j]`` on the compressed basis."""

    n: int
    amp: np.ndarray

    def __post_init__(self):
        if self.amp.shape != (self.n, self.n):
            raise DomainError(f"amplitude array must have shape ({self.n}, {self.n})")
        self.amp.setflags(write=False)

    def norm2(self) -> float:
        return float(np.vdot(self.amp, self.amp).real)


@dataclass(frozen=True)
class JointState:
    """``t`` repetitions; flat amplitudes in row-major order over ``(k_1, j_1, ..., k_t, j_t)``."""

    n: int
    t: int
    amp: np.ndarray

    def __post_init__(self):
        if self.amp.shape != (self.n ** (2 * self.t),):
            raise DomainError("joint amplitude vector has the wrong dimension")
        self.amp.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.amp.shape[0]

    def norm2(self) -> float:
        return float(np.vdot(self.amp, self.amp).real)


@dataclass(frozen=True)
class ProtocolConfig:
    """Parameters of the amplified protocol.

    ``tau`` is the fraction of the ``t`` parallel swap tests that must accept for
    a round to accept.  ``eps_target`` is the overall error the analytic bound
    is asked to meet; ``eps_prime`` defaults to ``eps_target**2 / (16 n**4)``.
    """

    n: int
    t: int = 1
    tau: float = DEFAULT_TAU
    eps_target: float = 0.1
    eps_prime: Optional[float] = None
    shift_order: Optional[tuple[int, ...]] = None
    cap: int = DEFAULT_CAP

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("n must be positive")
        if self.t < 1:
            raise DomainError("t must be at least 1")
        if not 0.5 < self.tau < 1.0:
            raise DomainError("tau must lie strictly between 1/2 and 1")
        if not 0.0 < self.eps_target < 1.0:
            raise DomainError("eps_target must lie in (0, 1)")
        if self.shift_order is not None:
            order = tuple(int(i) for i in self.shift_order)
            if sorted(order) != list(range(self.n)):
                raise DomainError("shift_order must be a permutation of 0..n-1")
            object.__setattr__(self, "shift_order", order)

    @property
    def order(self) -> tuple[int, ...]:
        return self.shift_order if self.shift_order is not None else tuple(range(self.n))

    @cached_property
    def threshold(self) -> int:
        """Minimum number of accepting repetitions, ``ceil(tau * t)`` computed exactly."""
        return math.ceil(Fraction(repr(self.tau)) * self.t)

    @property
    def eps_round(self) -> float:
        if self.eps_prime is not None:
            return self.eps_prime
        return self.eps_target**2 / (16 * self.n**4)

    @property
    def dim(self) -> int:
        return self.n ** (2 * self.t)

    def check_cap(self) -> None:
        if self.dim > self.cap:
            raise ResourceError(f"state dimension n^(2t) = {self.dim} exceeds cap {self.cap}")


# --- states -------------------------------------------------------------------------


def _phase_vectors(inst: ShapInstance) -> tuple[np.ndarray, np.ndarray]:
    return inst.shift_difference().signs(), inst.aligned_difference().signs()


def prepare_initial(inst: ShapInstance) -> PairedState:
    a, b = _phase_vectors(inst)
    amp = np.outer(a, b).astype(np.complex128) / inst.n
    return PairedState(inst.n, amp)


def prepare_joint(inst: ShapInstance, t: int, cap: int = DEFAULT_CAP) -> JointState:
    n = inst.n
    if n ** (2 * t) > cap:
        raise ResourceError(f"state dimension n^(2t) = {n ** (2 * t)} exceeds cap {cap}")
    single = prepare_initial(inst).amp.reshape(-1)
    amp = single
    for _ in range(t - 1):
        amp = np.kron(amp, single)
    return JointState(n, t, np.ascontiguousarray(amp))


# --- overlaps -----------------------------------------------------------------------


def inner_product(inst: ShapInstance, i: int) -> float:
    """``<A_2|B_1>`` summed from amplitudes after the referee's register permutation."""
    n = inst.n
    check_shift(i, n)
    a, b = _phase_vectors(inst)
    a2 = np.roll(a, i) / math.sqrt(n)  # a2[k] = a[k - i]
    b1 = b / math.sqrt(n)
    return float(np.dot(a2, b1))


def inner_product_closed_form(inst: ShapInstance, i: int) -> float:
    return 1.0 - 2.0 * shift_xor_weight(inst, i) / inst.n


def inner_product_exact(inst: ShapInstance, i: int) -> Fraction:
    """Exact rational overlap from the integer sum of amplitude signs."""
    n = inst.n
    check_shift(i, n)
    a = 1 - 2 * inst.shift_difference().to_array().astype(np.int64)
    b = 1 - 2 * inst.aligned_difference().to_array().astype(np.int64)
    return Fraction(int(np.dot(np.roll(a, i), b)), n)


# --- swap tests ---------------------------------------------------------------------


def _swap_paired(amp: np.ndarray, i: int) -> np.ndarray:
    # (W psi)(a, b) = psi(b - i, a + i)
    out = amp.T
    if i:
        out = np.roll(np.roll(out, -i, axis=0), i, axis=1)
    return np.ascontiguousarray(out)


def shift_swap(state, i: int, rep: Optional[int] = None):
    """Apply ``W_i`` to a paired state, or to repetition ``rep`` of a joint state."""
    check_shift(i, state.n)
    if isinstance(state, PairedState):
        return PairedState(state.n, _swap_paired(np.asarray(state.amp), i))
    if rep is None or not 0 <= rep < state.t:
        raise DomainError("joint states need a repetition index")
    view = np.asarray(state.amp).reshape((state.n, state.n) * state.t)
    ax = 2 * rep
    moved = np.swapaxes(view, ax, ax + 1)
    if i:
        moved = np.roll(np.roll(moved, -i, axis=ax), i, axis=ax + 1)
    return JointState(state.n, state.t, np.ascontiguousarray(moved).reshape(-1))


def swap_accept_prob(state: PairedState, i: int) -> float:
    _check_norm(state.amp)
    moved = _swap_paired(np.asarray(state.amp), i)
    expect = float(np.vdot(state.amp, moved).real)
    return min(1.0, max(0.0, 0.5 * (1.0 + expect)))


@lru_cache(maxsize=None)
def _coefficients(t: int, m: int) -> tuple[float, ...]:
    # coefficient of W_T (|T| = c) in the projector onto ">= m accepts":
    # 2^-t * sum_{a >= m} sum_l (-1)^l C(c, l) C(t - c, t - a - l)
    out = []
    for c in range(t + 1):
        total = 0
        for a in range(m, t + 1):
            for l in range(0, c + 1):
                rest = t - a - l
                if 0 <= rest <= t - c:
                    total += (-1) ** l * math.comb(c, l) * math.comb(t - c, rest)
        out.append(Fraction(total, 2**t))
    return tuple(float(x) for x in out)


def accept_coefficients(t: int, m: int) -> np.ndarray:
    """Weights ``c_|T|`` with ``Pi = sum_T c_|T| W_T`` for the ``>= m of t`` accept rule."""
    if not 0 <= m <= t + 1:
        raise DomainError("threshold outside [0, t + 1]")
    return np.array(_coefficients(t, m))


def accept_projection(joint: JointState, i: int, m: int) -> np.ndarray:
    """Unnormalised ``Pi_i psi`` for the ``>= m`` accept rule."""
    check_shift(i, joint.n)
    coef = accept_coefficients(joint.t, m)
    return _kernels.project_accept(np.asarray(joint.amp), joint.n, joint.t, i, coef)


@dataclass(frozen=True)
class RoundResult:
    outcome: str  # "A" or "R"
    post: JointState
    p_accept: float


def _split(joint: JointState, i: int, m: int) -> tuple[np.ndarray, np.ndarray, float, float]:
    """Accept and reject components with their probabilities, each taken from its own norm."""
    psi = np.asarray(joint.amp)
    acc = accept_projection(joint, i, m)
    rej = psi - acc
    p = float(np.vdot(acc, acc).real)
    q = float(np.vdot(rej, rej).real)
    if abs(p + q - 1.0) > NORM_TOL:
        raise IntegrityError(f"outcome probabilities sum to {p + q!r}")
    return acc, rej, min(1.0, p), min(1.0, q)


def _renormalised(vec: np.ndarray, prob: float, joint: JointState) -> JointState:
    if prob <= ZERO_BRANCH:
        raise IntegrityError("projection onto an outcome of (numerically) zero probability")
    out = vec / math.sqrt(prob)
    _check_norm(out)
    return JointState(joint.n, joint.t, out)


def measure_round(
    joint: JointState, i: int, cfg: ProtocolConfig, rng: np.random.Generator
) -> RoundResult:
    cfg.check_cap()
    _check_norm(joint.amp)
    acc, rej, p, q = _split(joint, i, cfg.threshold)
    if q <= ZERO_BRANCH or (p > ZERO_BRANCH and rng.random() < p):
        return RoundResult("A", _renormalised(acc, p, joint), p)
    return RoundResult("R", _renormalised(rej, q, joint), p)


@dataclass(frozen=True)
class RoundRecord:
    round: int
    p_accept: float
    outcome: str

    def line(self) -> str:
        return f"round={self.round} p_accept={self.p_accept:.17g} outcome={self.outcome}"


@dataclass(frozen=True)
class ProtocolRun:
    answer: int
    trace: tuple[RoundRecord, ...]


def run_protocol(
    inst: ShapInstance,
    cfg: ProtocolConfig,
    rng: np.random.Generator,
    full_trace: bool = False,
) -> ProtocolRun:
    """Sample one execution; the answer is 1 iff some round accepts.

    Execution stops at the first accepting round unless ``full_trace`` is set,
    in which case the referee keeps measuring the remaining shifts.
    """
    if inst.n != cfg.n:
        raise DomainError("instance length does not match the configuration")
    cfg.check_cap()
    joint = prepare_joint(inst, cfg.t, cfg.cap)
    trace = []
    answer = 0
    for i in cfg.order:
        res = measure_round(joint, i, cfg, rng)
        trace.append(RoundRecord(i, res.p_accept, res.outcome))
        joint = res.post
        if res.outcome == "A":
            answer = 1
            if not full_trace:
                break
    return ProtocolRun(answer, tuple(trace))


def exact_answer_prob(inst: ShapInstance, cfg: ProtocolConfig) -> float:
    """``Pr[answer = 1]``, following only the all-reject path."""
    if inst.n != cfg.n:
        raise DomainError("instance length does not match the configuration")
    cfg.check_cap()
    joint = prepare_joint(inst, cfg.t, cfg.cap)
    survive = 1.0
    for i in cfg.order:
        _, rej, _, q = _split(joint, i, cfg.threshold)
        survive *= q
        if q <= ZERO_BRANCH:
            return 1.0 - survive
        joint = _renormalised(rej, q, joint)
    return 1.0 - survive


def round_accept_probs_fresh(inst: ShapInstance, cfg: ProtocolConfig) -> np.ndarray:
    """Accept probability of every round measured alone on the fresh state.

    Repetitions are independent on the product state, so this is a binomial
    tail in the single swap-test accept probability ``(1 + c_i**2) / 2``.
    """
    c = 1.0 - 2.0 * all_shift_weights(inst) / inst.n
    p1 = (1.0 + c**2) / 2.0
    return np.array([_binom_tail(cfg.t, cfg.threshold, p) for p in p1])


def _binom_tail(t: int, m: int, p: float) -> float:
    return float(sum(math.comb(t, a) * p**a * (1 - p) ** (t - a) for a in range(m, t + 1)))


# --- disturbance analysis ------------------------------------------------------------


@dataclass
class DisturbanceReport:
    """Error accounting along the path on which every round gets the right outcome.

    ``eps_cond[r]`` is the probability that round ``r`` goes wrong given that all
    earlier defined rounds went right (the quantity bounded in the analysis);
    ``eps_first[r]`` is the unconditional probability that the first wrong
    outcome happens at round ``r``.  Rounds whose single-shift answer is
    undefined follow the reject branch and carry ``nan``.
    """

    rounds: list[int]
    right_outcome: list[Optional[str]]
    p_right: list[float]
    eps_cond: list[float]
    eps_first: list[float]
    eps_fresh: list[float]
    eps_prime_emp: float
    undefined_rounds: list[int] = field(default_factory=list)

    @property
    def n(self) -> int:
        return len(self.rounds)

    @property
    def per_round_bound(self) -> float:
        return 4 * self.n * math.sqrt(self.eps_prime_emp)

    @property
    def total_bound(self) -> float:
        return 4 * self.n**2 * math.sqrt(self.eps_prime_emp)

    @property
    def cumulative_error(self) -> float:
        return float(np.nansum(self.eps_first))

    def violations(self) -> list[int]:
        return [r for r, e in zip(self.rounds, self.eps_cond) if not math.isnan(e) and e > self.per_round_bound]


def disturbance_report(inst: ShapInstance, cfg: ProtocolConfig) -> DisturbanceReport:
    if inst.n != cfg.n:
        raise DomainError("instance length does not match the configuration")
    cfg.check_cap()
    m = cfg.threshold
    weights = all_shift_weights(inst)
    fresh = prepare_joint(inst, cfg.t, cfg.cap)
    joint = fresh
    rounds, right, p_right, eps_cond, eps_first, eps_fresh, undefined = [], [], [], [], [], [], []
    alive = 1.0
    for i in cfg.order:
        cls = classify_weight(int(weights[i]), inst.n)
        acc, rej, p, q = _split(joint, i, m)
        rounds.append(i)
        if cls is PromiseClass.UNDEFINED:
            right.append(None)
            undefined.append(i)
            p_right.append(float("nan"))
            eps_cond.append(float("nan"))
            eps_first.append(float("nan"))
            eps_fresh.append(float("nan"))
            if q > ZERO_BRANCH:
                joint = _renormalised(rej, q, joint)
            continue
        _, _, p0, _ = _split(fresh, i, m)
        if cls is PromiseClass.ONE:
            right.append("A")
            pr, vec = p, acc
            eps_fresh.append(1.0 - p0)
        else:
            right.append("R")
            pr, vec = q, rej
            eps_fresh.append(p0)
        p_right.append(pr)
        eps_cond.append(1.0 - pr)
        eps_first.append(alive * (1.0 - pr))
        alive *= pr
        if pr > ZERO_BRANCH:
            joint = _renormalised(vec, pr, joint)
    defined = [e for e in eps_fresh if not math.isnan(e)]
    return DisturbanceReport(
        rounds=rounds,
        right_outcome=right,
        p_right=p_right,
        eps_cond=eps_cond,
        eps_first=eps_first,
        eps_fresh=eps_fresh,
        eps_prime_emp=max(defined) if defined else 0.0,
        undefined_rounds=undefined,
    )


# --- cost ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CostReport:
    qubits_sent: int
    entanglement_bits: int


def register_qubits(n: int) -> int:
    """``ceil(log2 n)``, computed on integers."""
    return (n - 1).bit_length()


def cost_report(cfg: ProtocolConfig) -> CostReport:
    """Each player sends ``t`` register pairs of ``ceil(log2 n)`` qubits."""
    q = 4 * cfg.t * register_qubits(cfg.n)
    return CostReport(qubits_sent=q, entanglement_bits=q)


def format_trace(trace: Sequence[RoundRecord]) -> str:
    return "".join(rec.line() + "\n" for rec in trace)
