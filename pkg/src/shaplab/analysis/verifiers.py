"""Exact numeric checks of the entropy and Fourier inequalities behind the lower bound.

Every check returns :class:`VerifierReport` objects of the form ``lhs <= rhs``;
``holds`` is true when ``rhs - lhs >= -TOL``.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

import numpy as np

from ..errors import DomainError, LengthMismatch
from .dense import (
    DenseDistribution,
    binary_entropy,
    entropy,
    l1_distance,
    min_entropy,
    popcounts,
)
from .fourier import apply_noise, damp, norm, wht

__all__ = [
    "TOL",
    "VerifierReport",
    "verify_minentropy_chain",
    "verify_l1_entropy",
    "verify_hypercontractive",
    "verify_kkl",
    "verify_ndist",
    "verify_lhyp",
    "pairwise_xor_deficit",
    "subset_entropies",
]

TOL = 1e-9


def _clean(value: Any) -> Any:
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    return value


@dataclass
class VerifierReport:
    name: str
    lhs: Optional[float]
    rhs: Optional[float]
    params: dict = field(default_factory=dict)
    skipped: bool = False

    @property
    def slack(self) -> Optional[float]:
        if self.skipped:
            return None
        return self.rhs - self.lhs

    @property
    def holds(self) -> bool:
        return self.skipped or self.slack >= -TOL

    def to_json(self) -> str:
        payload = {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "holds": self.holds,
            "params": {k: _clean(v) for k, v in self.params.items()},
        }
        return json.dumps(payload, sort_keys=False, allow_nan=False)

    @classmethod
    def from_json(cls, line: str) -> "VerifierReport":
        obj = json.loads(line)
        skipped = obj["lhs"] is None
        return cls(obj["name"], obj["lhs"], obj["rhs"], obj.get("params", {}), skipped)


def _report(name: str, lhs: float, rhs: float, **params) -> VerifierReport:
    return VerifierReport(name, float(lhs), float(rhs), params)


# --- min-entropy chain rule --------------------------------------------------------------


def verify_minentropy_chain(nu: DenseDistribution, split: int, delta: float) -> list[VerifierReport]:
    """Weak chain rule for min-entropy with its tail bound.

    The first ``split`` positions form ``X1`` and the rest ``X2``.  ``A`` is
    taken to be the support of ``X1``, which gives the tightest version.
    """
    if not 0 <= split <= nu.m:
        raise DomainError("split outside [0, m]")
    if delta < 0:
        raise DomainError("delta must be non-negative")
    P = nu.p.reshape(1 << split, 1 << (nu.m - split))
    rows = P.sum(axis=1)
    live = rows > 0
    row_hmin = np.full(rows.shape, np.inf)
    row_hmin[live] = -np.log2(P[live].max(axis=1) / rows[live])
    h_min = min_entropy(nu)
    h_x1 = entropy(DenseDistribution(split, rows / rows.sum()))
    log_a = math.log2(int(live.sum()))
    expect = float(np.dot(rows[live], row_hmin[live]))
    threshold = h_min - log_a - delta
    # boundary cases count as events, which only makes the check harder
    tail = float(rows[live][row_hmin[live] <= threshold + 1e-12].sum())
    ctx = dict(m=nu.m, split=split, delta=delta, h_min=h_min, h_x1=h_x1, log_a=log_a)
    return [
        _report("minentropy_chain_expectation", h_min - h_x1, expect, **ctx),
        _report("minentropy_chain_tail", tail, 2.0**-delta, **ctx),
    ]


# --- l1 distance vs entropy deficit -------------------------------------------------------


def verify_l1_entropy(nu1: DenseDistribution, nu2: DenseDistribution) -> VerifierReport:
    if nu1.m != nu2.m:
        raise LengthMismatch("distributions live on different cubes")
    lhs = l1_distance(nu1, nu2) ** 2
    h = min(entropy(nu1), entropy(nu2))
    return _report("l1_entropy", lhs, 8 * math.log(2) * (nu1.m - h), m=nu1.m)


# --- hypercontractivity -------------------------------------------------------------------


def verify_hypercontractive(f, p: float, q: float) -> VerifierReport:
    """``|| sum_s ((p-1)/(q-1))**(|s|/2) f_hat(s) chi_s ||_q <= ||f||_p``."""
    if not 1.0 <= p <= q:
        raise DomainError("need 1 <= p <= q")
    ratio = 1.0 if p == q else (p - 1.0) / (q - 1.0)
    g = damp(f, math.sqrt(ratio))
    f = np.asarray(f, dtype=np.float64)
    return _report("hypercontractive", norm(g, q), norm(f, p), p=p, q=q, m=int(f.size).bit_length() - 1)


def verify_kkl(f, delta: float, t: int) -> list[VerifierReport]:
    """Both KKL-style bounds on the noise-weighted and low-degree Fourier weight."""
    f = np.asarray(f, dtype=np.float64)
    if not 0.0 <= delta <= 1.0:
        raise DomainError("delta outside [0, 1]")
    alpha = norm(f, np.inf)
    beta = norm(f, 1)
    if alpha == 0:
        raise DomainError("f must not vanish identically")
    spec = wht(f)
    level = popcounts(spec.m)
    sq = spec.coeffs**2
    lhs1 = float(np.dot(np.power(delta, level.astype(np.float64)), sq))
    rhs1 = alpha**2 * (beta / alpha) ** (2.0 / (1.0 + delta))
    ctx = dict(delta=delta, t=t, alpha=alpha, beta=beta, m=spec.m)
    out = [_report("kkl_noise", lhs1, rhs1, **ctx)]
    log_ratio = math.log(alpha / beta)
    if t > 2 * log_ratio or t <= 0:
        out.append(VerifierReport("kkl_low_degree", None, None, dict(ctx, reason="t > 2 ln(alpha/beta)"), True))
    else:
        lhs2 = float(sq[level <= t].sum())
        rhs2 = beta**2 * (2 * math.e * log_ratio / t) ** t
        out.append(_report("kkl_low_degree", lhs2, rhs2, **ctx))
    return out


# --- noisy projection bound ---------------------------------------------------------------


def subset_entropies(nu: DenseDistribution) -> dict[int, float]:
    """``H(X_S)`` for every subset ``S`` (bitmask over positions, bit ``k`` = position ``k+1``).

    Marginals are memoised: each one is obtained from a superset by summing out
    a single coordinate.
    """
    m = nu.m
    full = (1 << m) - 1
    cubes = {full: nu.cube()}
    out = {}
    for mask in sorted(range(1 << m), key=lambda s: -bin(s).count("1")):
        if mask not in cubes:
            # add back the lowest missing position and sum it out
            missing = next(k for k in range(m) if not mask >> k & 1)
            parent = cubes[mask | (1 << missing)]
            axis = sum(1 for k in range(missing) if mask >> k & 1)
            cubes[mask] = parent.sum(axis=axis)
        q = np.asarray(cubes[mask]).reshape(-1)
        q = q[q > 0]
        out[mask] = float(-(q * np.log2(q)).sum())
    return out


def verify_ndist(nu: DenseDistribution) -> list[VerifierReport]:
    """Noisy-projection inequality with its exact binomial tail.

    With ``delta = n - H(T_{1/4}(nu))`` and ``K = ceil(2n/3)``, checks
    ``(E_{|S|=K} H(X_S) + n - K) * (1 - Pr[|W| > K]) <= n - delta``, the
    equivalent form ``E_S H(X_S) <= K - delta + slack``, and the exact
    decomposition ``sum_k Pr[|W|=k] (E_{|S|=k} H(X_S) + n - k) <= n - delta``.
    """
    n = nu.m
    if n > 14:
        raise DomainError("subset enumeration limited to n <= 14")
    K = -(-2 * n // 3)
    h_noisy = entropy(apply_noise(nu, 0.25))
    delta = n - h_noisy
    ent = subset_entropies(nu)
    by_size = [[] for _ in range(n + 1)]
    for mask, h in ent.items():
        by_size[bin(mask).count("1")].append(h)
    mean_h = [float(np.mean(v)) for v in by_size]
    tail = sum(math.comb(n, k) for k in range(K + 1, n + 1)) / 2**n
    proof_lhs = (mean_h[K] + n - K) * (1 - tail)
    slack_term = (n - delta) * tail / (1 - tail)
    chain = sum(math.comb(n, k) / 2**n * (mean_h[k] + n - k) for k in range(n + 1))
    ctx = dict(n=n, K=K, delta=delta, tail=tail)
    return [
        _report("ndist_proof", proof_lhs, n - delta, **ctx),
        _report("ndist_statement", mean_h[K], K - delta + slack_term, **ctx),
        _report("ndist_chain", chain, n - delta, **ctx),
    ]


# --- pairwise XOR entropy and the hypercontractive bound -------------------------------------


def _pair_agreement(rho: DenseDistribution) -> np.ndarray:
    # M[a, b] = E[(-1)^(x_a + x_b)] computed directly from the point masses
    n = rho.m
    bits = (np.arange(1 << n)[:, None] >> (n - 1 - np.arange(n))[None, :]) & 1
    s = 1.0 - 2.0 * bits
    return s.T @ (rho.p[:, None] * s)


def verify_lhyp(rho: DenseDistribution) -> list[VerifierReport]:
    """``E_{j1 != j2}[1 - H(X_j1 ^ X_j2)] <= 45/n**2 (n - H_min)**2`` plus the Fourier identity.

    The second report compares ``|Pr[X_j1 = X_j2] - 1/2|`` with
    ``2**(n-1) |rho_hat({j1, j2})|`` over all pairs; its ``lhs`` is the largest
    discrepancy and ``rhs`` the allowed 1e-10.
    """
    n = rho.m
    if n < 2:
        raise DomainError("need n >= 2")
    corr = _pair_agreement(rho)
    j1, j2 = np.triu_indices(n, k=1)
    p_eq = (1.0 + corr[j1, j2]) / 2.0
    lhs = float(np.mean(1.0 - binary_entropy(p_eq)))
    h_min = min_entropy(rho)
    rhs = 45.0 / n**2 * (n - h_min) ** 2
    spec = wht(rho.p)
    masks = (1 << (n - 1 - j1)) | (1 << (n - 1 - j2))
    via_fourier = 2.0 ** (n - 1) * np.abs(spec.coeffs[masks])
    gap = float(np.max(np.abs(np.abs(p_eq - 0.5) - via_fourier)))
    return [
        _report("lhyp", lhs, rhs, n=n, h_min=h_min),
        _report("lhyp_fourier_identity", gap, 1e-10, n=n),
    ]


def pairwise_xor_deficit(rho: DenseDistribution, I: Sequence[int], I_bar: Sequence[int]) -> float:
    """``E_{j1 != j2 in I}[1 - H(Y_j1 ^ Y_j2 | Y_{I_bar})]`` (positions 1-indexed)."""
    m = rho.m
    if m > 20:
        raise DomainError("limited to m <= 20")
    I = sorted(set(int(j) for j in I))
    I_bar = sorted(set(int(j) for j in I_bar))
    if len(I) < 2:
        raise DomainError("I must contain at least two positions")
    if set(I) & set(I_bar) or any(not 1 <= j <= m for j in I + I_bar):
        raise DomainError("I and I_bar must be disjoint positions in [1, m]")
    x = np.arange(1 << m)
    bit = lambda j: (x >> (m - j)) & 1  # noqa: E731
    cond_key = np.zeros(1 << m, dtype=np.int64)
    for j in I_bar:
        cond_key = (cond_key << 1) | bit(j)
    p = rho.p

    def _h(keys, size):
        q = np.bincount(keys, weights=p, minlength=size)
        q = q[q > 0]
        return float(-(q * np.log2(q)).sum())

    h_cond = _h(cond_key, 1 << len(I_bar))
    vals = []
    for a, b in itertools.combinations(I, 2):
        key = (cond_key << 1) | (bit(a) ^ bit(b))
        vals.append(1.0 - (_h(key, 1 << (len(I_bar) + 1)) - h_cond))
    return float(np.mean(vals))
