"""Pure-Python/numpy versions of the hot kernels.

These define the reference semantics; ``_ckernels.pyx`` must agree with them
bit-for-bit on integer outputs and to rounding on float outputs.
"""
from __future__ import annotations

import numpy as np


def shift_weights(d: np.ndarray, e: np.ndarray) -> np.ndarray:
    """``w[i] = #{k : d[(k - i) mod n] != e[k]}`` for every shift ``i``.

    ``d`` and ``e`` are 0/1 ``uint8`` arrays of equal length ``n``.
    """
    n = d.shape[0]
    mask = (1 << n) - 1
    dv = int("".join(map(str, d.tolist())) or "0", 2)
    ev = int("".join(map(str, e.tolist())) or "0", 2)
    out = np.empty(n, dtype=np.int64)
    for i in range(n):
        rot = ((dv >> i) | (dv << (n - i))) & mask if i else dv
        out[i] = (rot ^ ev).bit_count()
    return out


def fwht(a: np.ndarray) -> np.ndarray:
    """Unnormalised Walsh-Hadamard transform of a length-``2**m`` float vector."""
    a = np.array(a, dtype=np.float64, copy=True)
    size = a.shape[0]
    h = 1
    while h < size:
        v = a.reshape(-1, 2, h)
        top = v[:, 0, :] + v[:, 1, :]
        bot = v[:, 0, :] - v[:, 1, :]
        v[:, 0, :] = top
        v[:, 1, :] = bot
        h *= 2
    return a


def _swap_rep(psi: np.ndarray, n: int, t: int, rep: int, i: int) -> np.ndarray:
    # (W psi)(a, b) = psi(b - i, a + i) on the register pair of repetition `rep`
    view = psi.reshape((n, n) * t)
    ax_a, ax_b = 2 * rep, 2 * rep + 1
    out = np.swapaxes(view, ax_a, ax_b)
    if i:
        out = np.roll(out, -i, axis=ax_a)
        out = np.roll(out, i, axis=ax_b)
    return np.ascontiguousarray(out).reshape(-1)


def project_accept(psi: np.ndarray, n: int, t: int, i: int, coef: np.ndarray) -> np.ndarray:
    """``sum_T coef[|T|] * W_T psi`` over all subsets ``T`` of the ``t`` repetitions."""
    out = coef[0] * psi
    # walk subsets by building W_T psi incrementally over repetitions in order
    frontier = [(psi, 0, 0)]  # (vector, size of T, next repetition allowed)
    while frontier:
        vec, size, start = frontier.pop()
        for rep in range(start, t):
            moved = _swap_rep(vec, n, t, rep, i)
            if coef[size + 1] != 0.0:
                out = out + coef[size + 1] * moved
            frontier.append((moved, size + 1, rep + 1))
    return out


def sampled_estimates(
    d: np.ndarray, in_s1: np.ndarray, e: np.ndarray, s2: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Per-shift overlap counts and mismatch counts for the sampling protocol.

    For shift ``i`` and each ``j`` in ``s2`` whose partner ``(j - i) mod n`` lies
    in the first sample, count the pair and add ``d[partner] XOR e[j]``.
    """
    n = d.shape[0]
    s2 = np.asarray(s2, dtype=np.int64)
    shifts = np.arange(n, dtype=np.int64)[:, None]
    partner = (s2[None, :] - shifts) % n
    hit = in_s1[partner].astype(bool)
    mismatch = (d[partner] ^ e[s2][None, :]).astype(bool) & hit
    return hit.sum(axis=1).astype(np.int64), mismatch.sum(axis=1).astype(np.int64)
