"""Exact conditional mutual information on a discrete memoryless network.

All quantities are in bits.
"""
import math

import numpy as np

from . import kernels
from .model import DmcNetwork, InputDistributions, ModelError, members

CLAMP_TOL = 1e-12


class InconsistentResult(ArithmeticError):
    """A mutual information came out clearly negative."""


def entropy(pmf):
    p = np.asarray(pmf, dtype=float).reshape(-1)
    p = p[p > 0]
    return math.fsum(-p * np.log2(p)) + 0.0


def binary_entropy(eps):
    if not 0.0 <= eps <= 1.0:
        raise ValueError(f"eps={eps} outside [0, 1]")
    if eps in (0.0, 1.0):
        return 0.0
    return -eps * math.log2(eps) - (1.0 - eps) * math.log2(1.0 - eps)


def _slice_layout(dmc: DmcNetwork, dists: InputDistributions, receiver, cond_mask):
    """Reorder receiver's table to ``(conditioned configs, message configs, |Y|)``."""
    n = dmc.n
    cond = members(cond_mask)
    msg = [j for j in range(n) if not (cond_mask >> j) & 1]
    t = dmc.tensor(receiver)
    t = np.transpose(t, cond + msg + [n])
    a = int(np.prod([dmc.input_alphabet_sizes[j] for j in cond], dtype=np.int64))
    b = int(np.prod([dmc.input_alphabet_sizes[j] for j in msg], dtype=np.int64))
    W = np.ascontiguousarray(t.reshape(a, b, t.shape[-1]))
    q_cond = _product_pmf([dists.pmfs[j] for j in cond])
    q_msg = _product_pmf([dists.pmfs[j] for j in msg])
    return W, q_cond, q_msg


def _product_pmf(pmfs):
    out = np.ones(1)
    for p in pmfs:
        out = np.multiply.outer(out, p).reshape(-1)
    return out


def conditional_mi(dmc: DmcNetwork, dists: InputDistributions, receiver, cond_mask):
    """I(X_{S^c}; Y_receiver | X_S) for S = ``cond_mask`` under product inputs.

    ``receiver`` must lie in S and S^c must be nonempty.  Values within
    1e-12 below zero are rounded up to 0.
    """
    n = dmc.n
    if not 0 <= receiver < n:
        raise ModelError(f"receiver {receiver} out of range")
    if not (cond_mask >> receiver) & 1:
        raise ModelError("receiver must belong to the conditioned set")
    if cond_mask == (1 << n) - 1 or cond_mask <= 0 or cond_mask >> n:
        raise ModelError("conditioned set must be a proper subset leaving a nonempty message set")
    if len(dists.pmfs) != n:
        raise ModelError("one input pmf per node required")
    W, q_cond, q_msg = _slice_layout(dmc, dists, receiver, cond_mask)
    value = float(kernels.cmi_sum(W, q_cond, q_msg))
    if value < 0.0:
        if value < -CLAMP_TOL:
            raise InconsistentResult(f"conditional MI = {value!r} < 0")
        value = 0.0
    return value
