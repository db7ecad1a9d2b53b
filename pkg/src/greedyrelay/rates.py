"""Cut-rate evaluators for the all-source all-cast achievable region.

Every evaluator takes a cut (S, i0) with i0 in S and returns, in bits per
channel use, the right-hand side that the rate sum over S^c must stay
strictly below.  ``cut_table`` evaluates a model on every cut at once and
is what the region search consumes.
"""
import math
from typing import NamedTuple

import numpy as np

from . import kernels
from .infotheory import conditional_mi
from .model import (MAX_NODES, AwgnNetwork, DmcNetwork, GuardExceeded, ModelError, Schedule,
                    full_mask, members)


class CutQuery(NamedTuple):
    S: int
    i0: int


def _check_cut(cut, n):
    S, i0 = cut
    if not (0 < S < full_mask(n)):
        raise ModelError(f"cut set {S:#b} must be proper and nonempty")
    if not (S >> i0) & 1:
        raise ModelError(f"node {i0 + 1} is not in the cut set")
    return S, i0


def cut_rate_dmc(dmc: DmcNetwork, dists, cut):
    """Single input law: I(X_{S^c}; Y_{i0} | X_S)."""
    S, i0 = _check_cut(cut, dmc.n)
    return conditional_mi(dmc, dists, i0, S)


def _weighted(values, weights):
    acc = 0.0
    for w, v in zip(weights, values):
        acc += w * v
    return acc


def cut_rate_periodic_dmc(dmc: DmcNetwork, schedule: Schedule, cut):
    """Length-weighted average of per-phase conditional MI."""
    S, i0 = _check_cut(cut, dmc.n)
    vals = [conditional_mi(dmc, d, i0, S) for d in schedule.input_distributions]
    return _weighted(vals, schedule.weights)


def cut_rate_periodic_dmc_equal(dmc: DmcNetwork, phase_dists, cut):
    """Equal-length periodic form: (1/K) * sum_k I_k."""
    S, i0 = _check_cut(cut, dmc.n)
    K = len(phase_dists)
    vals = [conditional_mi(dmc, d, i0, S) for d in phase_dists]
    return _weighted(vals, [1.0 / K] * K)


def _snr_sum(net, S, i0, tx=None):
    s = 0.0
    for j in range(net.n):
        if (S >> j) & 1:
            continue
        if tx is not None and not (tx >> j) & 1:
            continue
        s += net.gain_sq[j, i0] * net.powers[j]
    return s


def cut_rate_awgn_fd(net: AwgnNetwork, cut):
    """log2(1 + sum_{j in S^c} |g_{j,i0}|^2 P_j / N)."""
    S, i0 = _check_cut(cut, net.n)
    return math.log2(1.0 + _snr_sum(net, S, i0) / net.noise_power)


def cut_rate_awgn_hd(net: AwgnNetwork, schedule: Schedule, cut):
    """Half-duplex periodic rate.

    Phase k contributes only when i0 listens in it, and then only through
    the transmitters in S^c.  Powers are per transmitting slot; no duty-cycle
    rescaling is applied.
    """
    S, i0 = _check_cut(cut, net.n)
    acc = 0.0
    for w, T in zip(schedule.weights, schedule.transmitters):
        if (T >> i0) & 1:
            continue
        acc += w * math.log2(1.0 + _snr_sum(net, S, i0, T) / net.noise_power)
    return acc


def cut_rate(model, schedule, cut):
    """Dispatch on model kind; ``schedule`` may be None for full duplex."""
    if isinstance(model, AwgnNetwork):
        if schedule is None or schedule.transmitters is None:
            return cut_rate_awgn_fd(model, cut)
        return cut_rate_awgn_hd(model, schedule, cut)
    if isinstance(model, DmcNetwork):
        if schedule is None:
            raise ModelError("discrete networks need input distributions")
        if schedule.K == 1:
            return cut_rate_dmc(model, schedule.input_distributions[0], cut)
        return cut_rate_periodic_dmc(model, schedule, cut)
    raise ModelError(f"unsupported model {type(model).__name__}")


def cut_table(model, schedule=None, max_nodes=MAX_NODES):
    """Cut rates for all (S, i0): array ``(2**n, n)``, NaN where i0 is not in S
    or S is empty / the full set."""
    n = model.n
    if n > max_nodes:
        raise GuardExceeded("enumeration_guard", f"n={n} > {max_nodes}")
    if isinstance(model, AwgnNetwork):
        g = np.ascontiguousarray(model.gain_sq, dtype=np.float64)
        p = np.ascontiguousarray(model.powers, dtype=np.float64)
        if schedule is None or schedule.transmitters is None:
            return kernels.awgn_fd_table(g, p, model.noise_power)
        tx = np.array(schedule.transmitters, dtype=np.int64)
        return kernels.awgn_hd_table(g, p, model.noise_power, schedule.weights, tx)
    out = np.full((1 << n, n), np.nan)
    for S in range(1, full_mask(n)):
        for i0 in members(S):
            out[S, i0] = cut_rate(model, schedule, (S, i0))
    return out
