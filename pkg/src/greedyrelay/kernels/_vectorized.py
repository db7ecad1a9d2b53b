"""Pure-numpy counterparts of the loop kernels."""
import math

import numpy as np


def _bits(n):
    # bits[S, j] is True iff node j is in mask S
    masks = np.arange(1 << n, dtype=np.int64)
    return ((masks[:, None] >> np.arange(n)) & 1).astype(bool)


def cmi_sum(W, q_cond, q_msg):
    py = np.einsum("b,aby->ay", q_msg, W)
    joint = q_cond[:, None, None] * q_msg[None, :, None] * W
    live = joint > 0.0
    ratio = W[live] / np.broadcast_to(py[:, None, :], W.shape)[live]
    return math.fsum(joint[live] * np.log2(ratio))


def _proper_mask_table(n, values, bits):
    out = np.where(bits, values, np.nan)
    out[0] = np.nan
    out[-1] = np.nan
    return out


def awgn_fd_table(gain_sq, powers, noise_power):
    n = powers.shape[0]
    bits = _bits(n)
    s = np.zeros((1 << n, n))
    for j in range(n):
        s += np.where(bits[:, j:j + 1], 0.0, gain_sq[j][None, :] * powers[j])
    return _proper_mask_table(n, np.log2(1.0 + s / noise_power), bits)


def awgn_hd_table(gain_sq, powers, noise_power, weights, tx_masks):
    n = powers.shape[0]
    bits = _bits(n)
    acc = np.zeros((1 << n, n))
    for k in range(weights.shape[0]):
        tx = bits[int(tx_masks[k])]
        s = np.zeros((1 << n, n))
        for j in range(n):
            if tx[j]:
                s += np.where(bits[:, j:j + 1], 0.0, gain_sq[j][None, :] * powers[j])
        term = weights[k] * np.log2(1.0 + s / noise_power)
        acc += np.where(tx[None, :], 0.0, term)
    return _proper_mask_table(n, acc, bits)


def feasibility_scan(table, rates, margin):
    n = rates.shape[0]
    bits = _bits(n)
    rs = np.zeros(1 << n)
    for j in range(n):
        rs += np.where(bits[:, j], 0.0, rates[j])
    sl = table - rs[:, None]
    ok = bits & (sl > margin)
    has = ok.any(axis=1)
    first = ok.argmax(axis=1)
    masked = np.where(bits, sl, -np.inf)
    best = masked.argmax(axis=1)
    pick = np.where(has, first, best)
    rows = np.arange(1 << n)
    witness = np.where(has, first, -1).astype(np.int64)
    cut = table[rows, pick]
    slack = sl[rows, pick]
    rate_sum = rs.copy()
    for arr in (cut, slack, rate_sum):
        arr[0] = np.nan
        arr[-1] = np.nan
    witness[0] = witness[-1] = -1
    return witness, cut, rate_sum, slack


def cover_step(C, f, K, D, b):
    n = C.shape[0]
    nodes = np.arange(n)
    dbits = ((D[:, None] >> nodes) & 1).astype(bool)
    C2 = C | np.bitwise_or.reduce(np.where(dbits, C[None, :], 0), axis=1)
    heard = np.where(dbits[:, :, None], f[None, :, :], np.iinfo(np.int64).min).max(axis=1)
    K2 = np.maximum(K, heard)
    cov = ((C2[:, None] >> nodes) & 1).astype(bool)
    f2 = np.where(cov, np.minimum(K2, f + 1), f)
    f2[nodes, nodes] = b + 1
    K2[nodes, nodes] = b + 1
    return C2, f2, K2


def expand_states(states, assigns):
    s, n = states.shape
    nodes = np.arange(n)
    dbits = ((assigns[:, :, None] >> nodes) & 1).astype(bool)  # (a, i, k)
    pulled = np.where(dbits[None, :, :, :], states[:, None, None, :], 0)
    out = states[:, None, :] | np.bitwise_or.reduce(pulled, axis=3)
    return out.reshape(s * assigns.shape[0], n)
