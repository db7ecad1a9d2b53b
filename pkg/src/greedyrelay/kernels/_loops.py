"""Explicit-loop kernels, compiled with numba when available."""
import numpy as np

from .._accel import njit


@njit
def cmi_sum(W, q_cond, q_msg):
    # W[a, b, y] = p(y | x_cond=a, x_msg=b); Neumaier-compensated accumulation
    A, B, Y = W.shape
    total = 0.0
    comp = 0.0
    for a in range(A):
        qa = q_cond[a]
        if qa == 0.0:
            continue
        for y in range(Y):
            py = 0.0
            for b in range(B):
                py += q_msg[b] * W[a, b, y]
            if py <= 0.0:
                continue
            for b in range(B):
                p = W[a, b, y]
                w = qa * q_msg[b] * p
                if w > 0.0:
                    term = w * np.log2(p / py)
                    t = total + term
                    if abs(total) >= abs(term):
                        comp += (total - t) + term
                    else:
                        comp += (term - t) + total
                    total = t
    return total + comp


@njit
def awgn_fd_table(gain_sq, powers, noise_power):
    n = powers.shape[0]
    full = (1 << n) - 1
    out = np.full((full + 1, n), np.nan)
    for S in range(1, full):
        for i0 in range(n):
            if not (S >> i0) & 1:
                continue
            s = 0.0
            for j in range(n):
                if not (S >> j) & 1:
                    s += gain_sq[j, i0] * powers[j]
            out[S, i0] = np.log2(1.0 + s / noise_power)
    return out


@njit
def awgn_hd_table(gain_sq, powers, noise_power, weights, tx_masks):
    n = powers.shape[0]
    full = (1 << n) - 1
    K = weights.shape[0]
    out = np.full((full + 1, n), np.nan)
    for S in range(1, full):
        for i0 in range(n):
            if not (S >> i0) & 1:
                continue
            acc = 0.0
            for k in range(K):
                T = tx_masks[k]
                if (T >> i0) & 1:
                    continue
                s = 0.0
                for j in range(n):
                    if not (S >> j) & 1 and (T >> j) & 1:
                        s += gain_sq[j, i0] * powers[j]
                acc += weights[k] * np.log2(1.0 + s / noise_power)
            out[S, i0] = acc
    return out


@njit
def feasibility_scan(table, rates, margin):
    n = rates.shape[0]
    full = (1 << n) - 1
    witness = np.full(full + 1, -1, dtype=np.int64)
    cut = np.full(full + 1, np.nan)
    rate_sum = np.full(full + 1, np.nan)
    slack = np.full(full + 1, np.nan)
    for S in range(1, full):
        rs = 0.0
        for j in range(n):
            if not (S >> j) & 1:
                rs += rates[j]
        rate_sum[S] = rs
        best = -np.inf
        best_i = -1
        for i0 in range(n):
            if not (S >> i0) & 1:
                continue
            sl = table[S, i0] - rs
            if sl > margin:
                witness[S] = i0
                best_i = i0
                best = sl
                break
            if sl > best:
                best = sl
                best_i = i0
        cut[S] = table[S, best_i]
        slack[S] = best
    return witness, cut, rate_sum, slack


@njit
def cover_step(C, f, K, D, b):
    n = C.shape[0]
    C2 = C.copy()
    K2 = K.copy()
    f2 = f.copy()
    for i in range(n):
        Di = D[i]
        for k in range(n):
            if (Di >> k) & 1:
                C2[i] |= C[k]
                for j in range(n):
                    if f[k, j] > K2[i, j]:
                        K2[i, j] = f[k, j]
    for i in range(n):
        for j in range(n):
            if j == i:
                continue
            if (C2[i] >> j) & 1:
                nxt = f[i, j] + 1
                f2[i, j] = K2[i, j] if K2[i, j] < nxt else nxt
        f2[i, i] = b + 1
        K2[i, i] = b + 1
    return C2, f2, K2


@njit
def expand_states(states, assigns):
    s, n = states.shape
    a = assigns.shape[0]
    out = np.empty((s * a, n), dtype=np.int64)
    r = 0
    for p in range(s):
        for q in range(a):
            for i in range(n):
                c = states[p, i]
                Di = assigns[q, i]
                for k in range(n):
                    if (Di >> k) & 1:
                        c |= states[p, k]
                out[r, i] = c
            r += 1
    return out
