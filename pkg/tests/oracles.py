"""Independent reference computations used as test oracles.

Nothing here calls into the package's numeric paths.
"""
import math
from itertools import product

import numpy as np


def h(ps):
    return -sum(p * math.log2(p) for p in ps if p > 0)


def h2(eps):
    return h([eps, 1 - eps])


def joint_entropy_cmi(dmc, dists, receiver, cond_nodes):
    """H(Y | X_S) - H(Y | X) from the fully materialised joint q(x) p(y|x)."""
    sizes = dmc.input_alphabet_sizes
    table = dmc.receiver_channels[receiver]
    ny = table.shape[1]
    joint = {}
    for r, x in enumerate(product(*[range(s) for s in sizes])):
        qx = 1.0
        for j, xj in enumerate(x):
            qx *= dists.pmfs[j][xj]
        for y in range(ny):
            joint[(x, y)] = qx * table[r, y]
    # H(Y|X) = H(X,Y) - H(X);  H(Y|X_S) = H(X_S,Y) - H(X_S)
    def marg(keyfn):
        out = {}
        for (x, y), p in joint.items():
            k = keyfn(x, y)
            out[k] = out.get(k, 0.0) + p
        return list(out.values())
    hxy = h(joint.values())
    hx = h(marg(lambda x, y: x))
    hsy = h(marg(lambda x, y: (tuple(x[j] for j in cond_nodes), y)))
    hs = h(marg(lambda x, y: tuple(x[j] for j in cond_nodes)))
    return (hsy - hs) - (hxy - hx)


def nested_marginal(joint, sizes_in, sizes_out, receiver):
    rows = int(np.prod(sizes_in))
    flat = np.asarray(joint).reshape(rows, *sizes_out)
    out = np.zeros((rows, sizes_out[receiver]))
    for r in range(rows):
        for ys in product(*[range(s) for s in sizes_out]):
            out[r, ys[receiver]] += flat[(r,) + ys]
    return out


def awgn_fd_rate(gain_sq, powers, noise, S, i0):
    n = len(powers)
    return math.log2(1 + sum(gain_sq[j][i0] * powers[j] for j in range(n) if not S >> j & 1) / noise)


def brute_feasible(table, rates, margin):
    """Exists-witness check written as plain loops."""
    n = len(rates)
    for S in range(1, (1 << n) - 1):
        rs = sum(rates[j] for j in range(n) if not S >> j & 1)
        if not any(S >> i & 1 and table[S][i] - rs > margin for i in range(n)):
            return False
    return True
