"""Feasibility certificates and rate-region exploration.

A rate vector is accepted when every proper nonempty subset S has a node
i0 in S whose cut rate exceeds the rate sum over S^c by more than
``margin`` bits.  The full node set is never a cut: its complement is
empty and the strict inequality could not hold.
"""
from __future__ import annotations

import csv
import io
import itertools
import json
from dataclasses import dataclass

import numpy as np

from . import kernels
from .model import (AwgnNetwork, GuardExceeded, ModelError, Schedule, as_rates, full_mask,
                    members, require_valid)
from .rates import cut_table

DEFAULT_MARGIN = 1e-9
HD_SEARCH_GUARD = 200_000
CSV_COLUMNS = ("subset_mask", "witness", "cut_rate_bits", "rate_sum_bits", "slack_bits")


@dataclass(frozen=True)
class FeasibilityCertificate:
    """Outcome of scanning every proper nonempty subset.

    Arrays are indexed by subset mask; entries for mask 0 and the full mask
    are placeholders.  ``witness[S]`` is the smallest qualifying node or -1.
    For violated subsets ``cut_rate``/``slack`` refer to the best node in S.
    """

    n: int
    rates: np.ndarray
    margin: float
    witness: np.ndarray
    cut_rate: np.ndarray
    rate_sum: np.ndarray
    slack: np.ndarray
    table: np.ndarray

    @property
    def feasible(self):
        return bool(np.all(self.witness[1:full_mask(self.n)] >= 0))

    @property
    def violated(self):
        return [S for S in range(1, full_mask(self.n)) if self.witness[S] < 0]

    def records(self):
        return [self.record(S) for S in range(1, full_mask(self.n))]

    def record(self, S):
        w = int(self.witness[S])
        rec = {
            "subset_mask": S,
            "nodes": [i + 1 for i in members(S)],
            "witness": w + 1 if w >= 0 else None,
            "cut_rate_bits": float(self.cut_rate[S]),
            "rate_sum_bits": float(self.rate_sum[S]),
            "slack_bits": float(self.slack[S]),
        }
        if w < 0:
            rec["deficits"] = {str(i + 1): float(self.rate_sum[S] - self.table[S, i])
                               for i in members(S)}
        return rec

    def to_dict(self):
        return {
            "kind": "feasibility_certificate",
            "n": self.n,
            "feasible": self.feasible,
            "margin": self.margin,
            "rates": [float(r) for r in self.rates],
            "violated_masks": self.violated,
            "subsets": self.records(),
        }

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for rec in self.records():
            w.writerow([rec["subset_mask"], "" if rec["witness"] is None else rec["witness"],
                        repr(rec["cut_rate_bits"]), repr(rec["rate_sum_bits"]),
                        repr(rec["slack_bits"])])
        return buf.getvalue()

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _table_for(model, schedule, table):
    if table is not None:
        return table
    require_valid(model, schedule)
    return cut_table(model, schedule)


def certify(table, rates, margin=DEFAULT_MARGIN):
    """Scan a precomputed cut table (see :func:`greedyrelay.rates.cut_table`)."""
    if margin < 0:
        raise ModelError("margin must be >= 0")
    n = table.shape[1]
    r = as_rates(rates, n)
    witness, cut, rs, slack = kernels.feasibility_scan(table, r, float(margin))
    return FeasibilityCertificate(n, r, float(margin), witness, cut, rs, slack, table)


def check_feasible(rates, model, schedule=None, margin=DEFAULT_MARGIN, table=None):
    return certify(_table_for(model, schedule, table), rates, margin)


def is_feasible(table, rates, margin=DEFAULT_MARGIN):
    witness = kernels.feasibility_scan(table, np.asarray(rates, dtype=float), float(margin))[0]
    return bool(np.all(witness[1:-1] >= 0))


def _bisect(pred, lo, hi, tol):
    """Largest t in [lo, hi] with pred(t), given pred(lo) and not pred(hi)."""
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if pred(mid):
            lo = mid
        else:
            hi = mid
    return lo, hi


def _ray_upper(table, direction):
    # singleton cuts S={i}: t * sum_{j != i} d_j < cut({i}, i)
    n = table.shape[1]
    bound = np.inf
    total = float(np.sum(direction))
    for i in range(n):
        denom = total - direction[i]
        if denom > 0:
            bound = min(bound, table[1 << i, i] / denom)
    return bound


def boundary_scale(table, direction, tol=1e-6, margin=DEFAULT_MARGIN):
    """Supremum feasible t along ``t * direction`` (within ``tol``)."""
    if tol <= 0:
        raise ModelError("tol must be positive")
    d = as_rates(direction, table.shape[1])
    if not np.any(d > 0):
        raise ModelError("direction must be nonzero")

    def pred(t):
        return is_feasible(table, t * d, margin)

    if not pred(0.0):
        return 0.0
    hi = _ray_upper(table, d)
    if not np.isfinite(hi) or hi <= 0:
        return 0.0
    if pred(hi):  # bound is exact only up to rounding
        hi = hi * (1 + 1e-12) + tol
        if pred(hi):
            raise RuntimeError("feasibility predicate not monotone along ray")
    lo, hi = _bisect(pred, 0.0, hi, tol)
    if not pred(lo) or pred(hi):
        raise RuntimeError("feasibility predicate not monotone along ray")
    return lo


def max_symmetric_rate(model=None, schedule=None, tol=1e-6, margin=DEFAULT_MARGIN, table=None):
    """Largest R (within ``tol``) such that (R, ..., R) is feasible."""
    table = _table_for(model, schedule, table)
    return boundary_scale(table, np.ones(table.shape[1]), tol, margin)


def boundary_sample(direction, model=None, schedule=None, tol=1e-6, margin=DEFAULT_MARGIN,
                    table=None):
    table = _table_for(model, schedule, table)
    d = as_rates(direction, table.shape[1])
    return boundary_scale(table, d, tol, margin) * d


def default_directions(n, count, seed=0):
    """Plot-friendly ray directions: a quarter circle for n=2, otherwise
    seeded draws from the simplex."""
    if count < 1:
        raise ModelError("need at least one direction")
    if n == 2:
        th = np.linspace(0.0, np.pi / 2, count)
        d = np.stack([np.cos(th), np.sin(th)], axis=1)
        d[np.abs(d) < 1e-15] = 0.0
        return d
    rng = np.random.default_rng(seed)
    return rng.dirichlet(np.ones(n), size=count)


def boundary_table(directions, model=None, schedule=None, tol=1e-6, margin=DEFAULT_MARGIN,
                   table=None):
    table = _table_for(model, schedule, table)
    rows = []
    for d in np.atleast_2d(directions):
        t = boundary_scale(table, d, tol, margin)
        rows.append((np.asarray(d, dtype=float), t, t * np.asarray(d, dtype=float)))
    return rows


def boundary_csv(rows):
    n = len(rows[0][0]) if rows else 0
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["ray"] + [f"dir_{i + 1}" for i in range(n)] + ["scale"]
               + [f"rate_{i + 1}" for i in range(n)])
    for k, (d, t, r) in enumerate(rows):
        w.writerow([k] + [repr(float(x)) for x in d] + [repr(float(t))]
                   + [repr(float(x)) for x in r])
    return buf.getvalue()


def _compositions(total, parts):
    # positive integer compositions of `total`, lexicographic
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def optimize_hd_schedule(net: AwgnNetwork, K, candidates, resolution, tol=1e-6,
                         margin=DEFAULT_MARGIN, guard=HD_SEARCH_GUARD):
    """Grid search over half-duplex schedules for the best symmetric rate.

    Transmitter sets are assigned to the K phases as multisets drawn from
    ``candidates`` (masks); weights range over the simplex grid with step
    ``resolution`` and every phase getting at least one step.  Returns
    ``(schedule, rate)`` for the best point on the grid; ties go to the
    lexicographically smallest (transmitter masks, lengths).
    """
    require_valid(net)
    if not candidates:
        raise ModelError("no candidate transmitter sets")
    if K < 1:
        raise ModelError("K must be >= 1")
    steps = int(round(1.0 / resolution))
    if steps < K or abs(steps * resolution - 1.0) > 1e-9:
        raise ModelError(f"resolution {resolution} must be 1/m with m >= K")
    cands = sorted({int(c) for c in candidates})
    for c in cands:
        if not 0 <= c < full_mask(net.n):
            raise ModelError(f"candidate mask {c} leaves no receiver or is out of range")
    combos = list(itertools.combinations_with_replacement(cands, K))
    comps = list(_compositions(steps, K))
    if len(combos) * len(comps) > guard:
        raise GuardExceeded("hd_search_guard", f"{len(combos) * len(comps)} schedules > {guard}")
    best = None
    best_rate = -np.inf
    seen = set()
    for tx in combos:
        for L in comps:
            # equal (mask, length) multisets give the same schedule
            key = tuple(sorted(zip(tx, L)))
            if key in seen:
                continue
            seen.add(key)
            sched = Schedule(L, transmitters=tx)
            rate = max_symmetric_rate(net, sched, tol=tol, margin=margin)
            if rate > best_rate + tol:
                best, best_rate = sched, rate
    return best, float(best_rate)
