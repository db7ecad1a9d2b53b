"""Coverage and delay dynamics of greedy omnidirectional relaying.

The simulation works above the coding layer.  In each block every node i
decodes the transmissions of a set ``D[i]`` of other nodes; the only
guarantee available is *admissibility*: for every proper nonempty S the
certificate's witness node for S decodes at least one node outside S.
Decode oracles choose ``D`` subject to that guarantee, from generous
(greedy) to stingy (adversarial).

State per node i:
  * ``C[i]``: bitmask of sources whose messages i has decoded and relays;
  * ``f[i, j]``: newest message index of source j that i transmits (-1: none);
  * ``K[i, j]``: newest message index of source j that i knows, contiguous.

A source's own frontier equals the block index, and a relay's transmit
frontier climbs by at most one message per block.
"""
from __future__ import annotations

import csv
import io
import itertools
import json
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .model import ModelError, full_mask, members
from .region import DEFAULT_MARGIN, FeasibilityCertificate, check_feasible

NONE = -1
ORACLE_MODES = ("greedy", "adversarial_heuristic", "exhaustive_adversarial", "random")
EXHAUSTIVE_MAX_N = 4
RANDOM_TRIES = 32


class InfeasibleRates(ModelError):
    """The rate vector has no feasibility certificate; nothing to simulate."""


class CoverageBoundViolation(AssertionError):
    """Some node failed to cover the network within 2**(n-2) blocks."""


class InadmissibleAssignment(AssertionError):
    pass


def coverage_bound(n):
    return 1 << max(n - 2, 0)


# -- witnesses and admissibility ---------------------------------------------

def witness_map(cert: FeasibilityCertificate):
    if not cert.feasible:
        raise InfeasibleRates(f"violated subsets: {cert.violated}")
    return np.asarray(cert.witness, dtype=np.int64)


def all_witness_maps(n):
    """Every map S -> i0 in S over proper nonempty S (product over subsets)."""
    subsets = list(range(1, full_mask(n)))
    for choice in itertools.product(*(members(S) for S in subsets)):
        w = np.full(1 << n, NONE, dtype=np.int64)
        w[subsets] = choice
        yield w


def random_witness_map(n, rng):
    w = np.full(1 << n, NONE, dtype=np.int64)
    for S in range(1, full_mask(n)):
        m = members(S)
        w[S] = m[rng.integers(len(m))]
    return w


def constraint_families(witness, n):
    """For each node, the complements S^c it must hit (one per S it witnesses)."""
    fams = [[] for _ in range(n)]
    full = full_mask(n)
    for S in range(1, full):
        fams[int(witness[S])].append(full & ~S)
    return fams


def is_admissible(witness, D, n):
    """Direct scan over all proper nonempty subsets."""
    full = full_mask(n)
    for i in range(n):
        if D[i] & ~full or (D[i] >> i) & 1:
            return False
    for S in range(1, full):
        if not D[int(witness[S])] & (full & ~S):
            return False
    return True


def _node_options(family, i, n):
    # every D_i (subset of the other nodes) hitting all sets in the family
    others = full_mask(n) & ~(1 << i)
    out = []
    sub = others
    while True:
        if all(sub & s for s in family):
            out.append(sub)
        if sub == 0:
            break
        sub = (sub - 1) & others
    return sorted(out)


def admissible_assignments(witness, n):
    """All admissible assignments as an ``(count, n)`` int64 array."""
    fams = constraint_families(witness, n)
    opts = [_node_options(fams[i], i, n) for i in range(n)]
    return np.array(list(itertools.product(*opts)), dtype=np.int64).reshape(-1, n)


# -- oracles -----------------------------------------------------------------

@dataclass
class DecodeOracle:
    mode: str = "greedy"
    seed: int | None = None
    rng: np.random.Generator | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.mode not in ORACLE_MODES:
            raise ModelError(f"oracle mode must be one of {ORACLE_MODES}, got {self.mode!r}")
        self.reset()

    @classmethod
    def parse(cls, spec, seed=None):
        """Accepts ``greedy``, ``random``, ``random(7)`` and so on."""
        spec = spec.strip()
        if spec.endswith(")") and "(" in spec:
            name, arg = spec[:-1].split("(", 1)
            return cls(name.strip(), int(arg))
        return cls(spec, seed)

    def reset(self):
        self.rng = np.random.default_rng(self.seed if self.seed is not None else 0)

    def label(self):
        return f"random({self.seed})" if self.mode == "random" else self.mode


def _popcount(x):
    return bin(int(x)).count("1")


def _greedy(witness, n):
    D = np.zeros(n, dtype=np.int64)
    full = full_mask(n)
    for S in range(1, full):
        D[witness[S]] |= full & ~S
    return D


def _hitting_set(family, i, C, n):
    """Greedy small hitting set for node i, preferring sources that add the
    least new coverage to i."""
    chosen = 0
    unhit = list(family)
    cover = int(C[i])
    while unhit:
        best = None
        for k in range(n):
            if k == i or (chosen >> k) & 1:
                continue
            hits = sum(1 for s in unhit if (s >> k) & 1)
            if hits == 0:
                continue
            key = (_popcount(int(C[k]) & ~cover), -hits, k)
            if best is None or key < best[0]:
                best = (key, k)
        k = best[1]
        chosen |= 1 << k
        cover |= int(C[k])
        unhit = [s for s in unhit if not (s >> k) & 1]
    for k in members(chosen):
        trial = chosen & ~(1 << k)
        if all(trial & s for s in family):
            chosen = trial
    return chosen


def _adversarial(witness, n, C):
    fams = constraint_families(witness, n)
    return np.array([_hitting_set(fams[i], i, C, n) for i in range(n)], dtype=np.int64)


def _exhaustive_worst(witness, n, C):
    if n > EXHAUSTIVE_MAX_N:
        raise ModelError(f"exhaustive_adversarial limited to n <= {EXHAUSTIVE_MAX_N}")
    assigns = admissible_assignments(witness, n)
    nxt = kernels.expand_states(np.asarray(C, dtype=np.int64)[None, :], assigns)
    sizes = np.array([sum(_popcount(c) for c in row) for row in nxt])
    return assigns[int(np.argmin(sizes))]


def _random(witness, n, rng):
    full = full_mask(n)
    for _ in range(RANDOM_TRIES):
        D = np.array([int(rng.integers(1 << n)) & full & ~(1 << i) for i in range(n)],
                     dtype=np.int64)
        if is_admissible(witness, D, n):
            return D
    # repair the last draw: each unmet subset gets a random source from S^c
    for S in range(1, full):
        w = int(witness[S])
        comp = full & ~S
        if not D[w] & comp:
            m = members(comp)
            D[w] |= 1 << m[int(rng.integers(len(m)))]
    return D


def decode_assignment(oracle: DecodeOracle, witness, state: "SimState"):
    """Per-node decode sets for the next block; always admissible."""
    n = state.n
    if oracle.mode == "greedy":
        D = _greedy(witness, n)
    elif oracle.mode == "adversarial_heuristic":
        D = _adversarial(witness, n, state.C)
    elif oracle.mode == "exhaustive_adversarial":
        D = _exhaustive_worst(witness, n, state.C)
    else:
        D = _random(witness, n, oracle.rng)
    return D


# -- dynamics ----------------------------------------------------------------

@dataclass(frozen=True)
class SimState:
    b: int
    C: np.ndarray
    f: np.ndarray
    K: np.ndarray

    @property
    def n(self):
        return self.C.shape[0]

    @classmethod
    def initial(cls, n):
        C = np.array([1 << i for i in range(n)], dtype=np.int64)
        f = np.full((n, n), NONE, dtype=np.int64)
        np.fill_diagonal(f, 0)
        return cls(0, C, f, f.copy())

    def covered(self):
        return bool(np.all(self.C == full_mask(self.n)))


def step(state: SimState, D):
    C, f, K = kernels.cover_step(state.C, state.f, state.K, np.asarray(D, dtype=np.int64), state.b)
    return SimState(state.b + 1, C, f, K)


@dataclass
class Trace:
    n: int
    oracle: str
    seed: int | None
    block_unit: str
    coverage: np.ndarray          # (blocks+1, n)
    frontier: np.ndarray | None   # (blocks+1, n, n)
    knowledge: np.ndarray | None  # (blocks+1, n, n)
    completion_block: int | None

    @property
    def blocks(self):
        return self.coverage.shape[0] - 1

    @property
    def bound(self):
        return coverage_bound(self.n)


def simulate(witness, n, oracle: DecodeOracle, max_blocks, *, check_bound=True,
             stop_when_covered=False, record_frontiers=True, check_admissible=True,
             block_unit="block"):
    """Run the dynamics from the initial state under a witness map."""
    oracle.reset()
    state = SimState.initial(n)
    cov = [state.C]
    fr = [state.f] if record_frontiers else None
    kn = [state.K] if record_frontiers else None
    done = None
    for _ in range(max_blocks):
        D = decode_assignment(oracle, witness, state)
        if check_admissible and not is_admissible(witness, D, n):
            raise InadmissibleAssignment(f"{oracle.label()} produced {D.tolist()}")
        state = step(state, D)
        cov.append(state.C)
        if record_frontiers:
            fr.append(state.f)
            kn.append(state.K)
        if done is None and state.covered():
            done = state.b
            if stop_when_covered:
                break
    trace = Trace(n, oracle.label(), oracle.seed, block_unit, np.array(cov),
                  np.array(fr) if record_frontiers else None,
                  np.array(kn) if record_frontiers else None, done)
    if check_bound and max_blocks >= trace.bound:
        if done is None or done > trace.bound:
            raise CoverageBoundViolation(
                f"n={n}, oracle={oracle.label()}: coverage at block {done}, bound {trace.bound}")
    return trace


def run(model, rates, oracle: DecodeOracle, max_blocks, schedule=None, margin=DEFAULT_MARGIN,
        **kw):
    """Certify ``rates`` then simulate.  With a multi-phase schedule one step
    stands for one period of K blocks."""
    n = model.n
    if max_blocks < coverage_bound(n):
        raise ModelError(f"max_blocks={max_blocks} < coverage bound {coverage_bound(n)}")
    cert = check_feasible(rates, model, schedule, margin)
    w = witness_map(cert)
    unit = "group" if schedule is not None and schedule.K > 1 else "block"
    return simulate(w, n, oracle, max_blocks, block_unit=unit, **kw)


def exhaustive_coverage(witness, n, max_blocks=None):
    """Worst completion block over *every* admissible decode sequence.

    Breadth-first over the set of reachable coverage states; states that are
    already complete are dropped.  Returns ``(worst_block, incomplete)``
    where ``incomplete`` counts states still not covered at ``max_blocks``
    (default: the coverage bound).
    """
    if max_blocks is None:
        max_blocks = coverage_bound(n)
    assigns = admissible_assignments(witness, n)
    full = full_mask(n)
    level = SimState.initial(n).C[None, :]
    shifts = np.arange(n, dtype=np.int64) * n
    worst = 0
    for b in range(1, max_blocks + 1):
        nxt = kernels.expand_states(level, assigns)
        nxt = nxt[~np.all(nxt == full, axis=1)]
        worst = b
        if nxt.shape[0] == 0:
            return worst, 0
        keys = np.bitwise_or.reduce(nxt << shifts, axis=1)
        _, idx = np.unique(keys, return_index=True)
        level = nxt[idx]
    return worst + 1, int(level.shape[0])


# -- delays ------------------------------------------------------------------

@dataclass
class DelayLedger:
    """Decode blocks ``D[i, j, m]`` (first block whose end sees K_i[j] >= m);
    -1 marks messages not yet decoded when the trace ends."""

    decode_block: np.ndarray

    @classmethod
    def from_trace(cls, trace: Trace):
        if trace.knowledge is None:
            raise ModelError("trace was recorded without frontiers")
        Kh = trace.knowledge
        T = Kh.shape[0]
        msgs = np.arange(T)
        n = trace.n
        D = np.empty((n, n, T), dtype=np.int64)
        for i in range(n):
            for j in range(n):
                d = np.searchsorted(Kh[:, i, j], msgs, side="left")
                D[i, j] = np.where(d >= T, -1, d)
        return cls(D)

    def delays(self):
        m = np.arange(self.decode_block.shape[2])
        return np.where(self.decode_block >= 0, self.decode_block - m, -1)


@dataclass
class DelaySummary:
    horizon: int
    sup_delay: int
    pair_sup: np.ndarray
    early_sup: int
    late_sup: int
    unresolved: int

    @property
    def stabilized(self):
        return self.unresolved == 0 and self.early_sup == self.late_sup

    def to_dict(self):
        return {
            "horizon": self.horizon,
            "sup_delay": self.sup_delay,
            "pair_sup_delay": self.pair_sup.tolist(),
            "window_sup_early": self.early_sup,
            "window_sup_late": self.late_sup,
            "unresolved_messages": self.unresolved,
            "stabilized": self.stabilized,
        }


def measure_delays(trace: Trace, horizon):
    """Sup decode delay over messages ``0..horizon`` and a stationarity check:
    the sup over messages in [h/2, h] must equal the sup over [h/4, h/2]."""
    if trace.completion_block is None:
        raise ModelError("coverage never completed; delays are unbounded")
    if horizon < 4 or horizon > trace.blocks:
        raise ModelError(f"horizon must lie in [4, {trace.blocks}]")
    dl = DelayLedger.from_trace(trace).delays()[:, :, :horizon + 1]
    unresolved_mask = dl < 0
    pair_sup = np.where(unresolved_mask, 0, dl).max(axis=2)
    lo, mid = horizon // 4, horizon // 2
    early = dl[:, :, lo:mid + 1]
    late = dl[:, :, mid:horizon + 1]
    return DelaySummary(
        horizon=horizon,
        sup_delay=int(pair_sup.max()),
        pair_sup=pair_sup,
        early_sup=int(early.max()),
        late_sup=int(late.max()),
        unresolved=int(np.count_nonzero(unresolved_mask)),
    )


# -- export ------------------------------------------------------------------

TRACE_COLUMNS = ("block", "node", "coverage_mask", "min_frontier", "max_delay_so_far")


def trace_csv(trace: Trace):
    """One row per (block, node); masks use bit i-1 for node i."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TRACE_COLUMNS)
    T = trace.blocks
    running = None
    if trace.knowledge is not None:
        D = DelayLedger.from_trace(trace).decode_block
        dl = np.where(D >= 0, D - np.arange(D.shape[2]), -1)
        running = np.full((T + 1, trace.n), 0, dtype=np.int64)
        for i in range(trace.n):
            for j in range(trace.n):
                blocks = D[i, j]
                ok = blocks >= 0
                for blk, d in zip(blocks[ok], dl[i, j][ok]):
                    running[blk, i] = max(running[blk, i], d)
        running = np.maximum.accumulate(running, axis=0)
    for b in range(T + 1):
        for i in range(trace.n):
            mf = int(trace.frontier[b, i].min()) if trace.frontier is not None else ""
            md = int(running[b, i]) if running is not None else ""
            w.writerow([b, i + 1, int(trace.coverage[b, i]), mf, md])
    return buf.getvalue()


def trace_summary(trace: Trace, delays: DelaySummary | None = None):
    cov = trace.coverage
    monotone = bool(np.all((cov[1:] & cov[:-1]) == cov[:-1]))
    out = {
        "kind": "simulation_summary",
        "n": trace.n,
        "oracle": trace.oracle,
        "seed": trace.seed,
        "block_unit": trace.block_unit,
        "blocks": trace.blocks,
        "coverage_bound": trace.bound,
        "completion_block": trace.completion_block,
        "bound_ok": trace.completion_block is not None and trace.completion_block <= trace.bound,
        "coverage_monotone": monotone,
    }
    if delays is not None:
        out["delays"] = delays.to_dict()
    return out


def summary_json(summary):
    return json.dumps(summary, indent=2, sort_keys=True)
