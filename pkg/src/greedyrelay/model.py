"""Channel, schedule and rate types shared by the rest of the package.

Nodes are indexed ``0..n-1`` internally.  Anything user facing (configs,
reports, CSV) numbers them ``1..n``.  Subsets of nodes are int bitmasks
(bit ``i`` set means node ``i`` is a member); :class:`NodeSet` is a thin
wrapper for code that wants set semantics.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

ROW_TOL = 1e-12
DEFAULT_TABLE_GUARD = 10**7
MAX_NODES = 20


class ModelError(ValueError):
    """Raised when a model, schedule or rate vector fails validation."""


class GuardExceeded(ModelError):
    """A size guard (table entries, subset enumeration, search space) tripped."""

    def __init__(self, guard, message):
        super().__init__(f"{guard}: {message}")
        self.guard = guard


# -- node sets ---------------------------------------------------------------

def full_mask(n):
    return (1 << n) - 1


def complement(mask, n):
    return full_mask(n) & ~mask


def members(mask):
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def mask_of(nodes: Iterable[int]):
    m = 0
    for i in nodes:
        m |= 1 << int(i)
    return m


def is_proper_nonempty(mask, n):
    return mask != 0 and mask != full_mask(n)


def proper_subsets(n):
    """All proper nonempty masks in ascending order."""
    return range(1, full_mask(n))


@dataclass(frozen=True)
class NodeSet:
    mask: int
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ModelError("NodeSet needs n >= 1")
        if self.mask < 0 or self.mask > full_mask(self.n):
            raise ModelError(f"mask {self.mask} outside universe of {self.n} nodes")

    @classmethod
    def of(cls, n, nodes, one_based=False):
        shift = 1 if one_based else 0
        idx = [int(i) - shift for i in nodes]
        if any(i < 0 or i >= n for i in idx):
            raise ModelError(f"node index out of range in {list(nodes)}")
        return cls(mask_of(idx), n)

    def complement(self):
        return NodeSet(complement(self.mask, self.n), self.n)

    def __contains__(self, i):
        return bool((self.mask >> i) & 1)

    def __or__(self, other):
        return NodeSet(self.mask | other.mask, self.n)

    def __and__(self, other):
        return NodeSet(self.mask & other.mask, self.n)

    def __iter__(self):
        return iter(members(self.mask))

    def __len__(self):
        return bin(self.mask).count("1")

    def is_proper_nonempty(self):
        return is_proper_nonempty(self.mask, self.n)

    def one_based(self):
        return [i + 1 for i in members(self.mask)]


# -- channel models ----------------------------------------------------------

def _frozen(a, dtype=float):
    arr = np.array(a, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class DmcNetwork:
    """Discrete memoryless network channel.

    ``receiver_channels[i]`` is the dense table p(y_i | x_1..x_n) with one row
    per joint input configuration.  Rows are in C order over the per-node
    alphabets, node 0 most significant, so
    ``table.reshape(*input_alphabet_sizes, -1)`` indexes inputs by node.
    """

    n: int
    input_alphabet_sizes: tuple
    receiver_channels: tuple
    table_guard: int = DEFAULT_TABLE_GUARD

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.input_alphabet_sizes)
        object.__setattr__(self, "input_alphabet_sizes", sizes)
        rows = int(np.prod(sizes, dtype=np.int64)) if sizes else 0
        tables = tuple(_frozen(t) for t in self.receiver_channels)
        object.__setattr__(self, "receiver_channels", tables)
        total = sum(t.size for t in tables)
        if total > self.table_guard or rows > self.table_guard:
            raise GuardExceeded("table_guard", f"{max(total, rows)} entries > {self.table_guard}")

    @property
    def n_configs(self):
        return int(np.prod(self.input_alphabet_sizes, dtype=np.int64))

    def output_alphabet_size(self, i):
        return self.receiver_channels[i].shape[1]

    def tensor(self, i):
        """Receiver ``i``'s table shaped ``(|X_1|, ..., |X_n|, |Y_i|)``."""
        t = self.receiver_channels[i]
        return t.reshape(*self.input_alphabet_sizes, t.shape[1])

    @classmethod
    def from_joint(cls, joint, input_alphabet_sizes, table_guard=DEFAULT_TABLE_GUARD):
        """Build from a full joint p(y_1..y_n | x) shaped ``(*|X|, *|Y|)``."""
        joint = np.asarray(joint, dtype=float)
        n = len(input_alphabet_sizes)
        if joint.size > table_guard:
            raise GuardExceeded("table_guard", f"{joint.size} entries > {table_guard}")
        chans = [marginalize_joint(joint, i, input_alphabet_sizes) for i in range(n)]
        return cls(n, tuple(input_alphabet_sizes), tuple(chans), table_guard)


def marginalize_joint(joint, receiver, input_alphabet_sizes=None):
    """Receiver channel p(y_i | x) from a joint p(y_1..y_n | x).

    ``joint`` is either shaped ``(*|X|, *|Y|)`` with ``input_alphabet_sizes``
    given, or already flattened to ``(prod|X|, *|Y|)``.
    """
    joint = np.asarray(joint, dtype=float)
    if input_alphabet_sizes is not None:
        n_in = len(input_alphabet_sizes)
        rows = int(np.prod(input_alphabet_sizes, dtype=np.int64))
        joint = joint.reshape((rows,) + joint.shape[n_in:])
    n_out = joint.ndim - 1
    if not 0 <= receiver < n_out:
        raise ModelError(f"receiver {receiver} out of range for {n_out} outputs")
    axes = tuple(1 + j for j in range(n_out) if j != receiver)
    return joint.sum(axis=axes)


@dataclass(frozen=True)
class InputDistributions:
    """Product input law: one pmf per node."""

    pmfs: tuple

    def __post_init__(self):
        object.__setattr__(self, "pmfs", tuple(_frozen(p) for p in self.pmfs))

    @classmethod
    def uniform(cls, sizes):
        return cls(tuple(np.full(s, 1.0 / s) for s in sizes))

    def __len__(self):
        return len(self.pmfs)


@dataclass(frozen=True)
class AwgnNetwork:
    """Gaussian network. ``gain_sq[i, j]`` is |g_{i,j}|^2 from node i to node j.

    ``powers`` are per-symbol averages in full-duplex use and averages over
    transmitting slots in half-duplex use.
    """

    n: int
    gain_sq: np.ndarray
    powers: np.ndarray
    noise_power: float

    def __post_init__(self):
        object.__setattr__(self, "gain_sq", _frozen(self.gain_sq))
        object.__setattr__(self, "powers", _frozen(self.powers))
        object.__setattr__(self, "noise_power", float(self.noise_power))

    @classmethod
    def from_complex_gains(cls, gains, powers, noise_power):
        g = np.asarray(gains)
        if g.ndim == 3 and g.shape[-1] == 2:
            g = g[..., 0] + 1j * g[..., 1]
        return cls(len(powers), np.abs(g) ** 2, powers, noise_power)


@dataclass(frozen=True)
class Schedule:
    """Periodic operation over K phases.

    Each phase carries a block length and either an
    :class:`InputDistributions` (discrete case) or a transmitter mask
    (half-duplex case; the receivers are the complement).
    """

    lengths: tuple
    input_distributions: tuple | None = None
    transmitters: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "lengths", tuple(int(x) for x in self.lengths))
        if self.transmitters is not None:
            object.__setattr__(self, "transmitters", tuple(int(t) for t in self.transmitters))
        if self.input_distributions is not None:
            object.__setattr__(self, "input_distributions", tuple(self.input_distributions))

    @property
    def K(self):
        return len(self.lengths)

    @property
    def weights(self):
        total = sum(self.lengths)
        return np.array([L / total for L in self.lengths])

    @classmethod
    def single(cls, dists):
        return cls((1,), input_distributions=(dists,))


def as_rates(rates, n=None):
    r = np.asarray(rates, dtype=float).reshape(-1)
    if n is not None and r.shape[0] != n:
        raise ModelError(f"rate vector has length {r.shape[0]}, expected {n}")
    if not np.all(np.isfinite(r)):
        raise ModelError("rates must be finite")
    if np.any(r < 0):
        raise ModelError("rates must be nonnegative")
    return r


# -- validation --------------------------------------------------------------

def _check_pmf_rows(table, what, out):
    if not np.all(np.isfinite(table)):
        out.append(f"{what}: non-finite entry")
        return
    if np.any(table < 0) or np.any(table > 1):
        out.append(f"{what}: entry outside [0, 1]")
    sums = table.sum(axis=-1)
    bad = np.abs(sums - 1.0) > ROW_TOL
    if np.any(bad):
        out.append(f"{what}: row sum != 1 (worst {float(sums[bad][0]):.17g})")


def _validate_dmc(m: DmcNetwork):
    out = []
    if m.n < 2:
        out.append("n must be >= 2")
    if len(m.input_alphabet_sizes) != m.n:
        out.append("input_alphabet_sizes length != n")
    if any(s < 1 for s in m.input_alphabet_sizes):
        out.append("alphabet sizes must be positive")
    if len(m.receiver_channels) != m.n:
        out.append("need one receiver channel per node")
    rows = m.n_configs
    for i, t in enumerate(m.receiver_channels):
        if t.ndim != 2 or t.shape[0] != rows or t.shape[1] < 1:
            out.append(f"receiver {i + 1}: table shape {t.shape}, expected ({rows}, |Y|)")
            continue
        _check_pmf_rows(t, f"receiver {i + 1}", out)
    return out


def _validate_dists(d: InputDistributions, sizes, where=""):
    out = []
    if len(d.pmfs) != len(sizes):
        out.append(f"{where}need {len(sizes)} input pmfs, got {len(d.pmfs)}")
        return out
    for i, (p, s) in enumerate(zip(d.pmfs, sizes)):
        if p.shape != (s,):
            out.append(f"{where}node {i + 1}: pmf length {p.shape} != alphabet size {s}")
            continue
        _check_pmf_rows(p, f"{where}node {i + 1} pmf", out)
    return out


def _validate_awgn(m: AwgnNetwork):
    out = []
    if m.n < 2:
        out.append("n must be >= 2")
    if m.gain_sq.shape != (m.n, m.n):
        out.append(f"gain_sq shape {m.gain_sq.shape} != ({m.n}, {m.n})")
    else:
        off = m.gain_sq[~np.eye(m.n, dtype=bool)]
        if not np.all(np.isfinite(off)):
            out.append("gain_sq entries must be finite")
        elif np.any(off < 0):
            out.append("gain_sq entries must be >= 0")
    if m.powers.shape != (m.n,):
        out.append(f"powers length {m.powers.shape} != {m.n}")
    elif not np.all(np.isfinite(m.powers)) or np.any(m.powers < 0):
        out.append("powers must be finite and >= 0")
    if not np.isfinite(m.noise_power) or m.noise_power <= 0:
        out.append("noise must be positive")
    return out


def _validate_schedule(s: Schedule, n=None, sizes=None):
    out = []
    if s.K < 1:
        out.append("schedule needs K >= 1 phases")
        return out
    if any(L < 1 for L in s.lengths):
        out.append("block lengths must be >= 1")
    elif abs(float(np.sum(s.weights)) - 1.0) > ROW_TOL:
        out.append("phase weights do not sum to 1")
    if (s.transmitters is None) == (s.input_distributions is None):
        out.append("schedule needs exactly one of transmitters / input_distributions")
    if s.transmitters is not None:
        if len(s.transmitters) != s.K:
            out.append("one transmitter set per phase required")
        if n is not None:
            for k, T in enumerate(s.transmitters):
                if T < 0 or T > full_mask(n):
                    out.append(f"phase {k + 1}: transmitter mask outside node range")
                elif T == full_mask(n):
                    out.append(f"phase {k + 1}: every node transmits, no receiver left")
    if s.input_distributions is not None:
        if len(s.input_distributions) != s.K:
            out.append("one input distribution family per phase required")
        elif sizes is not None:
            for k, d in enumerate(s.input_distributions):
                out.extend(_validate_dists(d, sizes, f"phase {k + 1}: "))
    return out


def validate(model, schedule=None):
    """List violated invariants; an empty list means valid. Never raises."""
    if isinstance(model, DmcNetwork):
        out = _validate_dmc(model)
        if schedule is not None and not out:
            out += _validate_schedule(schedule, model.n, model.input_alphabet_sizes)
        return out
    if isinstance(model, AwgnNetwork):
        out = _validate_awgn(model)
        if schedule is not None:
            out += _validate_schedule(schedule, model.n)
        return out
    if isinstance(model, Schedule):
        return _validate_schedule(model)
    if isinstance(model, InputDistributions):
        return [f"node {i + 1} pmf: row sum != 1" for i, p in enumerate(model.pmfs)
                if abs(float(p.sum()) - 1.0) > ROW_TOL]
    return [f"unsupported model type {type(model).__name__}"]


def require_valid(model, schedule=None):
    problems = validate(model, schedule)
    if problems:
        raise ModelError("; ".join(problems))


# -- relabeling --------------------------------------------------------------

def permute_mask(mask, perm):
    """Image of ``mask`` when old node ``i`` becomes new node ``perm[i]``."""
    out = 0
    for i in members(mask):
        out |= 1 << int(perm[i])
    return out


def permute(model, perm, schedule=None, rates=None):
    """Relabel nodes (old ``i`` -> new ``perm[i]``) consistently everywhere."""
    perm = np.asarray(perm, dtype=np.int64)
    inv = np.argsort(perm)
    if isinstance(model, AwgnNetwork):
        new = AwgnNetwork(model.n, model.gain_sq[np.ix_(inv, inv)], model.powers[inv],
                          model.noise_power)
    else:
        sizes = tuple(model.input_alphabet_sizes[i] for i in inv)
        chans = []
        for new_i in range(model.n):
            t = model.tensor(int(inv[new_i]))
            t = np.transpose(t, tuple(int(a) for a in inv) + (model.n,))
            chans.append(t.reshape(-1, t.shape[-1]))
        new = DmcNetwork(model.n, sizes, tuple(chans), model.table_guard)
    new_sched = None
    if schedule is not None:
        if schedule.transmitters is not None:
            new_sched = Schedule(schedule.lengths,
                                 transmitters=tuple(permute_mask(T, perm) for T in schedule.transmitters))
        else:
            fams = tuple(InputDistributions(tuple(d.pmfs[i] for i in inv))
                         for d in schedule.input_distributions)
            new_sched = Schedule(schedule.lengths, input_distributions=fams)
    new_rates = None if rates is None else np.asarray(rates, dtype=float)[inv]
    return new, new_sched, new_rates


# -- config ingestion --------------------------------------------------------

MODEL_TYPES = ("dmc", "awgn_fd", "awgn_hd")


@dataclass(frozen=True)
class LoadedModel:
    kind: str
    model: object
    schedule: Schedule | None = None
    rates: np.ndarray | None = None
    extra: dict = field(default_factory=dict)


def _nodes_to_mask(nodes, n, where):
    try:
        return NodeSet.of(n, nodes, one_based=True).mask
    except ModelError as e:
        raise ModelError(f"{where}: {e}") from None


def model_from_config(cfg: dict) -> LoadedModel:
    """Construct model, schedule and rates from a parsed config dict.

    Structural checks are left to the JSON schema in :mod:`greedyrelay.schema`;
    this raises :class:`ModelError` for semantic problems.
    """
    kind = cfg.get("type")
    if kind not in MODEL_TYPES:
        raise ModelError(f"type: expected one of {MODEL_TYPES}, got {kind!r}")
    sched_cfg = cfg.get("schedule")
    schedule = None
    if kind == "dmc":
        sizes = tuple(cfg["input_alphabet_sizes"])
        guard = int(cfg.get("table_guard", DEFAULT_TABLE_GUARD))
        if "joint" in cfg:
            model = DmcNetwork.from_joint(cfg["joint"], sizes, guard)
        else:
            model = DmcNetwork(len(sizes), sizes, tuple(cfg["receiver_channels"]), guard)
        if sched_cfg is not None:
            fams = tuple(InputDistributions(tuple(f)) for f in sched_cfg["input_distributions"])
            lengths = sched_cfg.get("lengths", [1] * len(fams))
            schedule = Schedule(tuple(lengths), input_distributions=fams)
        else:
            dists = cfg.get("input_distributions")
            dists = InputDistributions.uniform(sizes) if dists is None else InputDistributions(tuple(dists))
            schedule = Schedule.single(dists)
    else:
        n = int(cfg["n"])
        if "gains" in cfg:
            model = AwgnNetwork.from_complex_gains(cfg["gains"], cfg["powers"], cfg["noise_power"])
        else:
            model = AwgnNetwork(n, cfg["gain_sq"], cfg["powers"], cfg["noise_power"])
        if model.n != n:
            raise ModelError(f"n: {n} does not match {model.n} powers")
        if kind == "awgn_hd" and sched_cfg is not None:
            tx = tuple(_nodes_to_mask(t, n, f"schedule.transmitters[{k}]")
                       for k, t in enumerate(sched_cfg["transmitters"]))
            lengths = sched_cfg.get("lengths", [1] * len(tx))
            schedule = Schedule(tuple(lengths), transmitters=tx)
    problems = validate(model, schedule)
    if problems:
        raise ModelError("; ".join(problems))
    rates = None
    if cfg.get("rates") is not None:
        rates = as_rates(cfg["rates"], model.n)
    return LoadedModel(kind, model, schedule, rates, {k: v for k, v in cfg.items()})
