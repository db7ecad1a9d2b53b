"""Hot numeric kernels.

Two interchangeable implementations live side by side: explicit loops in
``_loops`` (jitted with numba) and array code in ``_vectorized``.  The
module-level names below resolve to one of them according to
``GREEDYRELAY_PURE_NUMPY``; both stay importable for equivalence tests and
benchmarks.
"""
from .. import _accel
from . import _loops, _vectorized

KERNELS = ("cmi_sum", "awgn_fd_table", "awgn_hd_table", "feasibility_scan",
           "cover_step", "expand_states")

IMPLEMENTATIONS = {"numba": _loops, "numpy": _vectorized}
BACKEND = _accel.backend_name()
_active = IMPLEMENTATIONS[BACKEND]

cmi_sum = _active.cmi_sum
awgn_fd_table = _active.awgn_fd_table
awgn_hd_table = _active.awgn_hd_table
feasibility_scan = _active.feasibility_scan
cover_step = _active.cover_step
expand_states = _active.expand_states

__all__ = ["BACKEND", "IMPLEMENTATIONS", "KERNELS", *KERNELS]
