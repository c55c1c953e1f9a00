"""Enumeration kernel selection.

The compiled kernel works over int64 and is picked automatically when the
extension built and the instance provably fits; the pure-Python kernel
handles everything else, including big integers.  LATTICEFLOW_KERNEL
forces a choice: "py", "cy", or "auto" (default).
"""

from __future__ import annotations

import os
from typing import Optional, Sequence

from . import _enum_py

try:
    from . import _enum_cy  # type: ignore[attr-defined]
except ImportError:
    _enum_cy = None

# Intermediate kernel quantities are sums of a few bounds and demands;
# capping their magnitudes' total keeps every int64 operation safe.
_INT64_SAFE = 2**60


def _mode() -> str:
    mode = os.environ.get("LATTICEFLOW_KERNEL", "auto")
    if mode not in ("auto", "py", "cy"):
        raise ValueError(f"LATTICEFLOW_KERNEL must be auto, py, or cy, not {mode!r}")
    return mode


def _fits_int64(lo: Sequence[int], hi: Sequence[int], demand: Sequence[int]) -> bool:
    total = sum(max(abs(a), abs(b)) for a, b in zip(lo, hi)) + sum(abs(d) for d in demand)
    return total < _INT64_SAFE


def active_kernel(
    lo: Optional[Sequence[int]] = None,
    hi: Optional[Sequence[int]] = None,
    demand: Optional[Sequence[int]] = None,
) -> str:
    """Which kernel a call with these arguments would use."""
    mode = _mode()
    if mode == "py":
        return "py"
    if mode == "cy":
        if _enum_cy is None:
            raise RuntimeError("compiled kernel requested but not built")
        return "cy"
    if _enum_cy is None:
        return "py"
    if lo is not None and not _fits_int64(lo, hi or (), demand or ()):
        return "py"
    return "cy"


def enumerate_flows(
    tails: Sequence[int],
    heads: Sequence[int],
    lo: Sequence[int],
    hi: Sequence[int],
    demand: Sequence[int],
) -> list[tuple[int, ...]]:
    kernel = active_kernel(lo, hi, demand)
    if kernel == "cy":
        return _enum_cy.enumerate_flows(
            list(tails), list(heads), list(lo), list(hi), list(demand)
        )
    return _enum_py.enumerate_flows(tails, heads, lo, hi, demand)
