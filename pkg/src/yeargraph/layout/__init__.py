from yeargraph.layout.engine import (
    LayoutParams,
    LayoutRun,
    LayoutState,
    fa2_step,
    initial_layout,
    move_pinned,
    run_layout,
)
from yeargraph.layout.kernels import USING_NUMBA

__all__ = [
    "LayoutParams",
    "LayoutRun",
    "LayoutState",
    "USING_NUMBA",
    "fa2_step",
    "initial_layout",
    "move_pinned",
    "run_layout",
]
