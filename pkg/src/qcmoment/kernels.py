"""Backend selection for the exact elimination kernels.

The compiled ``_kernels`` extension is used when it was built; otherwise the
pure-Python module is used. Setting ``QCMOMENT_PURE_PYTHON=1`` forces the
fallback.
"""
import os

BACKEND = "python"

if os.environ.get("QCMOMENT_PURE_PYTHON", "") not in ("", "0"):
    from ._kernels_py import (  # noqa: F401
        bareiss_rank, matmul, matvec, rank, rref, solve_linear, sym_inertia,
    )
else:
    try:
        from ._kernels import (  # noqa: F401
            bareiss_rank, matmul, matvec, rank, rref, solve_linear, sym_inertia,
        )
        BACKEND = "compiled"
    except ImportError:
        from ._kernels_py import (  # noqa: F401
            bareiss_rank, matmul, matvec, rank, rref, solve_linear, sym_inertia,
        )

__all__ = [
    "BACKEND", "bareiss_rank", "matmul", "matvec", "rank", "rref",
    "solve_linear", "sym_inertia",
]
