"""Backend switch for the compiled kernels.

Set ``CHAINLP_DISABLE_JIT=1`` to run the pure numpy/Python fallbacks even when
numba is importable.  The flag is read once, at import time.
"""

import os

try:
    import numba
except ImportError:  # pragma: no cover - numba is a hard dependency in practice
    numba = None

JIT_DISABLED = os.environ.get("CHAINLP_DISABLE_JIT", "").strip().lower() not in (
    "",
    "0",
    "false",
    "no",
)
HAS_NUMBA = numba is not None
JIT_ENABLED = HAS_NUMBA and not JIT_DISABLED


def njit(fn):
    """Compile ``fn`` with numba when available; otherwise return it unchanged.

    Compilation ignores the disable flag so the benchmark can still time the
    compiled path; the flag only controls which path the solvers dispatch to.
    """
    if not HAS_NUMBA:
        return fn
    return numba.njit(cache=True, nogil=True)(fn)


def backend_name():
    return "numba" if JIT_ENABLED else "numpy"
