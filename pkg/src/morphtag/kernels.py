"""Backend selection for the decoding and forward-backward kernels.

The compiled extension is preferred when present; the pure-Python module is
the fallback and the reference.  Both produce bit-identical results.  Set
``MORPHTAG_PURE_PYTHON=1`` to force the fallback (used by the benchmark and
the equivalence tests).
"""

import os

if os.environ.get("MORPHTAG_PURE_PYTHON"):
    from . import _kernels_py as _impl
    COMPILED = False
else:
    try:
        from . import _speedups as _impl  # type: ignore[attr-defined]
        COMPILED = True
    except ImportError:
        from . import _kernels_py as _impl
        COMPILED = False

viterbi_kernel = _impl.viterbi_kernel
forward_backward_kernel = _impl.forward_backward_kernel


def backend_name() -> str:
    return "compiled" if COMPILED else "pure-python"
