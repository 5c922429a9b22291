"""Backend selection for the hot numerical kernels.

The compiled Cython core is preferred when present; the numpy fallback is
selected otherwise.  ``QMANIN_BACKEND=numpy`` forces the fallback (useful
for benchmarking); ``QMANIN_BACKEND=cython`` insists on the compiled core
and fails loudly when it is missing.
"""

from __future__ import annotations

import os

_requested = os.environ.get("QMANIN_BACKEND", "").strip().lower()

if _requested == "numpy":
    from . import _pykernels as _impl
elif _requested == "cython":
    from . import _ckernels as _impl  # type: ignore[no-redef]
else:
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]
    except ImportError:
        from . import _pykernels as _impl  # type: ignore[no-redef]

BACKEND = _impl.NAME

csum_logpolar = _impl.csum_logpolar
log_power_sums = _impl.log_power_sums
power_matrix = _impl.power_matrix
weighted_gram = _impl.weighted_gram


def backend_name() -> str:
    """Name of the kernel backend active in this process."""
    return BACKEND
