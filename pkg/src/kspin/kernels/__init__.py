"""Mode-sweep kernel selection.

The compiled Cython core is preferred; a vectorized numpy fallback with the
same contract is used when the extension is unavailable or when the
environment variable KSPIN_PURE is set.  `IMPL` records which one is live.
"""

from __future__ import annotations

import os

from . import pure

# both primes are 3 mod 4, so GF(p^2) arithmetic is a field
PRIMES = (2147483647, 2147483563)

pure_modp_nullities = pure.modp_nullities

if os.environ.get("KSPIN_PURE"):
    IMPL = "pure"
    modp_nullities = pure.modp_nullities
else:
    try:
        from ._core import modp_nullities as _compiled

        IMPL = "compiled"
        modp_nullities = _compiled
    except ImportError:
        IMPL = "pure"
        modp_nullities = pure.modp_nullities

__all__ = ["IMPL", "PRIMES", "modp_nullities", "pure_modp_nullities"]
