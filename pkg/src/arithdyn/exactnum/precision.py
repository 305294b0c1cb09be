"""Per-precision mpmath contexts.

Every floating computation runs in a context obtained from ``context(prec)``
rather than through ``mpmath.mp``, so that changing the working precision
never touches process-wide state.  Cached contexts must not be mutated.
"""

from functools import lru_cache

import mpmath

DEFAULT_PREC = 256


@lru_cache(maxsize=64)
def context(prec: int = DEFAULT_PREC) -> mpmath.ctx_mp.MPContext:
    ctx = mpmath.MPContext()
    ctx.prec = int(prec)
    return ctx


def ulp(prec: int):
    """Unit roundoff ``2**(1 - prec)`` as an mpf at that precision."""
    ctx = context(prec)
    return ctx.ldexp(ctx.mpf(1), 1 - int(prec))
