"""String forms of exact and multiprecision values that round-trip."""

from __future__ import annotations

import json
import os
import tempfile
from fractions import Fraction


def real_str(x) -> str:
    """Full-precision decimal string for an mpf (or exact string for ints/Fractions)."""
    if isinstance(x, (int, Fraction)):
        return str(x)
    if hasattr(x, "context") and hasattr(x, "_mpf_"):
        ctx = x.context
        if ctx.isinf(x) or ctx.isnan(x):
            return str(x)
        digits = int(ctx.prec * 0.30103) + 3
        return ctx.nstr(x, digits)
    if hasattr(x, "_mpc_"):
        return f"{real_str(x.real)}{'+' if x.imag >= 0 else '-'}{real_str(abs(x.imag))}j"
    return repr(x)


def to_jsonable(obj):
    """Recursively convert results to JSON-compatible values."""
    if hasattr(obj, "to_json"):
        return to_jsonable(obj.to_json())
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return obj if abs(obj) < 2**53 else str(obj)
    if isinstance(obj, float):
        return obj
    return real_str(obj)


def atomic_write(path: str, data: str | bytes) -> None:
    """Write via a temporary file in the same directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        mode = "wb" if isinstance(data, bytes) else "w"
        with os.fdopen(fd, mode) as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise


def dumps(obj) -> str:
    return json.dumps(to_jsonable(obj), indent=2, sort_keys=False)
