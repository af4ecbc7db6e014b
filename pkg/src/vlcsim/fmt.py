"""Number formatting shared by every CSV writer."""

import math


def fmt_num(v: float) -> str:
    """9 significant digits; scientific notation below 1e-3 in magnitude."""
    v = float(v)
    if v == 0.0:
        return "0"
    if not math.isfinite(v):
        raise ValueError(f"cannot format non-finite value {v!r}")
    if abs(v) < 1e-3:
        return f"{v:.8e}"
    return f"{v:.9g}"


def fmt_sci(v: float) -> str:
    return f"{float(v):.8e}"
