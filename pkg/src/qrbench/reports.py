from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

SANDWICH_TOL = 1e-9


@dataclass
class BoundReport:
    """Lower/upper bounds on the two-way assisted capacities of one channel.

    ``upper`` may be ``math.inf``. ``exact`` is set when the bounds coincide
    within 1e-9. ``meta`` carries diagnostics such as unclamped values.
    """

    channel_id: str
    lower: float
    upper: float
    exact: float | None = None
    eb: bool = False
    method: str = ""
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.exact is None and _coincide(self.lower, self.upper):
            self.exact = self.upper
        self.check()

    def check(self) -> None:
        if self.lower > self.upper + SANDWICH_TOL:
            raise AssertionError(f"{self.channel_id}: lower {self.lower} exceeds upper {self.upper}")
        if self.exact is not None and not (
            _coincide(self.exact, self.lower) and _coincide(self.exact, self.upper)
        ):
            raise AssertionError(f"{self.channel_id}: exact value does not match both bounds")
        if self.eb and self.upper != 0:
            raise AssertionError(f"{self.channel_id}: entanglement-breaking but upper = {self.upper}")

    def to_dict(self) -> dict:
        return {
            "channel": self.channel_id,
            "lower": format_number(self.lower),
            "upper": format_number(self.upper),
            "exact": None if self.exact is None else format_number(self.exact),
            "eb": self.eb,
            "method": self.method,
            "meta": jsonable(self.meta),
        }


def _coincide(a: float, b: float) -> bool:
    if math.isinf(a) or math.isinf(b):
        return a == b
    return abs(a - b) <= SANDWICH_TOL


def format_number(x):
    """12 significant digits; infinities become the string ``"inf"``."""
    if x is None:
        return None
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return float(f"{x:.12g}")


def jsonable(obj):
    """Recursively convert numbers and arrays into JSON-safe values."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return format_number(obj)
    if isinstance(obj, complex):
        return [format_number(obj.real), format_number(obj.imag)]
    return obj


def format_csv(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "1" if x else "0"
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.12g}"
