"""Machine-readable verdicts returned by every check."""

from __future__ import annotations

import json
import numbers
import time
from dataclasses import asdict, dataclass, field
from typing import Any

import numpy as np


@dataclass
class Report:
    """Outcome of a named check.

    ``lambda_min`` is the worst (smallest) eigenvalue seen by an eigenvalue
    based check and ``None`` for checks that measure a defect norm instead;
    those put the defect in ``details``.
    """

    check: str
    verdict: bool
    lambda_min: float | None = None
    witness: Any = None
    tolerances: dict[str, float] = field(default_factory=dict)
    seed: int | None = None
    runtime_ms: float = 0.0
    details: dict[str, Any] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return bool(self.verdict)

    def to_dict(self) -> dict[str, Any]:
        return jsonable(asdict(self))

    def to_json(self, **kwargs: Any) -> str:
        kwargs.setdefault("sort_keys", True)
        kwargs.setdefault("indent", 2)
        return json.dumps(self.to_dict(), **kwargs)


def jsonable(obj: Any) -> Any:
    """Recursively convert numpy values, rationals and tuples to JSON types."""
    if hasattr(obj, "to_json_obj"):
        return obj.to_json_obj()
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, numbers.Integral):
        return int(obj)
    if isinstance(obj, numbers.Rational):
        return [int(obj.numerator), int(obj.denominator)]
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    return obj


def elapsed_ms(start: float) -> float:
    """Milliseconds since ``start`` (a ``time.perf_counter()`` reading)."""
    return (time.perf_counter() - start) * 1e3
