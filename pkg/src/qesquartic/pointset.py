"""Finite multisets of complex points with metadata and deterministic export."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np


def sort_points(points):
    """Lexicographic (Re, Im) ordering; the package-wide export order."""
    pts = np.asarray(points, dtype=complex)
    order = np.lexsort((pts.imag, pts.real))
    return pts[order]


@dataclass
class PointSet:
    """A finite multiset of complex points plus provenance metadata."""

    points: np.ndarray
    label: str = ""
    scale: float | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=complex)

    def __len__(self):
        return len(self.points)

    def sorted(self) -> "PointSet":
        return PointSet(sort_points(self.points), self.label, self.scale, dict(self.meta))

    def scaled(self, factor: float, label: str | None = None) -> "PointSet":
        return PointSet(
            self.points / factor,
            label if label is not None else self.label,
            factor,
            dict(self.meta),
        )

    def max_modulus(self) -> float:
        return float(np.max(np.abs(self.points))) if len(self.points) else 0.0

    def to_csv(self) -> str:
        pts = sort_points(self.points)
        lines = ["re,im"]
        for z in pts:
            lines.append(f"{float(z.real)!r},{float(z.imag)!r}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        pts = sort_points(self.points)
        payload = {
            "label": self.label,
            "scale": self.scale,
            "meta": _jsonable(self.meta),
            "points": [[float(z.real), float(z.imag)] for z in pts],
        }
        return json.dumps(payload, sort_keys=True, indent=1) + "\n"

    def write_csv(self, path):
        with open(path, "w") as fh:
            fh.write(self.to_csv())

    def write_json(self, path):
        with open(path, "w") as fh:
            fh.write(self.to_json())


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in sorted(obj.items())}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    return obj
