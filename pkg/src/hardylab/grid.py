"""Uniform symmetric grids and complex samples living on them."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Callable

import numpy as np

from .exceptions import GridError

DEFAULT_N = 4096
DEFAULT_EXTENT = 12.0


@dataclass(frozen=True)
class Grid:
    """Uniform grid ``x_i = (i - n/2) * spacing`` for ``i = 0..n-1``.

    Parameters
    ----------
    n : int
        Number of points; must be even and positive.
    spacing : float
        Grid step, strictly positive.
    """

    n: int = DEFAULT_N
    spacing: float = DEFAULT_EXTENT / (DEFAULT_N // 2)

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n <= 0 or self.n % 2:
            raise GridError(f"grid point count must be a positive even integer, got {self.n!r}")
        if not np.isfinite(self.spacing) or self.spacing <= 0:
            raise GridError(f"grid spacing must be positive and finite, got {self.spacing!r}")

    @classmethod
    def from_extent(cls, n: int = DEFAULT_N, half_extent: float = DEFAULT_EXTENT) -> "Grid":
        """Grid with ``n`` points covering ``[-half_extent, half_extent)``."""
        if half_extent <= 0:
            raise GridError(f"half extent must be positive, got {half_extent!r}")
        return cls(int(n), float(half_extent) / (int(n) // 2))

    @property
    def half_extent(self) -> float:
        return 0.5 * self.n * self.spacing

    @cached_property
    def points(self) -> np.ndarray:
        x = (np.arange(self.n) - self.n // 2) * self.spacing
        x.setflags(write=False)
        return x

    def dual(self) -> "Grid":
        """Frequency grid paired with this one by the discrete Fourier transform."""
        return Grid(self.n, 1.0 / (self.n * self.spacing))

    def matches(self, other: "Grid", rtol: float = 1e-12) -> bool:
        return self.n == other.n and abs(self.spacing - other.spacing) <= rtol * self.spacing

    def sample(self, func: Callable[[np.ndarray], np.ndarray]) -> "SampledFunction":
        return SampledFunction(self, func(self.points))


def _freeze(values) -> np.ndarray:
    arr = np.array(values, dtype=complex)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """Complex samples of a function on a :class:`Grid`.

    ``truncated`` records that the source data had not decayed to the
    boundary floor, so transforms of it carry aliasing error.
    """

    grid: Grid
    values: np.ndarray
    truncated: bool = field(default=False)

    def __post_init__(self):
        vals = _freeze(self.values)
        if vals.ndim != 1 or vals.shape[0] != self.grid.n:
            raise GridError(f"expected {self.grid.n} samples, got shape {vals.shape}")
        if not np.all(np.isfinite(vals)):
            raise GridError("sampled values must all be finite")
        object.__setattr__(self, "values", vals)

    @property
    def x(self) -> np.ndarray:
        return self.grid.points

    def _check_grid(self, other: "SampledFunction"):
        if not self.grid.matches(other.grid):
            raise GridError("sampled functions live on different grids")

    def __add__(self, other: "SampledFunction") -> "SampledFunction":
        self._check_grid(other)
        return SampledFunction(self.grid, self.values + other.values, self.truncated or other.truncated)

    def __sub__(self, other: "SampledFunction") -> "SampledFunction":
        self._check_grid(other)
        return SampledFunction(self.grid, self.values - other.values, self.truncated or other.truncated)

    def scale(self, c: complex) -> "SampledFunction":
        return SampledFunction(self.grid, c * self.values, self.truncated)

    def inner(self, other: "SampledFunction") -> complex:
        """Trapezoidal ``<self, other>``, conjugate-linear in ``other``."""
        self._check_grid(other)
        return complex(np.sum(self.values * np.conj(other.values)) * self.grid.spacing)

    def norm(self) -> float:
        """Trapezoidal L2 norm."""
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.grid.spacing))

    def l1_norm(self) -> float:
        return float(np.sum(np.abs(self.values)) * self.grid.spacing)

    def boundary_ratio(self, width: int = 4) -> float:
        """Largest modulus within ``width`` points of either edge, relative to the peak."""
        mod = np.abs(self.values)
        peak = mod.max()
        if peak == 0:
            return 0.0
        edge = max(mod[:width].max(), mod[-width:].max())
        return float(edge / peak)

    def reflect(self) -> "SampledFunction":
        """``x -> f(-x)``; the unpaired endpoint ``x_0 = -L`` maps to itself."""
        v = self.values
        out = np.empty_like(v)
        out[0] = v[0]
        out[1:] = v[1:][::-1]
        return SampledFunction(self.grid, out, self.truncated)

    def to_csv(self, path=None) -> str:
        """Serialise as ``x,re,im`` rows with 17 significant digits.

        Returns the CSV text; also writes it to ``path`` when given.
        """
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["x", "re", "im"])
        for xi, vi in zip(self.x, self.values):
            writer.writerow([fmt(xi), fmt(vi.real), fmt(vi.imag)])
        text = buf.getvalue()
        if path is not None:
            Path(path).write_text(text)
        return text

    @classmethod
    def from_csv(cls, source) -> "SampledFunction":
        """Read the ``x,re,im`` format; ``source`` is a path or CSV text."""
        if isinstance(source, Path) or (isinstance(source, str) and "\n" not in source):
            text = Path(source).read_text()
        else:
            text = source
        rows = list(csv.reader(io.StringIO(text)))
        if not rows or [c.strip() for c in rows[0]] != ["x", "re", "im"]:
            raise GridError("CSV header must be 'x,re,im'")
        data = np.array([[float(c) for c in r] for r in rows[1:] if r], dtype=float)
        if data.shape[0] < 2:
            raise GridError("CSV holds fewer than two samples")
        x = data[:, 0]
        dx = x[1] - x[0]
        grid = Grid(int(data.shape[0]), float(dx))
        if not np.allclose(grid.points, x, rtol=0, atol=1e-9 * max(1.0, abs(x).max())):
            raise GridError("CSV abscissae are not a symmetric uniform grid")
        return cls(grid, data[:, 1] + 1j * data[:, 2])


def fmt(v: float) -> str:
    """Shortest-safe 17 significant digit rendering used for all numeric output."""
    return format(float(v), ".17g")
