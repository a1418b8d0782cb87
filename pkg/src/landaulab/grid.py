"""Uniform Cartesian grid on a centered cube, field helpers, and snapshot I/O.

Fields are plain ``numpy`` arrays: a scalar field has shape ``(n, n, n)``
(axes x, y, z), a vector field ``(3, n, n, n)``, and a symmetric-matrix field
``(6, n, n, n)`` with components ordered ``(11, 22, 33, 12, 13, 23)``.
All geometry lives in the :class:`Grid` object.
"""

from __future__ import annotations

import json
import zlib
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "Grid",
    "make_grid",
    "gaussian",
    "spike",
    "two_bumps",
    "anisotropic_gaussian",
    "random_bumps",
    "sample_preset",
    "integrate",
    "gradient",
    "boundary_mass_fraction",
    "save_snapshot",
    "load_snapshot",
    "SnapshotError",
]

# Symmetric-matrix component order used everywhere in the package.
SYM_COMPONENTS = ((0, 0), (1, 1), (2, 2), (0, 1), (0, 2), (1, 2))


class SnapshotError(RuntimeError):
    """Checksum or metadata mismatch while reading a snapshot."""


@dataclass(frozen=True)
class Grid:
    """Uniform cell-centered grid on the cube [-L/2, L/2)^3.

    Cell centers sit at ``(i + 1/2) h - L/2`` along each axis, so the grid is
    symmetric about the origin (the origin itself is a cell corner).
    """

    n: int
    L: float
    d: int = 3

    @property
    def h(self) -> float:
        return self.L / self.n

    @property
    def cell_volume(self) -> float:
        return self.h**self.d

    @property
    def axis(self) -> np.ndarray:
        """1-D array of cell-center coordinates along one axis."""
        return (np.arange(self.n) + 0.5) * self.h - self.L / 2

    def mesh(self):
        """Broadcastable (x, y, z) coordinate arrays of the cell centers."""
        a = self.axis
        return (
            a[:, None, None],
            a[None, :, None],
            a[None, None, :],
        )

    def radius2(self) -> np.ndarray:
        x, y, z = self.mesh()
        return x**2 + y**2 + z**2

    def bracket(self, m: float = 1.0) -> np.ndarray:
        """Japanese bracket weight <x>^m = (1 + |x|^2)^(m/2) at cell centers."""
        return (1.0 + self.radius2()) ** (m / 2.0)


def make_grid(n: int, L: float) -> Grid:
    """Build a grid with ``n`` cells per axis on a box of edge ``L``."""
    if n % 2 != 0:
        raise ValueError("n must be even")
    if n < 8:
        raise ValueError("n must be >= 8")
    if L <= 0:
        raise ValueError("L must be positive")
    return Grid(n=int(n), L=float(L))


# ---------------------------------------------------------------------------
# initial-data presets
# ---------------------------------------------------------------------------

def _check_center(grid: Grid, center) -> np.ndarray:
    c = np.asarray(center, dtype=float)
    if c.shape != (3,):
        raise ValueError("center must be a 3-vector")
    if np.any(np.abs(c) > grid.L / 4):
        raise ValueError("bump center must lie inside the inner half-box")
    return c


def gaussian(grid: Grid, mass: float = 1.0, sigma: float = 1.0,
             center=(0.0, 0.0, 0.0)) -> np.ndarray:
    """Isotropic Gaussian with the requested mass, width sigma."""
    if sigma < 2 * grid.h:
        raise ValueError(f"sigma={sigma} under-resolved (need >= 2h = {2 * grid.h})")
    c = _check_center(grid, center)
    x, y, z = grid.mesh()
    r2 = (x - c[0]) ** 2 + (y - c[1]) ** 2 + (z - c[2]) ** 2
    return mass * (2 * np.pi * sigma**2) ** -1.5 * np.exp(-r2 / (2 * sigma**2))


def spike(grid: Grid, mass: float = 1.0, center=(0.0, 0.0, 0.0)) -> np.ndarray:
    """Narrowest resolvable bump (width 3h): desk-scale proxy for rough L1 data."""
    return gaussian(grid, mass=mass, sigma=3 * grid.h, center=center)


def two_bumps(grid: Grid, mass: float = 1.0, sigma: float = 1.0,
              separation: float = 4.0) -> np.ndarray:
    """Two equal Gaussians of total mass ``mass`` split along the x axis."""
    off = separation / 2.0
    return (gaussian(grid, mass / 2, sigma, (+off, 0, 0))
            + gaussian(grid, mass / 2, sigma, (-off, 0, 0)))


def anisotropic_gaussian(grid: Grid, mass: float = 1.0,
                         sigmas=(1.0, 1.0, 2.0),
                         center=(0.0, 0.0, 0.0)) -> np.ndarray:
    s = np.asarray(sigmas, dtype=float)
    if np.any(s < 2 * grid.h):
        raise ValueError("all widths must be >= 2h")
    c = _check_center(grid, center)
    x, y, z = grid.mesh()
    q = ((x - c[0]) / s[0]) ** 2 + ((y - c[1]) / s[1]) ** 2 + ((z - c[2]) / s[2]) ** 2
    return mass * (2 * np.pi) ** -1.5 / np.prod(s) * np.exp(-q / 2)


def random_bumps(grid: Grid, seed: int, count: int | None = None,
                 mass: float = 1.0) -> np.ndarray:
    """Seeded sum of 1-5 Gaussians: smooth, resolvable, reproducible test data."""
    rng = np.random.default_rng(seed)
    k = int(count) if count is not None else int(rng.integers(1, 6))
    u = np.zeros((grid.n,) * 3)
    for _ in range(k):
        sig = rng.uniform(2 * grid.h, grid.L / 8)
        c = rng.uniform(-grid.L / 4, grid.L / 4, size=3)
        u = u + gaussian(grid, mass / k, sig, c)
    return u


_PRESETS = {
    "gaussian": gaussian,
    "spike": spike,
    "two_bumps": two_bumps,
    "anisotropic_gaussian": anisotropic_gaussian,
    "random_bumps": random_bumps,
}


def sample_preset(grid: Grid, preset: dict) -> np.ndarray:
    """Dispatch on ``preset["kind"]``; remaining keys are keyword arguments."""
    kw = dict(preset)
    kind = kw.pop("kind")
    if kind not in _PRESETS:
        raise ValueError(f"unknown preset {kind!r}")
    return _PRESETS[kind](grid, **kw)


# ---------------------------------------------------------------------------
# discrete calculus
# ---------------------------------------------------------------------------

def integrate(grid: Grid, f: np.ndarray) -> float:
    """Midpoint-rule integral: cell sum times h^3."""
    return float(np.sum(f) * grid.cell_volume)


def gradient(grid: Grid, f: np.ndarray) -> np.ndarray:
    """Cell-centered gradient: second-order central differences, one-sided
    second-order at the boundary faces. Returns shape (3, n, n, n)."""
    return np.stack([np.gradient(f, grid.h, axis=i, edge_order=2) for i in range(3)])


def boundary_mass_fraction(grid: Grid, f: np.ndarray, shell_width: int = 4) -> float:
    """Fraction of total mass living in the outer shell of cells.

    Guards the free-space truncation: convolution results and decay fits are
    only meaningful while this stays small. Zero total mass returns 0.
    """
    if not (0 < shell_width <= grid.n // 4):
        raise ValueError("shell_width must be in (0, n/4]")
    total = np.sum(f)
    if total == 0.0:
        return 0.0
    w = shell_width
    inner = f[w:-w, w:-w, w:-w]
    return float((total - np.sum(inner)) / total)


# ---------------------------------------------------------------------------
# snapshot I/O
# ---------------------------------------------------------------------------

def _sidecar_path(path) -> Path:
    return Path(str(path) + ".json")


def save_snapshot(grid: Grid, f: np.ndarray, path, time: float = 0.0,
                  name: str = "u") -> None:
    """Write a field as flat little-endian f64, x-fastest, plus a JSON sidecar."""
    payload = np.ascontiguousarray(f, dtype="<f8").flatten(order="F").tobytes()
    meta = {
        "n": grid.n,
        "L": grid.L,
        "d": grid.d,
        "time": float(time),
        "name": name,
        "checksum_crc32": zlib.crc32(payload) & 0xFFFFFFFF,
        "byte_order": "LE",
        "dtype": "f64",
    }
    Path(path).write_bytes(payload)
    _sidecar_path(path).write_text(json.dumps(meta, indent=1))


def load_snapshot(path, expect_grid: Grid | None = None):
    """Read a snapshot; returns (grid, field, meta). Bit-exact round trip."""
    meta = json.loads(_sidecar_path(path).read_text())
    payload = Path(path).read_bytes()
    if (zlib.crc32(payload) & 0xFFFFFFFF) != meta["checksum_crc32"]:
        raise SnapshotError(f"checksum mismatch reading {path}")
    n = int(meta["n"])
    if len(payload) != 8 * n**3:
        raise SnapshotError(f"payload holds {len(payload) // 8} values, expected {n**3}")
    grid = Grid(n=n, L=float(meta["L"]))
    if expect_grid is not None and (expect_grid.n != grid.n or expect_grid.L != grid.L):
        raise SnapshotError("snapshot grid does not match the expected grid")
    f = np.frombuffer(payload, dtype="<f8").reshape((n, n, n), order="F").copy()
    return grid, f, meta
