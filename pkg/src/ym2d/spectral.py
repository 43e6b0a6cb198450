"""Discrete torus geometry, Fourier multipliers, dealiased products, norms.

Fields are Lie-algebra valued functions on an N x N periodic torus, stored as
real coefficient lattices over the algebra basis (shape (dim, N, N)).  The
transform backend is numpy's FFT behind a small interface; a direct O(N^4)
discrete transform oracle is provided for cross-checking at small N.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import io
import struct

import numpy as np

from .algebra import AlgebraSpec, bracket_coeffs

SNAPSHOT_MAGIC = b"YMF2"
SNAPSHOT_VERSION = 1


@dataclass(frozen=True)
class TorusGrid:
    """N x N periodic grid of period L; frequencies 2 pi k / L."""

    N: int
    L: float = 2.0 * np.pi
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.N < 8 or self.N % 2 != 0:
            raise ValueError("N must be even and >= 8")

    def __eq__(self, other):
        return isinstance(other, TorusGrid) and self.N == other.N and self.L == other.L

    def __hash__(self):
        return hash((self.N, self.L))

    @property
    def points(self):
        """Coordinate arrays x1, x2 of shape (N, N)."""
        x = np.arange(self.N) * (self.L / self.N)
        return np.meshgrid(x, x, indexing="ij")

    @property
    def freqs(self):
        """Frequency arrays xi1, xi2 of shape (N, N) (fftfreq layout)."""
        if "freqs" not in self._cache:
            k = np.fft.fftfreq(self.N, d=1.0 / self.N) * (2.0 * np.pi / self.L)
            self._cache["freqs"] = np.meshgrid(k, k, indexing="ij")
        return self._cache["freqs"]

    @property
    def xi_abs(self):
        if "xi_abs" not in self._cache:
            k1, k2 = self.freqs
            self._cache["xi_abs"] = np.hypot(k1, k2)
        return self._cache["xi_abs"]

    @property
    def xi_bracket(self):
        """<xi> = (1 + |xi|^2)^(1/2)."""
        if "xi_bracket" not in self._cache:
            self._cache["xi_bracket"] = np.sqrt(1.0 + self.xi_abs**2)
        return self._cache["xi_bracket"]

    @property
    def dealias_mask(self):
        """2/3-rule mask in fftfreq index layout."""
        if "dealias" not in self._cache:
            k = np.fft.fftfreq(self.N, d=1.0 / self.N)
            keep = np.abs(k) < self.N / 3.0
            self._cache["dealias"] = np.outer(keep, keep)
        return self._cache["dealias"]

    def multiplier_array_r(self, kind: str, param=None) -> np.ndarray:
        """Half-plane (rfft2 layout) view of a named multiplier symbol."""
        key = ("r", kind, param)
        if key not in self._cache:
            full = self.multiplier_array(kind, param)
            self._cache[key] = np.ascontiguousarray(full[:, : self.N // 2 + 1])
        return self._cache[key]

    @property
    def dealias_mask_r(self):
        key = ("r", "dealias")
        if key not in self._cache:
            self._cache[key] = np.ascontiguousarray(
                self.dealias_mask[:, : self.N // 2 + 1]
            )
        return self._cache[key]

    def multiplier_array(self, kind: str, param=None) -> np.ndarray:
        """Scalar symbol lattice for a named multiplier (see apply_multiplier)."""
        key = (kind, param)
        if key in self._cache:
            return self._cache[key]
        k1, k2 = self.freqs
        xa = self.xi_abs
        xb = self.xi_bracket
        if kind == "lambda_pow":
            m = xb ** float(param)
        elif kind == "d_pow":
            a = float(param)
            with np.errstate(divide="ignore"):
                m = np.where(xa > 0, xa, 1.0) ** a
            if a < 0:
                m = np.where(xa > 0, m, 0.0)
            elif a > 0:
                m = np.where(xa > 0, m, 0.0)
            else:
                m = np.ones_like(xa)
        elif kind == "riesz":
            ki = k1 if param == 1 else k2
            m = 1j * ki / xb
        elif kind == "derivative":
            ki = k1 if param == 1 else k2
            m = 1j * ki
        elif kind == "lambda_inv_derivative":
            ki = k1 if param == 1 else k2
            m = 1j * ki / xb
        elif kind == "laplacian":
            m = -(xa**2)
        elif kind == "inv_laplacian":
            # zero mode annihilated
            with np.errstate(divide="ignore"):
                m = np.where(xa > 0, -1.0 / np.where(xa > 0, xa**2, 1.0), 0.0)
        else:
            raise ValueError(f"unknown multiplier kind {kind!r}")
        self._cache[key] = m
        return m


class GridField:
    """Algebra-valued grid function; immutable by convention.

    values: real array (dim, N, N); a lazily cached spectral representation
    avoids repeated transforms when several multipliers hit the same field.
    """

    __slots__ = ("spec", "grid", "values", "_hat", "_rhat", "_mcache")

    def __init__(self, spec: AlgebraSpec, grid: TorusGrid, values: np.ndarray,
                 hat=None, rhat=None):
        values = np.asarray(values, dtype=float)
        if values.shape != (spec.dim, grid.N, grid.N):
            raise ValueError(
                f"expected shape {(spec.dim, grid.N, grid.N)}, got {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise FloatingPointError("non-finite values in grid field")
        self.spec = spec
        self.grid = grid
        self.values = values
        self._hat = hat
        self._rhat = rhat
        self._mcache = {}

    @staticmethod
    def zero(spec, grid):
        return GridField(spec, grid, np.zeros((spec.dim, grid.N, grid.N)))

    @staticmethod
    def from_hat(spec, grid, hat):
        # hat is mean-normalized (fft2 / N^2); invert accordingly
        vals = np.fft.ifft2(hat, axes=(-2, -1)) * grid.N**2
        return GridField(spec, grid, vals.real, hat=hat)

    @staticmethod
    def from_rhat(spec, grid, rhat):
        vals = np.fft.irfft2(rhat, s=(grid.N, grid.N), axes=(-2, -1)) * grid.N**2
        return GridField(spec, grid, vals, rhat=rhat)

    @property
    def hat(self):
        """Mean-normalized full spectral coefficients (fft2 / N^2)."""
        if self._hat is None:
            self._hat = np.fft.fft2(self.values, axes=(-2, -1)) / self.grid.N**2
        return self._hat

    @property
    def rhat(self):
        """Mean-normalized half-plane coefficients (rfft2 / N^2).

        All internal multiplier arithmetic runs on this layout; real fields
        make the redundant half of the spectrum unnecessary.
        """
        if self._rhat is None:
            self._rhat = np.fft.rfft2(self.values, axes=(-2, -1)) / self.grid.N**2
        return self._rhat

    # --- linear structure -------------------------------------------------
    def __add__(self, other):
        self._check(other)
        return GridField(self.spec, self.grid, self.values + other.values)

    def __sub__(self, other):
        self._check(other)
        return GridField(self.spec, self.grid, self.values - other.values)

    def __mul__(self, s):
        return GridField(self.spec, self.grid, self.values * s)

    __rmul__ = __mul__

    def __neg__(self):
        return (-1.0) * self

    def _check(self, other):
        if other.grid != self.grid:
            raise ValueError("grid mismatch")
        if other.spec is not self.spec and other.spec != self.spec:
            raise ValueError("algebra mismatch")

    # --- multiplier calculus ---------------------------------------------
    def _apply_symbol(self, m):
        # memoize by symbol-array identity: the grid caches its multiplier
        # lattices, so repeated applications of the same operator to one
        # immutable field cost a dict lookup instead of two transforms
        key = id(m)
        out = self._mcache.get(key)
        if out is None:
            out = GridField.from_rhat(self.spec, self.grid, self.rhat * m)
            self._mcache[key] = out
        return out

    def dx(self, i: int):
        return self._apply_symbol(self.grid.multiplier_array_r("derivative", i))

    def lambda_pow(self, s: float):
        return self._apply_symbol(self.grid.multiplier_array_r("lambda_pow", s))

    def d_pow(self, a: float):
        return self._apply_symbol(self.grid.multiplier_array_r("d_pow", a))

    def riesz(self, i: int):
        return self._apply_symbol(self.grid.multiplier_array_r("riesz", i))

    def inv_laplacian(self):
        return self._apply_symbol(self.grid.multiplier_array_r("inv_laplacian"))

    def laplacian(self):
        return self._apply_symbol(self.grid.multiplier_array_r("laplacian"))

    def dealias(self):
        return self._apply_symbol(self.grid.dealias_mask_r)

    def l2_norm(self) -> float:
        """Grid-quadrature L^2 norm over the torus."""
        h = self.grid.L / self.grid.N
        return float(np.sqrt(np.sum(self.values**2) * h * h))

    def sup_norm(self) -> float:
        return float(np.max(np.sqrt(np.sum(self.values**2, axis=0))))


def apply_multiplier(u: GridField, kind: str, param=None) -> GridField:
    """Apply a named Fourier multiplier; see TorusGrid.multiplier_array.

    Besides the scalar symbols, the vector projections act on a field pair:
    use split_potential for the df/cf/smooth three-way splitting.
    """
    return u._apply_symbol(u.grid.multiplier_array_r(kind, param))


def split_potential(a1: GridField, a2: GridField):
    """Three-way splitting A = A_df + A_cf + Lambda^-2 A of a spatial pair.

    A_df = Lambda^-2 (d2 (d1 A2 - d2 A1), -d1 (d1 A2 - d2 A1)),
    A_cf = -Lambda^-2 grad (div A).  Exact in discrete Fourier space.
    """
    curl = a2.dx(1) - a1.dx(2)
    div = a1.dx(1) + a2.dx(2)
    df = (curl.lambda_pow(-2).dx(2), -1.0 * curl.lambda_pow(-2).dx(1))
    cf = (-1.0 * div.lambda_pow(-2).dx(1), -1.0 * div.lambda_pow(-2).dx(2))
    smooth = (a1.lambda_pow(-2), a2.lambda_pow(-2))
    return df, cf, smooth


def dealiased_product(u: GridField, v: GridField, kind: str, dealias=True) -> GridField:
    """Pointwise 'bracket' (structure constants) or 'scalar' (componentwise).

    2/3-rule truncation on inputs and output unless dealias=False.
    """
    u._check(v)
    key = ("prod", id(v), kind, dealias)
    cached = u._mcache.get(key)
    # the cache entry pins v, so its id cannot be recycled while cached
    if cached is not None and cached[0] is v:
        return cached[1]
    uu, vv = (u.dealias(), v.dealias()) if dealias else (u, v)
    if kind == "bracket":
        w = bracket_coeffs(u.spec, uu.values, vv.values)
    elif kind == "scalar":
        w = uu.values * vv.values
    else:
        raise ValueError(f"unknown product kind {kind!r}")
    out = GridField(u.spec, u.grid, w)
    if dealias:
        out = out.dealias()
    u._mcache[key] = (v, out)
    return out


def discrete_norm(u: GridField, s: float, r: float) -> float:
    """Discrete Fourier-Lebesgue norm || <xi>^s u_hat ||_{l^{r'}}.

    u_hat is normalized as a Riemann-sum approximation of the continuum
    transform with the (2 pi)^(-d/2) convention, so that r=2, s=0 reproduces
    the grid L^2 norm exactly (discrete Parseval).
    """
    return weighted_hat_norm(u.grid, u.hat, s, r)


def weighted_hat_norm(grid: TorusGrid, hat: np.ndarray, s: float, r: float) -> float:
    """discrete_norm on a raw mean-normalized coefficient lattice.

    hat has shape (..., N, N); leading axes are contracted in Frobenius norm
    (so algebra components combine isometrically).
    """
    if not (1.0 < r <= 2.0):
        raise ValueError("Lebesgue exponent r must satisfy 1 < r <= 2")
    rp = r / (r - 1.0)
    # continuum-normalized coefficients: (2 pi)^-1 * L^2 * (mean-normalized hat)
    chat = hat * (grid.L**2 / (2.0 * np.pi))
    axes = tuple(range(chat.ndim - 2))
    mag = np.sqrt(np.sum(np.abs(chat) ** 2, axis=axes))
    w = grid.xi_bracket**s * mag
    dxi = (2.0 * np.pi / grid.L) ** 2
    return float((np.sum(w**rp) * dxi) ** (1.0 / rp))


def dft_oracle(values: np.ndarray) -> np.ndarray:
    """Direct O(N^4) forward transform (mean-normalized), for small-N checks."""
    N = values.shape[-1]
    n = np.arange(N)
    w = np.exp(-2j * np.pi * np.outer(n, n) / N)
    return np.einsum("ka,...ab,lb->...kl", w, values, w) / N**2


# --- snapshot format ------------------------------------------------------

def write_snapshot(fh: io.BufferedIOBase, fields: list[GridField]):
    """Write components in the "YMF2" binary layout.

    Header: magic, u32 {version, N, dim, componentCount}, f64 L; then
    componentCount * dim * N^2 little-endian f64 in (component, basis, x2, x1)
    row-major order.
    """
    if not fields:
        raise ValueError("no components")
    g = fields[0].grid
    dim = fields[0].spec.dim
    fh.write(SNAPSHOT_MAGIC)
    fh.write(struct.pack("<IIII", SNAPSHOT_VERSION, g.N, dim, len(fields)))
    fh.write(struct.pack("<d", g.L))
    for f in fields:
        # stored order (component, basisIndex, x2, x1)
        arr = np.ascontiguousarray(f.values.transpose(0, 2, 1), dtype="<f8")
        fh.write(arr.tobytes())


def read_snapshot(fh: io.BufferedIOBase, spec: AlgebraSpec) -> list[GridField]:
    magic = fh.read(4)
    if magic != SNAPSHOT_MAGIC:
        raise ValueError(f"bad magic {magic!r}")
    version, N, dim, count = struct.unpack("<IIII", fh.read(16))
    if version != SNAPSHOT_VERSION:
        raise ValueError(f"unsupported snapshot version {version}")
    if dim != spec.dim:
        raise ValueError("algebra dimension mismatch")
    (L,) = struct.unpack("<d", fh.read(8))
    grid = TorusGrid(N, L)
    out = []
    for _ in range(count):
        raw = np.frombuffer(fh.read(8 * dim * N * N), dtype="<f8")
        vals = raw.reshape(dim, N, N).transpose(0, 2, 1)
        out.append(GridField(spec, grid, vals.copy()))
    return out
