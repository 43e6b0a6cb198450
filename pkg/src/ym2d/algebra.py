"""Matrix Lie algebra arithmetic for su(n) and so(n).

Elements are stored as real coefficient vectors over a fixed orthonormal
basis (inner product Re tr(X Y^dagger)), so that the bracket becomes a
bilinear form given by precomputed structure constants.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.linalg import expm


class AlgebraKind(Enum):
    SU = "su"
    SO = "so"


def _su_basis(n: int) -> np.ndarray:
    """Orthonormal basis of su(n): skew-hermitian, trace free, <E_a,E_b>=delta."""
    mats = []
    # off-diagonal pairs
    for i in range(n):
        for j in range(i + 1, n):
            m = np.zeros((n, n), dtype=complex)
            m[i, j] = 1.0
            m[j, i] = -1.0
            mats.append(m / np.sqrt(2.0))
            m = np.zeros((n, n), dtype=complex)
            m[i, j] = 1.0j
            m[j, i] = 1.0j
            mats.append(m / np.sqrt(2.0))
    # diagonal generators
    for k in range(1, n):
        d = np.zeros(n)
        d[:k] = 1.0
        d[k] = -k
        m = 1.0j * np.diag(d) / np.sqrt(k * (k + 1))
        mats.append(m)
    return np.array(mats)


def _so_basis(n: int) -> np.ndarray:
    """Orthonormal basis of so(n): real antisymmetric matrices."""
    mats = []
    for i in range(n):
        for j in range(i + 1, n):
            m = np.zeros((n, n), dtype=complex)
            m[i, j] = 1.0
            m[j, i] = -1.0
            mats.append(m / np.sqrt(2.0))
    return np.array(mats)


@dataclass(frozen=True)
class AlgebraSpec:
    """su(n) or so(n) with a fixed orthonormal basis and structure constants.

    Immutable; safe to share between threads.
    """

    kind: AlgebraKind
    n: int
    basis: np.ndarray = field(repr=False, compare=False, default=None)
    structure: np.ndarray = field(repr=False, compare=False, default=None)

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("matrix size must be at least 2")
        basis = _su_basis(self.n) if self.kind is AlgebraKind.SU else _so_basis(self.n)
        # f[a,b,c] = <[E_a,E_b], E_c>
        comm = np.einsum("aij,bjk->abik", basis, basis) - np.einsum(
            "bij,ajk->abik", basis, basis
        )
        f = np.real(np.einsum("abik,cki->abc", comm, np.conj(basis).transpose(0, 2, 1)))
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "structure", f)

    @property
    def dim(self) -> int:
        if self.kind is AlgebraKind.SU:
            return self.n * self.n - 1
        return self.n * (self.n - 1) // 2

    def to_matrix(self, coeffs: np.ndarray) -> np.ndarray:
        """Reconstruct the matrix sum_a coeffs[a] E_a (coeffs may be complex)."""
        return np.tensordot(coeffs, self.basis, axes=(0, 0))

    def from_matrix(self, m: np.ndarray) -> np.ndarray:
        """Project a matrix onto the basis; exact for algebra-valued m."""
        c = np.einsum("ij,aji->a", m, np.conj(self.basis).transpose(0, 2, 1))
        return np.real(c)


def su(n: int) -> AlgebraSpec:
    return AlgebraSpec(AlgebraKind.SU, n)


def so(n: int) -> AlgebraSpec:
    return AlgebraSpec(AlgebraKind.SO, n)


@dataclass(frozen=True)
class LieElement:
    spec: AlgebraSpec
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        if c.shape != (self.spec.dim,):
            raise ValueError(
                f"expected {self.spec.dim} coefficients, got shape {c.shape}"
            )
        object.__setattr__(self, "coeffs", c)

    def matrix(self) -> np.ndarray:
        return self.spec.to_matrix(self.coeffs)

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def __add__(self, other: "LieElement") -> "LieElement":
        _check_same_spec(self, other)
        return LieElement(self.spec, self.coeffs + other.coeffs)

    def __sub__(self, other: "LieElement") -> "LieElement":
        _check_same_spec(self, other)
        return LieElement(self.spec, self.coeffs - other.coeffs)

    def __mul__(self, s: float) -> "LieElement":
        return LieElement(self.spec, self.coeffs * s)

    __rmul__ = __mul__


def _check_same_spec(x: LieElement, y: LieElement):
    if x.spec.kind is not y.spec.kind or x.spec.n != y.spec.n:
        raise ValueError("elements belong to different algebras")


def bracket(x: LieElement, y: LieElement) -> LieElement:
    """Lie bracket [x, y] via structure constants."""
    _check_same_spec(x, y)
    c = np.einsum("abc,a,b->c", x.spec.structure, x.coeffs, y.coeffs)
    return LieElement(x.spec, c)


def bracket_coeffs(spec: AlgebraSpec, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Bracket on raw coefficient arrays with leading basis axis.

    x, y have shape (dim, ...); broadcasting over the trailing axes.
    """
    return np.einsum("abc,a...,b...->c...", spec.structure, x, y)


def random_element(spec: AlgebraSpec, rng_seed: int, scale: float) -> LieElement:
    """Deterministic random element, coefficients i.i.d. uniform in [-scale, scale]."""
    if scale < 0:
        raise ValueError("scale must be nonnegative")
    rng = np.random.default_rng(rng_seed)
    return LieElement(spec, rng.uniform(-scale, scale, size=spec.dim))


def group_exp(x: LieElement) -> np.ndarray:
    """Matrix exponential of x; lands in SU(n) / SO(n)."""
    return expm(x.matrix())
