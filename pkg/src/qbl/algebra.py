"""Exact 2x2 complex algebra on SL(2,C).

Matrices are plain ``numpy`` arrays of shape ``(2, 2)`` (or stacks of shape
``(..., 2, 2)``) with dtype ``complex128``.  Entries are named column-major,
``g = [[z1, z3], [z2, z4]]``, so the first column is ``(z1, z2)`` and the
second ``(z3, z4)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TOL_DET = 1e-10
SINHC_SWITCH = 1e-4

# basis of su(2)
C = np.array([[1j, 0], [0, -1j]], dtype=complex)
H = np.array([[0, -1], [1, 0]], dtype=complex)
W = np.array([[0, 1j], [1j, 0]], dtype=complex)
W_INV = -W
I2 = np.eye(2, dtype=complex)


class DomainError(ValueError):
    """Input outside the domain of an operation."""


@dataclass(frozen=True)
class AlgebraVector:
    """Coefficients of ``a*C + b*H + c*W`` in sl(2,C)."""

    a: complex
    b: complex
    c: complex

    def matrix(self) -> np.ndarray:
        return self.a * C + self.b * H + self.c * W


def matrix2(z1, z2, z3, z4) -> np.ndarray:
    """Build ``[[z1, z3], [z2, z4]]`` from column-major entries."""
    return np.array([[z1, z3], [z2, z4]], dtype=complex)


def entries(g: np.ndarray) -> tuple[complex, complex, complex, complex]:
    """Column-major entries ``(z1, z2, z3, z4)``."""
    return complex(g[0, 0]), complex(g[1, 0]), complex(g[0, 1]), complex(g[1, 1])


def det2(a: np.ndarray):
    return a[..., 0, 0] * a[..., 1, 1] - a[..., 0, 1] * a[..., 1, 0]


def inv2(a: np.ndarray) -> np.ndarray:
    """Inverse through the adjugate; exact for unimodular input up to rounding."""
    out = np.empty_like(a)
    out[..., 0, 0] = a[..., 1, 1]
    out[..., 1, 1] = a[..., 0, 0]
    out[..., 0, 1] = -a[..., 0, 1]
    out[..., 1, 0] = -a[..., 1, 0]
    return out / det2(a)[..., None, None]


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(a, -1, -2))


def group_element(a, tol: float = TOL_DET) -> np.ndarray:
    """Validate ``a`` as an element of SL(2,C) and return it as a complex array."""
    g = np.array(a, dtype=complex)
    if g.shape[-2:] != (2, 2):
        raise DomainError(f"expected a 2x2 matrix, got shape {g.shape}")
    if not np.all(np.isfinite(g)):
        raise DomainError("matrix has non-finite entries")
    err = np.max(np.abs(det2(g) - 1))
    if err > tol:
        raise DomainError(f"|det - 1| = {err:.3e} exceeds {tol:.1e}")
    return g


def renormalize(a) -> np.ndarray:
    """Divide by a square root of the determinant (never applied implicitly)."""
    a = np.array(a, dtype=complex)
    d = det2(a)
    if np.any(d == 0):
        raise DomainError("singular matrix cannot be renormalized")
    return a / np.sqrt(d)[..., None, None]


def _sinhc(lam):
    lam = np.asarray(lam, dtype=complex)
    small = np.abs(lam) < SINHC_SWITCH
    safe = np.where(small, 1.0, lam)
    l2 = lam * lam
    series = 1 + l2 / 6 * (1 + l2 / 20 * (1 + l2 / 42))
    return np.where(small, series, np.sinh(safe) / safe)


def exp_traceless(A, tol: float = 1e-12) -> np.ndarray:
    """Matrix exponential of a traceless 2x2 matrix (or a stack of them).

    With ``lam**2 = -det(A)`` one has ``A @ A = lam**2 * I``, hence
    ``exp(A) = cosh(lam) I + sinh(lam)/lam A``.  Both coefficients are even in
    ``lam`` so the branch of the square root does not matter.
    """
    A = np.asarray(A, dtype=complex)
    tr = A[..., 0, 0] + A[..., 1, 1]
    scale = np.maximum(1.0, np.sqrt(np.sum(np.abs(A) ** 2, axis=(-1, -2))))
    if np.any(np.abs(tr) > tol * scale):
        raise DomainError("exp_traceless called on a matrix with nonzero trace")
    lam = np.sqrt(-det2(A) + 0j)
    return np.cosh(lam)[..., None, None] * I2 + _sinhc(lam)[..., None, None] * A


def sigma_u(g: np.ndarray) -> np.ndarray:
    """Cartan involution ``g -> (g^T conj)^{-1}``; its fixed set is SU(2)."""
    return inv2(dagger(np.asarray(g, dtype=complex)))


def is_special_unitary(g, tol: float = 1e-10) -> bool:
    g = np.asarray(g, dtype=complex)
    gram_err = np.linalg.norm(dagger(g) @ g - I2)
    return bool(gram_err <= tol and abs(det2(g) - 1) <= tol)


# -- seeded sampling -----------------------------------------------------------

def substream(seed: int, *key: int) -> np.random.Generator:
    """Independent generator for ``(seed, *key)``; sampling by index is order-free."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=key))


def haar_su2(rng: np.random.Generator) -> np.ndarray:
    """Haar-uniform SU(2) element from a normalized Gaussian quaternion."""
    q = rng.standard_normal(4)
    a, b, c, d = q / np.linalg.norm(q)
    return np.array([[a + 1j * b, c + 1j * d], [-c + 1j * d, a - 1j * b]])


def exp_ihH(h) -> np.ndarray:
    """``exp(i h H) = [[cosh h, -i sinh h], [i sinh h, cosh h]]``."""
    h = np.asarray(h, dtype=float)
    ch, sh = np.cosh(h), np.sinh(h)
    out = np.empty(h.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = ch
    out[..., 1, 1] = ch
    out[..., 0, 1] = -1j * sh
    out[..., 1, 0] = 1j * sh
    return out


def kc_factor(zeta) -> np.ndarray:
    """The K^C factor ``diag(1/zeta, zeta)``."""
    zeta = np.asarray(zeta, dtype=complex)
    out = np.zeros(zeta.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = 1 / zeta
    out[..., 1, 1] = zeta
    return out


def sample_factors(seed: int, h_max: float, x_max: float, index: int = 0):
    """Draw ``(u, h, zeta)`` from substream ``index`` of ``seed``.

    ``u`` is Haar on SU(2), ``h ~ U[0, h_max]``, ``zeta = exp(x + iy)`` with
    ``x ~ U[-x_max, x_max]`` and ``y ~ U(-pi/2, pi/2]``.
    """
    if h_max <= 0 or x_max <= 0:
        raise DomainError("h_max and x_max must be positive")
    rng = substream(seed, index)
    u = haar_su2(rng)
    h, x, y = rng.random(3)
    h = h * h_max
    x = (2 * x - 1) * x_max
    y = np.pi / 2 - np.pi * y
    return u, float(h), complex(np.exp(x + 1j * y))


def sample_group(seed: int, h_max: float, x_max: float, index: int = 0) -> np.ndarray:
    """Seeded element ``u exp(ihH) diag(1/zeta, zeta)`` of SL(2,C)."""
    u, h, zeta = sample_factors(seed, h_max, x_max, index)
    return u @ exp_ihH(h) @ kc_factor(zeta)


def sample_groups(seed: int, n: int, h_max: float, x_max: float, start: int = 0) -> np.ndarray:
    """Stack of ``n`` samples, sample ``i`` taken from substream ``start + i``."""
    return np.stack([sample_group(seed, h_max, x_max, start + i) for i in range(n)])
