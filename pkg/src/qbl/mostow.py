"""Mostow decomposition of SL(2,C) and invariant coordinates on U\\U^C/K.

Every ``g`` factors as ``u exp(ihH) diag(1/zeta, zeta)`` with ``u`` in SU(2),
``h >= 0`` and ``zeta`` nonzero.  The Gram map ``g -> g^H g`` realizes the
quotient by SU(2), and its diagonal ``(s, t)`` realizes the double quotient.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import (
    DomainError,
    dagger,
    exp_ihH,
    group_element,
    is_special_unitary,
    kc_factor,
)

TOL_SLICE = 1e-9
TOL_H = 1e-8
TOL_RECONSTRUCT = 1e-7


@dataclass(frozen=True)
class SliceElement:
    """Positive Hermitian ``[[s, b], [conj(b), t]]`` with ``s t - |b|^2 = 1``."""

    s: float
    t: float
    b: complex

    def matrix(self) -> np.ndarray:
        return np.array([[self.s, self.b], [np.conj(self.b), self.t]], dtype=complex)


@dataclass(frozen=True)
class InvariantCoords:
    s: float
    t: float


@dataclass(frozen=True, eq=False)
class MostowFactors:
    u: np.ndarray
    h: float
    zeta: complex

    @property
    def x(self) -> float:
        return float(np.log(abs(self.zeta)))

    @property
    def y(self) -> float:
        return float(np.angle(self.zeta))

    def compose(self) -> np.ndarray:
        return self.u @ exp_ihH(self.h) @ kc_factor(self.zeta)


def gram_slice(g, tol: float = TOL_SLICE) -> SliceElement:
    """``sigma_U(g)^{-1} g``, which for SL(2,C) is ``g^H g``."""
    g = np.asarray(g, dtype=complex)
    M = dagger(g) @ g
    s, t, b = float(M[0, 0].real), float(M[1, 1].real), complex(M[0, 1])
    if abs(s * t - abs(b) ** 2 - 1) > tol * max(1.0, s * t):
        raise DomainError("Gram matrix is off the slice st - |b|^2 = 1; input not unimodular")
    return SliceElement(s, t, b)


def slice_coords(q: SliceElement) -> InvariantCoords:
    return InvariantCoords(q.s, q.t)


def st_arrays(g):
    """Vectorized ``(s, t)`` for a stack of matrices."""
    g = np.asarray(g, dtype=complex)
    a2 = np.abs(g) ** 2
    return a2[..., 0, 0] + a2[..., 1, 0], a2[..., 0, 1] + a2[..., 1, 1]


def coords(g) -> InvariantCoords:
    """``(s, t) = (|z1|^2 + |z2|^2, |z3|^2 + |z4|^2)``."""
    s, t = st_arrays(g)
    return InvariantCoords(float(s), float(t))


def zeta_modulus(c: InvariantCoords) -> float:
    return float((c.t / c.s) ** 0.25)


def radial_st(s, t, tol: float = TOL_SLICE):
    """``h = arccosh(sqrt(st)) / 2`` on arrays, clamping ``st`` up to 1."""
    st = np.asarray(s, dtype=float) * np.asarray(t, dtype=float)
    if np.any(st < 1 - tol):
        raise DomainError("invariant coordinates violate st >= 1")
    st = np.maximum(st, 1.0)
    return 0.5 * np.log(np.sqrt(st) + np.sqrt(st - 1))


def radial(c: InvariantCoords, tol: float = TOL_SLICE) -> float:
    return float(radial_st(c.s, c.t, tol))


def decompose(g, tol_h: float = TOL_H) -> MostowFactors:
    """Canonical Mostow factors: ``h >= 0`` and ``arg zeta`` in ``(-pi/2, pi/2]``.

    The phase is set to 0 when ``sinh 2h <= tol_h``, where it is not determined.
    """
    g = group_element(g)
    M = dagger(g) @ g
    s, t, b = M[0, 0].real, M[1, 1].real, M[0, 1]
    # |b| = sinh 2h on the slice
    sh2 = abs(b)
    h = 0.5 * np.arcsinh(sh2)
    x = 0.25 * np.log(t / s)
    y = 0.5 * np.angle(1j * b / sh2) if sh2 > tol_h else 0.0
    zeta = complex(np.exp(x + 1j * y))
    u = g @ kc_factor(1 / zeta) @ exp_ihH(-h)
    out = MostowFactors(u, float(h), zeta)
    resid = np.linalg.norm(out.compose() - g)
    if resid > TOL_RECONSTRUCT * max(1.0, np.linalg.norm(g)):
        raise DomainError(f"ill-conditioned input: reconstruction residual {resid:.3e}")
    return out


def check_factors(f: MostowFactors, g, tol: float = 1e-9) -> bool:
    """Reconstruction test; factorizations are compared only this way."""
    return bool(
        f.h >= 0
        and is_special_unitary(f.u, tol)
        and np.linalg.norm(f.compose() - np.asarray(g)) <= tol
    )
