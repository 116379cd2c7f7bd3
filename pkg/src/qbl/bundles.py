"""Points of the homogeneous line bundles L^m over the affine quadric.

A point ``[g, z]`` of ``L^m`` is an equivalence class under the right action
of ``K^C = {diag(1/k, k)}``::

    (g, z) ~ (g diag(1/k, k), k^{-m} z)

With this convention the fiber norm ``|z| |zeta|^m rho(h)`` is independent of
the representative, since the K^C factor of ``g diag(1/k, k)`` is
``zeta * k``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .algebra import DomainError, W, W_INV, group_element, inv2
from .mostow import decompose, radial_st, st_arrays
from .profiles import RhoProfile

TOL_BOUNDARY = 1e-10


class Membership(enum.Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    EXTERIOR = "exterior"


@dataclass(frozen=True, eq=False)
class BundlePoint:
    g: np.ndarray
    z: complex
    m: int

    def __post_init__(self):
        object.__setattr__(self, "g", group_element(self.g))
        object.__setattr__(self, "z", complex(self.z))
        object.__setattr__(self, "m", int(self.m))


@dataclass(frozen=True)
class FiberClass:
    """Second column ``(z3, z4)`` of a covering representative, modulo Gamma_m."""

    z3: complex
    z4: complex
    m: int


def same_point(p: BundlePoint, q: BundlePoint, tol: float = 1e-10) -> bool:
    if p.m != q.m:
        raise DomainError(f"weight mismatch: {p.m} != {q.m}")
    d = inv2(p.g) @ q.g
    if max(abs(d[0, 1]), abs(d[1, 0])) > tol:
        return False
    kappa = d[1, 1]
    if abs(d[0, 0] * kappa - 1) > tol:
        return False
    expected = kappa ** (-p.m) * p.z
    return bool(abs(q.z - expected) <= tol * max(1.0, abs(q.z)))


def fiber_norm(p: BundlePoint, rho: RhoProfile) -> float:
    """``|z| |zeta|^m rho(h)`` from the Mostow factors of ``p.g``."""
    f = decompose(p.g)
    return float(abs(p.z) * abs(f.zeta) ** p.m * np.exp(rho.log(f.h)))


def log_norm_st(s, t, rho: RhoProfile, m: int):
    """``log(|zeta|^m rho(h))`` in invariant coordinates, on arrays."""
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    return m / 4 * (np.log(t) - np.log(s)) + rho.log(radial_st(s, t))


def cover_log_norm(gs, rho: RhoProfile, m: int):
    """Vectorized ``log(|zeta|^m rho(h))`` for a stack of group elements."""
    return log_norm_st(*st_arrays(gs), rho, m)


def membership(
    p: BundlePoint, rho: RhoProfile, punctured: bool = False, tol_b: float = TOL_BOUNDARY
) -> Membership:
    if punctured and p.z == 0:
        return Membership.EXTERIOR
    n = fiber_norm(p, rho)
    if n < 1 - tol_b:
        return Membership.INTERIOR
    if n <= 1 + tol_b:
        return Membership.BOUNDARY
    return Membership.EXTERIOR


def cover_project(g, m: int) -> BundlePoint:
    """Orbit map ``g -> [g, 1]`` onto the punctured bundle."""
    if m == 0:
        raise DomainError("the covering exists only for m != 0")
    return BundlePoint(g, 1.0, m)


def cover_membership(g, rho: RhoProfile, m: int, tol_b: float = TOL_BOUNDARY) -> bool:
    return membership(cover_project(g, m), rho, punctured=True, tol_b=tol_b) is Membership.INTERIOR


def gamma_element(m: int, j: int) -> np.ndarray:
    """``diag(1/gamma, gamma)`` with ``gamma = exp(2 pi i j / m)``."""
    if m == 0:
        raise DomainError("Gamma_m needs m != 0")
    gamma = np.exp(2j * np.pi * (j % abs(m)) / abs(m))
    return np.diag([1 / gamma, gamma])


def dual_map(p: BundlePoint) -> BundlePoint:
    """``[g, z] in L^m -> [W g W^{-1}, z] in L^{-m}``.

    Conjugation by ``W`` is the automorphism whose differential sends
    ``(C, H, W)`` to ``(-C, -H, W)``; it inverts the K^C factor.
    """
    return BundlePoint(W @ p.g @ W_INV, p.z, -p.m)


def project_fiber(p: BundlePoint) -> FiberClass:
    """``(z3, z4)`` of the supplied covering representative."""
    if p.z == 0:
        raise DomainError("project_fiber is defined off the zero section")
    return FiberClass(complex(p.g[0, 1]), complex(p.g[1, 1]), p.m)


def embed_iota(f: FiberClass) -> tuple[complex, complex, complex]:
    """``[z, w] -> (z^m, z^{m-1} w, w^m)``, invariant under Gamma_m."""
    if f.m < 1:
        raise DomainError("embed_iota needs m >= 1")
    z, w, m = f.z3, f.z4, f.m
    return z**m, z ** (m - 1) * w, w**m


def taut_map(p: BundlePoint):
    """Map to the tautological bundle over P^1: ``([g e2], z g e2)``.

    Returns homogeneous coordinates of the line and the vector on it.
    Constant on orbits of the Borel action ``(g b^-1, zeta^-1 z)``.
    """
    if p.m != -1:
        raise DomainError("taut_map is defined on weight m = -1")
    col = (complex(p.g[0, 1]), complex(p.g[1, 1]))
    return col, (p.z * col[0], p.z * col[1])


def c_action(g, w: complex) -> np.ndarray:
    """``w . g = g [[1, 0], [w, 1]]``; leaves the second column fixed."""
    return np.asarray(g, dtype=complex) @ np.array([[1, 0], [w, 1]], dtype=complex)
