"""Radial profiles rho, the maximal profile, and the transforms theta and delta.

A profile is an even positive function on the real line.  Each profile class
exposes ``log(h)``, the logarithm of rho evaluated at ``|h|`` (vectorized), so
evenness holds exactly by construction.

The change of variable ``tau = log(st) = 2 log cosh 2h`` turns the radial
coordinate into the argument of ``theta(tau) = log rho(h(tau))`` and
``delta(tau) = theta(tau) - m tau / 4``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .algebra import DomainError

TOL_CONVEX = 1e-10
TOL_NORMALIZED = 1e-12


def log_cosh(x):
    """``log cosh x`` without overflow and without cancellation near 0."""
    x = np.abs(np.asarray(x, dtype=float))
    small = x < 1
    xs = np.where(small, x, 0.0)
    xl = np.where(small, 1.0, x)
    return np.where(
        small,
        np.log1p(2 * np.sinh(xs / 2) ** 2),
        xl + np.log1p(np.exp(-2 * xl)) - np.log(2.0),
    )


@dataclass(frozen=True)
class CoshPower:
    """``rho(h) = (cosh 2h)^alpha``; ``alpha = |m|/2`` is the maximal profile."""

    alpha: float

    def __post_init__(self):
        if not np.isfinite(self.alpha) or self.alpha < 0:
            raise DomainError("CoshPower needs a finite alpha >= 0")

    def log(self, h):
        return self.alpha * log_cosh(2 * np.abs(h))


@dataclass(frozen=True)
class Constant:
    c: float

    def __post_init__(self):
        if not np.isfinite(self.c) or self.c <= 0:
            raise DomainError("Constant profile needs a finite c > 0")

    def log(self, h):
        return np.log(self.c) + np.zeros_like(np.asarray(h, dtype=float))


@dataclass(frozen=True)
class Grid:
    """``log rho`` tabulated on a uniform grid over ``[0, h_max]``.

    Linear interpolation in ``|h|``; past ``h_max`` the last slope continues.
    """

    h_max: float
    log_rho: tuple[float, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "log_rho", tuple(float(v) for v in self.log_rho))
        if not np.isfinite(self.h_max) or self.h_max <= 0:
            raise DomainError("Grid profile needs h_max > 0")
        if len(self.log_rho) < 2:
            raise DomainError("Grid profile needs at least 2 values")
        if not np.all(np.isfinite(self.log_rho)):
            raise DomainError("Grid profile has non-finite values")

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(0.0, self.h_max, len(self.log_rho))

    def log(self, h):
        h = np.abs(np.asarray(h, dtype=float))
        vals = np.asarray(self.log_rho)
        nodes = self.nodes
        slope = (vals[-1] - vals[-2]) / (nodes[-1] - nodes[-2])
        inside = np.interp(h, nodes, vals)
        return np.where(h > self.h_max, vals[-1] + slope * (h - self.h_max), inside)


RhoProfile = Union[CoshPower, Constant, Grid]


@dataclass(frozen=True, eq=False)
class DeltaReport:
    tau_grid: np.ndarray
    delta_values: np.ndarray
    monotone: bool
    midpoint_convex: bool
    divergent: bool
    identically_zero: bool


@dataclass(frozen=True)
class ConvexityCheck:
    passed: bool
    worst_margin: float
    worst_triple: tuple[float, float, float] | None


def eval_rho(p: RhoProfile, h):
    out = np.exp(p.log(h))
    return float(out) if np.ndim(out) == 0 else out


def log_rho(p: RhoProfile, h):
    out = p.log(h)
    return float(out) if np.ndim(out) == 0 else out


def normalize(p: RhoProfile) -> RhoProfile:
    """Rescale so that ``rho(0) = 1``."""
    if isinstance(p, Constant):
        return Constant(1.0)
    if isinstance(p, CoshPower):
        return p
    if isinstance(p, Grid):
        v0 = p.log_rho[0]
        return Grid(p.h_max, tuple(v - v0 for v in p.log_rho))
    raise TypeError(f"unknown profile {p!r}")


def is_normalized(p: RhoProfile, tol: float = TOL_NORMALIZED) -> bool:
    return abs(float(p.log(0.0))) <= tol


def rho_max(m: int, h):
    """``(cosh 2h)^{|m|/2}``."""
    out = np.exp(abs(m) / 2 * log_cosh(2 * np.asarray(h, dtype=float)))
    return float(out) if np.ndim(out) == 0 else out


def tau_of_h(h):
    h = np.asarray(h, dtype=float)
    if np.any(h < 0):
        raise DomainError("tau_of_h needs h >= 0")
    out = 2 * log_cosh(2 * h)
    return float(out) if out.ndim == 0 else out


def h_of_tau(tau):
    """Inverse of ``tau_of_h``: ``h = arccosh(exp(tau/2)) / 2``."""
    tau = np.asarray(tau, dtype=float)
    if np.any(tau < 0):
        raise DomainError("h_of_tau needs tau >= 0")
    # arccosh(e^a) = a + log(1 + sqrt(1 - e^{-2a}))
    out = 0.5 * (tau / 2 + np.log1p(np.sqrt(-np.expm1(-tau))))
    return float(out) if out.ndim == 0 else out


def theta(p: RhoProfile, tau):
    out = p.log(h_of_tau(tau))
    return float(out) if np.ndim(out) == 0 else out


def delta(p: RhoProfile, m: int, tau):
    if m <= 0:
        raise DomainError("delta is defined for m > 0; reduce m < 0 by duality")
    out = np.asarray(theta(p, tau)) - m / 4 * np.asarray(tau, dtype=float)
    return float(out) if out.ndim == 0 else out


def convexity_margins(x, f):
    """``2 * (interpolated - f_mid)`` on consecutive triples.

    On a uniform grid this is the plain second difference ``f0 - 2 f1 + f2``.
    """
    x = np.asarray(x, dtype=float)
    f = np.asarray(f, dtype=float)
    lam = (x[2:] - x[1:-1]) / (x[2:] - x[:-2])
    return 2 * (lam * f[:-2] + (1 - lam) * f[2:] - f[1:-1])


def check_log_convex(p: RhoProfile, h_grid, tol: float = TOL_CONVEX) -> ConvexityCheck:
    """Midpoint convexity of ``log rho`` on the grid mirrored about 0.

    The mirror makes the test see the kink at the origin, so profiles that
    do not attain their minimum at 0 fail.
    """
    h = np.asarray(h_grid, dtype=float)
    if h.ndim != 1 or h.size < 3 or np.any(np.diff(h) <= 0):
        raise DomainError("h_grid must be strictly increasing with at least 3 points")
    x = np.unique(np.concatenate([-h, h]))
    margins = convexity_margins(x, p.log(x))
    k = int(np.argmin(margins))
    worst = float(margins[k])
    triple = (float(x[k]), float(x[k + 1]), float(x[k + 2]))
    return ConvexityCheck(worst >= -tol, worst, triple)
