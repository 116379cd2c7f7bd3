"""Stein certification and hyperbolicity witnesses for disc bundles in L^m.

For ``m > 0`` the log of the fiber norm splits in invariant coordinates as

    log(|zeta|^m rho(h)) = delta(log s + log t) + (m/2) log t

with ``log s`` and ``log t`` plurisubharmonic.  A convex nondecreasing
``delta`` therefore certifies plurisubharmonicity, a decreasing ``delta`` or a
non-log-convex ``rho`` refutes it, and everything in between is sampled with
circle submean probes.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import brentq

from .algebra import C, DomainError, H, W, exp_traceless, sample_group, substream
from .bundles import log_norm_st
from .mostow import st_arrays
from .profiles import (
    TOL_CONVEX,
    ConvexityCheck,
    DeltaReport,
    RhoProfile,
    check_log_convex,
    convexity_margins,
    delta,
    is_normalized,
    rho_max,
)

TOL_REFUTE = 1e-5
TOL_ZERO = 1e-12
MAX_CIRCLE_POINTS = 4096


class Status(enum.Enum):
    CERTIFIED = "CertifiedStein"
    REFUTED = "RefutedStein"
    INCONCLUSIVE = "Inconclusive"


class WitnessImpossible(DomainError):
    """The maximal bundle carries a proper C-action, so no witness exists."""


@dataclass(frozen=True)
class CertifyParams:
    h_max: float = 5.0
    h_steps: int = 100
    tau_max: float = 40.0
    tau_steps: int = 400
    seed: int = 0
    n_samples: int = 2000
    radius: float = 0.05
    circle_points: int = 64
    sample_h_max: float = 3.0
    sample_x_max: float = 2.0
    tol_refute: float = TOL_REFUTE

    def h_grid(self) -> np.ndarray:
        return np.linspace(0.0, self.h_max, self.h_steps + 1)


@dataclass(frozen=True, eq=False)
class SubmeanReport:
    samples: int
    radius: float
    worst_margin: float
    worst_site: tuple[np.ndarray, np.ndarray]
    levi_min: float
    levi_mean: float
    levi_max: float


@dataclass(frozen=True, eq=False)
class SteinVerdict:
    status: Status
    reason: str
    evidence: object = None
    violation: dict = field(default_factory=dict)

    @property
    def worst_margin(self) -> float | None:
        return self.violation.get("margin")


@dataclass(frozen=True)
class Witness:
    center: tuple[complex, complex]
    eps: float
    m: int
    t_min: float
    t_max: float
    C: float
    D: float
    s_bound: float


# -- plurisubharmonicity probes ------------------------------------------------

def _invariant_function(fn: str, rho: RhoProfile | None, m: int | None) -> Callable:
    if fn == "log_s":
        return lambda gs: np.log(st_arrays(gs)[0])
    if fn == "log_t":
        return lambda gs: np.log(st_arrays(gs)[1])
    if fn == "log_norm":
        if rho is None or m is None:
            raise DomainError("log_norm needs a profile and a weight")
        return lambda gs: log_norm_st(*st_arrays(gs), rho, m)
    raise DomainError(f"unknown invariant function {fn!r}")


def random_direction(rng: np.random.Generator) -> np.ndarray:
    """Unit-Frobenius element of the complex span of ``C, H, W``."""
    a, b, c = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    V = a * C + b * H + c * W
    return V / np.linalg.norm(V)


def circle_margin(f: Callable, g: np.ndarray, V: np.ndarray, radius: float, points: int) -> float:
    """Mean of ``f(g exp(r e^{i phi} V))`` over the circle, minus ``f(g)``."""
    phases = np.exp(2j * np.pi * np.arange(points) / points)
    ring = g @ exp_traceless(radius * phases[:, None, None] * V)
    return float(np.mean(f(ring)) - f(g[None])[0])


def refined_margin(f: Callable, g: np.ndarray, V: np.ndarray, radius: float, points: int) -> float:
    """``circle_margin``, re-sampled on finer circles while it is negative.

    Near-singular sites alias on coarse circles and can fake a negative margin.
    """
    mg = circle_margin(f, g, V, radius, points)
    while mg < 0 and points < MAX_CIRCLE_POINTS:
        points *= 4
        fine = circle_margin(f, g, V, radius, points)
        done = abs(fine - mg) <= 1e-12 + 1e-6 * abs(fine)
        mg = fine
        if done:
            break
    return mg


def submean_probe(
    fn: str,
    seed: int = 0,
    n_samples: int = 2000,
    radius: float = 0.05,
    circle_points: int = 64,
    h_max: float = 3.0,
    x_max: float = 2.0,
    rho: RhoProfile | None = None,
    m: int | None = None,
    sites=None,
) -> SubmeanReport:
    """Circle submean test of ``fn`` along holomorphic discs ``w -> g exp(w V)``.

    Negative margins are confirmed on finer circles before they are reported.
    ``sites`` overrides sampling with explicit ``(g, V)`` pairs.  The Levi
    estimate is ``margin / r^2``, the complex Hessian in direction ``V``.
    """
    if not 1e-4 < radius < 0.5:
        raise DomainError("radius must lie in (1e-4, 0.5)")
    if circle_points < 16:
        raise DomainError("need at least 16 circle points")
    f = _invariant_function(fn, rho, m)
    if sites is None:
        sites = (
            (sample_group(seed, h_max, x_max, i), random_direction(substream(seed, i, 1)))
            for i in range(n_samples)
        )
    margins = []
    worst, worst_site = np.inf, None
    for g, V in sites:
        g = np.asarray(g, dtype=complex)
        V = np.asarray(V, dtype=complex)
        mg = refined_margin(f, g, V, radius, circle_points)
        if mg < worst:
            worst, worst_site = mg, (g, V)
        margins.append(mg)
    margins = np.asarray(margins)
    levi = margins / radius**2
    return SubmeanReport(
        samples=len(margins),
        radius=radius,
        worst_margin=float(margins.min()),
        worst_site=worst_site,
        levi_min=float(levi.min()),
        levi_mean=float(levi.mean()),
        levi_max=float(levi.max()),
    )


# -- delta diagnostics ---------------------------------------------------------

def delta_report(rho: RhoProfile, m: int, tau_max: float = 40.0, steps: int = 400,
                 tol: float = TOL_CONVEX) -> DeltaReport:
    if tau_max <= 0 or steps < 2:
        raise DomainError("delta_report needs tau_max > 0 and steps >= 2")
    taus = np.linspace(0.0, tau_max, steps + 1)
    vals = np.asarray(delta(rho, m, taus))
    diffs = np.diff(vals)
    monotone = bool(np.all(diffs >= -tol))
    convex = bool(np.all(convexity_margins(taus, vals) >= -tol))
    divergent = bool(vals[-1] > vals[0] + 10 * tol and diffs[-1] > tol)
    zero = bool(np.max(np.abs(vals)) <= TOL_ZERO)
    return DeltaReport(taus, vals, monotone, convex, divergent, zero)


def check_containment_max(rho: RhoProfile, m: int, h_grid) -> tuple[bool, float]:
    """``rho >= rho_max`` on the grid; returns the verdict and the worst gap."""
    if not is_normalized(rho):
        raise DomainError("profile must be normalized (rho(0) = 1)")
    h = np.asarray(h_grid, dtype=float)
    gap = np.exp(rho.log(h)) - rho_max(m, h)
    worst = float(np.min(gap))
    return worst >= -1e-10, worst


@dataclass(frozen=True, eq=False)
class CurveReport:
    x: np.ndarray
    values: np.ndarray
    convex: bool
    worst_margin: float


def distinguished_curve(rho: RhoProfile, m: int, x_grid, tol: float = TOL_CONVEX) -> CurveReport:
    """``delta(log(1 + e^{2x}))``: the log-norm along ``x+iy -> [[1, 0], [e^{x+iy}, 1]]``."""
    if m <= 0:
        raise DomainError("distinguished_curve needs m > 0")
    x = np.asarray(x_grid, dtype=float)
    vals = np.asarray(delta(rho, m, np.logaddexp(0.0, 2 * x)))
    margins = convexity_margins(x, vals)
    worst = float(margins.min()) if margins.size else 0.0
    return CurveReport(x, vals, worst >= -tol, worst)


def curve_submean(rho: RhoProfile, m: int, x0: float, radius: float, points: int = 64) -> float:
    """Circle submean margin of the log-norm along the lower unipotent curve at ``x0``."""
    w = x0 + radius * np.exp(2j * np.pi * np.arange(points + 1) / points)
    gs = np.zeros((points + 1, 2, 2), dtype=complex)
    gs[:, 0, 0] = 1
    gs[:, 1, 1] = 1
    gs[:, 1, 0] = np.exp(w)
    gs[-1, 1, 0] = np.exp(x0)
    vals = log_norm_st(*st_arrays(gs), rho, m)
    return float(np.mean(vals[:-1]) - vals[-1])


# -- verdicts ------------------------------------------------------------------

def _convexity_refutation(check: ConvexityCheck) -> SteinVerdict:
    return SteinVerdict(
        Status.REFUTED,
        "not_log_convex",
        check,
        {"kind": "log_convexity", "triple": check.worst_triple, "margin": check.worst_margin},
    )


def certify_stein(rho: RhoProfile, m: int, params: CertifyParams = CertifyParams()) -> SteinVerdict:
    if not is_normalized(rho):
        raise DomainError("profile must be normalized (rho(0) = 1)")
    m = abs(int(m))  # L^{-m} is handled by the duality map
    conv = check_log_convex(rho, params.h_grid())
    if m == 0:
        if conv.passed:
            return SteinVerdict(Status.CERTIFIED, "log_convex", conv, {"margin": conv.worst_margin})
        return _convexity_refutation(conv)
    if not conv.passed:
        return _convexity_refutation(conv)

    report = delta_report(rho, m, params.tau_max, params.tau_steps)
    if not report.monotone:
        diffs = np.diff(report.delta_values)
        k = int(np.argmin(diffs))
        return SteinVerdict(
            Status.REFUTED,
            "delta_decreasing",
            report,
            {
                "kind": "delta_pair",
                "taus": (float(report.tau_grid[k]), float(report.tau_grid[k + 1])),
                "margin": float(diffs[k]),
            },
        )
    if report.midpoint_convex:
        margins = convexity_margins(report.tau_grid, report.delta_values)
        return SteinVerdict(
            Status.CERTIFIED, "delta_convex_nondecreasing", report, {"margin": float(margins.min())}
        )

    probe = submean_probe(
        "log_norm",
        seed=params.seed,
        n_samples=params.n_samples,
        radius=params.radius,
        circle_points=params.circle_points,
        h_max=params.sample_h_max,
        x_max=params.sample_x_max,
        rho=rho,
        m=m,
    )
    violation = {"kind": "submean", "margin": probe.worst_margin, "radius": probe.radius}
    if probe.worst_margin < -params.tol_refute:
        return SteinVerdict(Status.REFUTED, "negative_submean", probe, violation)
    return SteinVerdict(Status.INCONCLUSIVE, "no_violation_found", probe, violation)


def hyperbolicity_witness(
    rho: RhoProfile,
    m: int,
    center: tuple[complex, complex],
    eps: float,
    tau_scan_max: float = 400.0,
    scan_steps: int = 4000,
    params: CertifyParams = CertifyParams(),
) -> Witness:
    """Boundedness constants ``C, D`` over the ball of radius ``eps`` about ``center``.

    On covering points with fiber in the ball, ``log t > -C`` and
    ``log s + log t < D``, hence ``s < exp(D + C)``.
    """
    if m <= 0:
        raise DomainError("witness construction needs m > 0 (use the duality map)")
    r = float(np.hypot(abs(center[0]), abs(center[1])))
    if eps <= 0 or r - eps <= 0:
        raise DomainError("ball touches the puncture at the origin")
    if r + eps >= 1:
        raise DomainError("ball is not inside the unit ball")
    verdict = certify_stein(rho, m, params)
    if verdict.status is not Status.CERTIFIED:
        raise DomainError(f"profile is not Stein-certified ({verdict.status.value})")
    report = verdict.evidence
    if report.identically_zero:
        raise WitnessImpossible("delta vanishes identically: maximal bundle is not hyperbolic")

    t_min, t_max = (r - eps) ** 2, (r + eps) ** 2
    C_const = -np.log(t_min)
    target = m / 2 * C_const
    taus = np.linspace(0.0, tau_scan_max, scan_steps + 1)
    vals = np.asarray(delta(rho, m, taus))
    hit = np.nonzero(vals >= target)[0]
    if hit.size == 0:
        raise DomainError(f"delta does not reach {target:.6g} by tau = {tau_scan_max}")
    k = int(hit[0])
    lo, hi = taus[k - 1], taus[k]
    D = brentq(lambda tau: delta(rho, m, tau) - target, lo, hi, xtol=1e-14, rtol=1e-15)
    return Witness(
        center=(complex(center[0]), complex(center[1])),
        eps=float(eps),
        m=m,
        t_min=float(t_min),
        t_max=float(t_max),
        C=float(C_const),
        D=float(D),
        s_bound=float(np.exp(D + C_const)),
    )
