"""Quick end-to-end consistency checks, run by ``qbl selftest``."""
from __future__ import annotations

import numpy as np

from . import algebra as alg
from .bundles import BundlePoint, cover_project, dual_map, embed_iota, FiberClass, gamma_element, same_point
from .certify import Status, certify_stein, hyperbolicity_witness, submean_probe
from .mostow import decompose, check_factors, coords, radial, zeta_modulus
from .profiles import Constant, CoshPower


def _mostow(n: int, seed: int):
    worst = 0.0
    for i in range(n):
        g = alg.sample_group(seed, 3.0, 2.0, i)
        f = decompose(g)
        if not check_factors(f, g):
            return False, f"sample {i} fails reconstruction"
        c = coords(g)
        worst = max(worst, abs(zeta_modulus(c) / abs(f.zeta) - 1), abs(radial(c) - f.h))
    return worst <= 1e-9, f"max coordinate error {worst:.2e}"


def _duality(_n: int, _seed: int):
    err = max(
        np.abs(alg.W @ alg.C @ alg.W_INV + alg.C).max(),
        np.abs(alg.W @ alg.H @ alg.W_INV + alg.H).max(),
        np.abs(alg.W @ alg.W @ alg.W_INV - alg.W).max(),
    )
    p = BundlePoint(alg.sample_group(1, 2.0, 1.0), 0.3 + 0.1j, 2)
    return bool(err <= 1e-15 and same_point(dual_map(dual_map(p)), p)), f"Ad(W) error {err:.1e}"


def _covering(_n: int, seed: int):
    g = alg.sample_group(seed, 2.0, 1.0)
    ok = True
    for m in (2, 3, 5):
        for j in range(m):
            ok &= same_point(cover_project(g @ gamma_element(m, j), m), cover_project(g, m))
        f = FiberClass(0.3 + 0.2j, -0.1 + 0.4j, m)
        for j in range(m):
            gam = np.exp(2j * np.pi * j / m)
            rot = embed_iota(FiberClass(gam * f.z3, gam * f.z4, m))
            ok &= bool(np.allclose(rot, embed_iota(f), rtol=0, atol=1e-14))
    return ok, "Gamma_m orbits collapse"


def _psh(n: int, seed: int):
    worst = min(submean_probe(fn, seed=seed, n_samples=n).worst_margin for fn in ("log_s", "log_t"))
    site = [(alg.I2, np.array([[0, 1], [0, 0]], dtype=complex))]
    levi = submean_probe("log_t", sites=site, radius=1e-2).levi_mean
    return worst >= -1e-7 and abs(levi - 1) <= 1e-3, f"worst margin {worst:.1e}, Levi {levi:.6f}"


def _certify(_n: int, _seed: int):
    ok = True
    for m in (1, 2, 3):
        ok &= certify_stein(CoshPower(m / 2), m).status is Status.CERTIFIED
        ok &= certify_stein(CoshPower(m / 2 + 0.5), m).status is Status.CERTIFIED
        ok &= certify_stein(CoshPower(m / 2 - 0.25), m).status is Status.REFUTED
    ok &= certify_stein(Constant(1.0), 0).status is Status.CERTIFIED
    return ok, "certification matrix"


def _witness(_n: int, _seed: int):
    w = hyperbolicity_witness(CoshPower(1.5), 2, (0.5, 0.0), 0.1)
    c = -np.log(0.16)
    ok = abs(w.C - c) <= 1e-12 and abs(w.D - 4 * c) <= 1e-9
    return ok, f"C={w.C:.12f} D={w.D:.12f} s_bound={w.s_bound:.6f}"


CHECKS = {
    "mostow_round_trip": _mostow,
    "duality": _duality,
    "covering": _covering,
    "plurisubharmonicity": _psh,
    "certification": _certify,
    "witness": _witness,
}


def run_selftest(n: int = 200, seed: int = 0) -> list[dict]:
    out = []
    for name, check in CHECKS.items():
        passed, detail = check(n, seed)
        out.append({"check": name, "passed": bool(passed), "detail": detail})
    return out
