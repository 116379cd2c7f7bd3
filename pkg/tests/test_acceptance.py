"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line."""
import numpy as np
import pytest

from qbl import algebra as alg
from qbl.algebra import C, H, I2, W, W_INV, exp_traceless
from qbl.bundles import (
    BundlePoint,
    FiberClass,
    Membership,
    c_action,
    cover_log_norm,
    cover_membership,
    cover_project,
    dual_map,
    embed_iota,
    fiber_norm,
    gamma_element,
    membership,
    project_fiber,
    same_point,
)
from qbl.certify import (
    CertifyParams,
    Status,
    certify_stein,
    check_containment_max,
    hyperbolicity_witness,
    submean_probe,
)
from qbl.mostow import SliceElement, coords, decompose, gram_slice, slice_coords, st_arrays
from qbl.profiles import Constant, CoshPower, Grid, delta, eval_rho, rho_max, tau_of_h

H_GRID = np.linspace(0.0, 5.0, 101)
WEIGHTS = (1, 2, 3)


@pytest.fixture
def report(capsys):
    def emit(number, title, passed, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if passed else 'FAIL'}] criterion {number:2d} {title}: {detail}")
        assert passed, detail

    return emit


def test_criterion_01_mostow_round_trip(group_samples, report):
    worst_res, worst_unit, min_h = 0.0, 0.0, np.inf
    for g in group_samples:
        f = decompose(g)
        worst_res = max(worst_res, np.linalg.norm(f.compose() - g))
        u = f.u
        worst_unit = max(worst_unit, np.linalg.norm(u @ alg.dagger(u) - I2), abs(alg.det2(u) - 1))
        min_h = min(min_h, f.h)
    ok = worst_res <= 1e-9 and worst_unit <= 1e-9 and min_h >= 0
    report(1, "Mostow round trip", ok,
           f"n={len(group_samples)} residual={worst_res:.2e} unitarity={worst_unit:.2e} min_h={min_h:.2e}")


def test_criterion_02_coordinate_agreement(group_samples, report):
    worst_zeta, worst_h = 0.0, 0.0
    for g in group_samples:
        f = decompose(g)
        c = coords(g)
        worst_zeta = max(worst_zeta, abs(abs(f.zeta) - (c.t / c.s) ** 0.25) / abs(f.zeta))
        ref_h = 0.5 * np.arccosh(np.sqrt(max(c.s * c.t, 1.0)))
        worst_h = max(worst_h, abs(f.h - ref_h))
    ok = worst_zeta <= 1e-10 and worst_h <= 1e-9
    report(2, "coordinate agreement", ok, f"|zeta| rel={worst_zeta:.2e} h abs={worst_h:.2e}")


def test_criterion_03_equivariance(group_samples, report):
    rng = np.random.default_rng(3)
    worst_u, worst_k, fibers_ok = 0.0, 0.0, True
    for g in group_samples[:1000]:
        base = gram_slice(g)
        M = base.matrix()
        u = alg.haar_su2(rng)
        worst_u = max(worst_u, np.linalg.norm(gram_slice(u @ g).matrix() - M) / np.linalg.norm(M))
        y = rng.uniform(-np.pi, np.pi)
        k = exp_traceless(y * C)
        rhs = k @ M @ alg.inv2(k)
        worst_k = max(worst_k, np.linalg.norm(gram_slice(g @ alg.inv2(k)).matrix() - rhs) / np.linalg.norm(rhs))
        rotated = SliceElement(base.s, base.t, np.exp(2j * y) * base.b)
        fibers_ok &= slice_coords(rotated) == slice_coords(base)
    ok = worst_u <= 1e-12 and worst_k <= 1e-12 and fibers_ok
    report(3, "equivariance", ok, f"U rel={worst_u:.2e} K rel={worst_k:.2e} fibers constant={fibers_ok}")


def test_criterion_04_psh_probes(report):
    worst = {fn: submean_probe(fn, seed=4, n_samples=2000, radius=0.05).worst_margin for fn in ("log_s", "log_t")}
    E12 = np.array([[0, 1], [0, 0]], dtype=complex)
    levi = submean_probe("log_t", sites=[(I2, E12)], radius=1e-2).levi_mean
    ok = min(worst.values()) >= -1e-7 and abs(levi - 1.0) <= 1e-3
    report(4, "plurisubharmonicity probes", ok,
           f"worst log_s={worst['log_s']:.2e} log_t={worst['log_t']:.2e} levi={levi:.6f}")


def _certification_matrix():
    params = CertifyParams()
    rows = []
    for m in WEIGHTS:
        v = certify_stein(CoshPower(m / 2), m, params)
        ok = v.status is Status.CERTIFIED and np.max(np.abs(v.evidence.delta_values)) <= 1e-12
        rows.append((f"m={m} maximal", ok))
        v = certify_stein(CoshPower(m / 2 + 0.5), m, params)
        ok = v.status is Status.CERTIFIED and np.all(np.diff(v.evidence.delta_values) > 0)
        rows.append((f"m={m} above", ok))
        v = certify_stein(CoshPower(m / 2 - 0.25), m, params)
        ok = v.status is Status.REFUTED and v.worst_margin is not None and v.worst_margin < 0
        rows.append((f"m={m} below", ok))
    rows.append(("m=0 constant", certify_stein(Constant(1.0), 0, params).status is Status.CERTIFIED))
    return rows


def test_criterion_05_certification_matrix(report):
    rows = _certification_matrix()
    failed = [name for name, ok in rows if not ok]
    report(5, "Stein certification matrix", not failed, f"{len(rows) - len(failed)}/{len(rows)} cells" +
           (f" failed={failed}" if failed else ""))


def _suite_profiles():
    out = []
    for m in WEIGHTS:
        out += [(CoshPower(a), m) for a in (m / 2 - 0.25, m / 2, m / 2 + 0.5, m / 2 + 2)]
        taus = tau_of_h(np.linspace(0, 8, 801))
        convex = Grid(8.0, tuple(m / 4 * taus + 0.05 * taus + 0.01 * taus**2))
        out.append((convex, m))
    return out


def test_criterion_06_containment(report):
    params = CertifyParams(n_samples=300)
    checked, worst = 0, np.inf
    for rho, m in _suite_profiles():
        if certify_stein(rho, m, params).status is not Status.CERTIFIED:
            continue
        checked += 1
        gap = np.min(eval_rho(rho, H_GRID) - rho_max(m, H_GRID))
        worst = min(worst, gap)
        assert check_containment_max(rho, m, H_GRID)[0]
    ok = checked > 0 and worst >= -1e-10
    report(6, "containment", ok, f"{checked} certified profiles, min rho-rho_max={worst:.2e}")


def test_criterion_07_duality(report):
    ad = [W @ X @ W_INV for X in (C, H, W)]
    ad_err = max(np.max(np.abs(ad[0] + C)), np.max(np.abs(ad[1] + H)), np.max(np.abs(ad[2] - W)))
    rng = np.random.default_rng(7)
    rho = CoshPower(0.8)
    mismatches, involution_ok = 0, True
    for m in (1, 2):
        for _ in range(1000):
            g = alg.sample_group(int(rng.integers(2**31)), 2.0, 1.0)
            p = BundlePoint(g, complex(*rng.uniform(-1, 1, 2)), m)
            a, b = membership(p, rho), membership(dual_map(p), rho)
            if a is not b and Membership.BOUNDARY not in (a, b):
                mismatches += 1
            involution_ok &= same_point(dual_map(dual_map(p)), p)
    ok = ad_err <= 1e-15 and mismatches == 0 and involution_ok
    report(7, "duality", ok, f"Ad(W) err={ad_err:.1e} membership mismatches={mismatches} involution={involution_ok}")


def _cover_members(rho, m, center, eps, s_cap, n, rng):
    """Rejection sample cover elements whose fiber (z3, z4) lies in the eps-ball."""
    center = np.asarray(center, dtype=complex)
    found = []
    total = 0
    while total < n:
        k = 50_000
        v = rng.standard_normal((k, 4))
        v /= np.linalg.norm(v, axis=1, keepdims=True)
        v *= eps * rng.uniform(0, 1, (k, 1)) ** 0.25
        col = center + v[:, :2] + 1j * v[:, 2:]
        t = np.sum(np.abs(col) ** 2, axis=1)
        # first column p + w col with p orthogonal to col and det = 1
        p = np.stack([np.conj(col[:, 1]), -np.conj(col[:, 0])], axis=1) / t[:, None]
        w = np.sqrt(rng.uniform(0, s_cap / t)) * np.exp(2j * np.pi * rng.uniform(0, 1, k))
        first = p + w[:, None] * col
        gs = np.stack([first, col], axis=2)
        keep = cover_log_norm(gs, rho, m) < -1e-10
        found.append(gs[keep])
        total += int(keep.sum())
    return np.concatenate(found)[:n]


def test_criterion_08_witness(report):
    m, rho, center, eps = 2, CoshPower(1.5), (0.5, 0.0), 0.1
    w = hyperbolicity_witness(rho, m, center, eps)
    C_ref = -np.log(0.16)
    err_C = abs(w.C - C_ref)
    err_D = abs(w.D - 4 * C_ref)
    rel_s = abs(w.s_bound / np.exp(5 * C_ref) - 1)

    rng = np.random.default_rng(8)
    gs = _cover_members(rho, m, center, eps, 2 * w.s_bound, 10_000, rng)
    s, t = st_arrays(gs)
    dets_ok = np.max(np.abs(alg.det2(gs) - 1)) <= 1e-9
    in_ball = np.max(np.hypot(np.abs(gs[:, 0, 1] - center[0]), np.abs(gs[:, 1, 1] - center[1]))) < eps
    bounded = np.all(s <= w.s_bound * (1 + 1e-9))
    cross = all(cover_membership(g, rho, m) for g in gs[:200])
    fiber = all(
        (lambda f, g: f.z3 == g[0, 1] and f.z4 == g[1, 1])(project_fiber(cover_project(g, m)), g) for g in gs[:200]
    )
    ok = err_C <= 1e-12 and err_D <= 1e-9 and rel_s <= 1e-6 and len(gs) == 10_000
    ok = ok and dets_ok and in_ball and bounded and cross and fiber
    report(8, "witness reproduction", ok,
           f"C err={err_C:.1e} D err={err_D:.1e} s_bound rel={rel_s:.1e} "
           f"members={len(gs)} max s/s_bound={np.max(s) / w.s_bound:.6f}")


def test_criterion_09_covering(report):
    covering_ok = True
    for m in (2, 3, 5):
        for i in range(200):
            g = alg.sample_group(9, 2.0, 1.0, i)
            base = cover_project(g, m)
            for j in range(m):
                covering_ok &= same_point(cover_project(g @ gamma_element(m, j), m), base)
    rng = np.random.default_rng(9)
    worst_iota = 0.0
    for m in (2, 3, 5):
        for _ in range(200):
            z, w = rng.standard_normal(2) * 0.5 + 1j * rng.standard_normal(2) * 0.5
            base = np.array(embed_iota(FiberClass(z, w, m)))
            for j in range(m):
                gam = np.exp(2j * np.pi * j / m)
                rot = np.array(embed_iota(FiberClass(gam * z, gam * w, m)))
                worst_iota = max(worst_iota, np.max(np.abs(rot - base)) / max(1.0, np.max(np.abs(base))))
    worst_norm = 0.0
    rho = CoshPower(0.9)
    for _ in range(1000):
        m = int(rng.integers(-4, 5))
        p = BundlePoint(alg.sample_group(int(rng.integers(2**31)), 2.0, 1.0), complex(*rng.uniform(-1, 1, 2)), m)
        kappa = np.exp(rng.uniform(-1.5, 1.5) + 1j * rng.uniform(-np.pi, np.pi))
        q = BundlePoint(p.g @ np.diag([1 / kappa, kappa]), kappa ** (-m) * p.z, m)
        a, b = fiber_norm(p, rho), fiber_norm(q, rho)
        worst_norm = max(worst_norm, abs(a - b) / max(1.0, a))
    ok = covering_ok and worst_iota <= 1e-14 and worst_norm <= 1e-12
    report(9, "covering and quotient", ok,
           f"deck invariance={covering_ok} iota err={worst_iota:.1e} norm err={worst_norm:.1e}")


def test_criterion_10_maximal_bundle(report):
    violations, members = 0, 0
    for m in WEIGHTS:
        rho = CoshPower(m / 2)
        i = 0
        count = 0
        while count < 1000:
            g = alg.sample_group(10 + m, 2.0, 1.0, i)
            i += 1
            if cover_membership(g, rho, m):
                count += 1
                violations += coords(g).t >= 1
        members += count
    rng = np.random.default_rng(10)
    t_exact, worst_law = True, 0.0
    for i in range(1000):
        g = alg.sample_group(10, 3.0, 2.0, i)
        w1, w2 = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        t_exact &= coords(c_action(g, w1)).t == coords(g).t
        lhs, rhs = c_action(c_action(g, w1), w2), c_action(g, w1 + w2)
        worst_law = max(worst_law, np.max(np.abs(lhs - rhs)) / max(1.0, np.max(np.abs(rhs))))
    ok = violations == 0 and t_exact and worst_law <= 1e-14
    report(10, "maximal bundle", ok,
           f"{members} members with t>=1: {violations}; t preserved={t_exact} group law err={worst_law:.1e}")


def test_witness_bound_is_sharp_for_cosh_power():
    # membership reads s < t^-5 here, so sampled s should approach the bound
    w = hyperbolicity_witness(CoshPower(1.5), 2, (0.5, 0.0), 0.1)
    assert w.s_bound == pytest.approx(0.16**-5, rel=1e-9)
    assert delta(CoshPower(1.5), 2, w.D) == pytest.approx(w.C, abs=1e-12)
