import numpy as np
import pytest

from hermlab import catalog, families
from hermlab import expr as ex
from hermlab import geometry as geo
from hermlab import tensors as tz
from hermlab.geometry import MetricJet


def metric_fn(model):
    fns = [[ex.compile_expr(e) for e in row] for row in model.metric]

    def g(z):
        z = list(z)
        w = [x.conjugate() for x in z]
        return np.array([[f(z, w) for f in row] for row in fns], dtype=complex)
    return g


def all_curvatures(pkg, ts=(0.0, 0.5, -1.0, 2.0)):
    out = {"chern": pkg.chern, "bismut": geo.bismut_curvature(pkg),
           "riemannian": geo.riemannian_curvature(pkg)}
    for t in ts:
        out[f"t={t}"] = geo.gauduchon_curvature(pkg, t)
    return out


# ------------------------------------------------------------- Chern data

def test_flat_torus_is_flat():
    pkg = geo.curvature_package(catalog.build("flat_torus", n=3), (0.1, 0.2j, -0.3))
    assert np.all(pkg.torsion == 0) and np.all(pkg.chern == 0)
    assert np.all(pkg.coeffs.christoffel == 0)
    for P in all_curvatures(pkg).values():
        assert np.all(P == 0)


def test_kaehler_charts_have_no_torsion():
    for seed in range(6):
        model = families.random_chart_model(seed, 2 + seed % 2, kaehler=True)
        pkg = geo.curvature_package(model, (0.1,) * model.dim)
        assert np.max(np.abs(pkg.torsion)) <= 1e-13
        assert np.max(np.abs(pkg.DT)) <= 1e-12 and np.max(np.abs(pkg.DbT)) <= 1e-12
        assert np.allclose(geo.bismut_curvature(pkg), pkg.chern, atol=1e-12)
        assert np.allclose(geo.riemannian_curvature(pkg), pkg.chern, atol=1e-12)


def test_conformally_flat_line_metric_has_no_torsion():
    model = catalog.ManifoldModel("chart", 1, metric=((ex.parse("1+z1*w1", 1),),))
    pkg = geo.curvature_package(model, (0.3 - 0.4j,))
    assert np.all(pkg.torsion == 0)


def test_ball_metric_has_constant_hsc_minus_two():
    model = catalog.build("kaehler_ball_like", n=2)
    for pt in [(0, 0), (0.2 + 0.1j, -0.3j)]:
        pkg = geo.curvature_package(model, pt)
        assert np.max(np.abs(pkg.torsion)) <= 1e-13
        c, res = tz.constant_hsc_fit(pkg.chern)
        assert c == pytest.approx(-2, abs=1e-12) and res <= 1e-12


def test_hopf_has_torsion_and_compatible_connection(hopf2):
    pkg = geo.curvature_package(hopf2, (1, 0))
    assert np.max(np.abs(pkg.torsion)) > 0.5
    assert pkg.coeffs.compatibility_residual <= 1e-10
    assert tz.torsion_antisymmetry_residual(pkg.torsion) == 0


@pytest.mark.parametrize("point", [(1, 0), (0.7 + 0.2j, -0.3 + 0.5j)])
def test_structure_equation_oracle_on_hopf(hopf2, point):
    """d phi = -theta^T ^ phi + tau, with d phi from finite differences of the
    coframe field of the Gram-Schmidt frame."""
    n = 2
    g = metric_fn(hopf2)
    z0 = np.array(point, dtype=complex)
    pkg = geo.curvature_package(hopf2, point)
    E = pkg.frame.matrix
    F = np.linalg.inv(E)           # phi_b = sum_i F[i, b] dz_i

    def frame_at(z):
        return tz.gram_schmidt(g(z)).matrix

    def wirtinger(f, h=1e-3):
        """(d_m f, dbar_m f) for m = 1..n by Richardson central differences."""
        out_h, out_a = [], []
        for m in range(n):
            e = np.zeros(n, dtype=complex)
            e[m] = 1

            def c(u, s):
                return (f(z0 + s * u) - f(z0 - s * u)) / (2 * s)

            dx = (4 * c(e, h / 2) - c(e, h)) / 3
            dy = (4 * c(1j * e, h / 2) - c(1j * e, h)) / 3
            out_h.append((dx - 1j * dy) / 2)
            out_a.append((dx + 1j * dy) / 2)
        return np.array(out_h), np.array(out_a)

    dE, dbE = wirtinger(frame_at)
    dF, dbF = wirtinger(lambda z: np.linalg.inv(frame_at(z)))
    Gam = pkg.coeffs.christoffel
    # 1-forms as arrays over the basis (d_1..d_n, dbar_1..dbar_n)
    theta = np.zeros((n, n, 2 * n), dtype=complex)
    theta[:, :, :n] = np.einsum("mak,kb->abm", dE, F) + np.einsum("ai,mik,kb->abm", E, Gam, F)
    theta[:, :, n:] = np.einsum("mak,kb->abm", dbE, F)
    phi = np.zeros((n, 2 * n), dtype=complex)
    phi[:, :n] = F.T
    # d phi_b (X_p, X_q) = X_p phi_b(X_q) - X_q phi_b(X_p) for coordinate fields
    dphi = np.zeros((n, 2 * n, 2 * n), dtype=complex)
    dphi[:, :n, :n] = np.einsum("mib->bmi", dF) - np.einsum("mib->bim", dF)
    dphi[:, n:, :n] = np.einsum("mib->bmi", dbF)
    dphi[:, :n, n:] = -np.einsum("mib->bim", dbF)

    def wedge(a, b):
        return np.einsum("p,q->pq", a, b) - np.einsum("q,p->pq", a, b)

    rhs = np.zeros_like(dphi)
    for b in range(n):
        for a in range(n):
            rhs[b] -= wedge(theta[a, b], phi[a])
        for i in range(n):
            for k in range(n):
                rhs[b] += 0.5 * pkg.torsion[b, i, k] * wedge(phi[i], phi[k])
    assert np.max(np.abs(dphi - rhs)) <= 1e-9


def test_finite_difference_jet_matches_exact_jet(hopf3):
    point = (0.4 + 0.1j, -0.6, 0.2j)
    exact = geo.metric_jet(hopf3, point)
    approx = geo.jet_from_callable(metric_fn(hopf3), point)
    assert np.max(np.abs(exact.dg - approx.dg)) <= 1e-9
    assert np.max(np.abs(exact.ddbg - approx.ddbg)) <= 1e-6
    assert np.max(np.abs(exact.ddg - approx.ddg)) <= 1e-6
    assert exact.conjugation_residual() <= 1e-13


def test_curvature_models_are_not_applicable():
    with pytest.raises(geo.NotApplicable):
        geo.curvature_package(catalog.build("wallach", b=0.2, t=0.1, s=0))


def test_singular_point_reported(hopf2):
    with pytest.raises(geo.GeometryError):
        geo.curvature_package(hopf2, (0, 0))


# ------------------------------------------------------ torsion derivatives

def test_bismut_derivative_relation_and_dual_route(random_packages):
    for _, _, pkg in random_packages[::5]:
        diff = pkg.DbT - pkg.DbT_b
        assert np.max(np.abs(diff - geo.eq7_difference(pkg.torsion))) <= 1e-12
        DT_g, DbT_g = geo.bismut_derivatives_gamma(pkg.torsion, pkg.DT, pkg.DbT)
        assert np.max(np.abs(DT_g - pkg.DT_b)) <= 1e-10
        assert np.max(np.abs(DbT_g - pkg.DbT_b)) <= 1e-10


def test_so3c_is_bismut_torsion_parallel(so3c):
    pkg = geo.curvature_package(so3c)
    assert np.max(np.abs(pkg.DT_b)) <= 1e-12 and np.max(np.abs(pkg.DbT_b)) <= 1e-12
    assert np.all(pkg.chern == 0)


# ------------------------------------------------------ curvature identities

def test_two_riemannian_routes_agree(random_packages, hopf2):
    pkgs = [p for _, _, p in random_packages] + [geo.curvature_package(hopf2, (1, 0))]
    for pkg in pkgs:
        a = geo.riemannian_curvature(pkg, "chern")
        b = geo.riemannian_curvature(pkg, "bismut")
        assert np.max(np.abs(a - b)) <= 1e-10


def test_riemannian_minus_bismut(random_packages, hopf2):
    pkgs = [p for _, _, p in random_packages] + [geo.curvature_package(hopf2, (1, 0))]
    for pkg in pkgs:
        lhs = geo.riemannian_curvature(pkg, "bismut") - geo.bismut_curvature(pkg)
        assert np.max(np.abs(lhs - geo.riemannian_minus_bismut(pkg))) <= 1e-10


def test_riemannian_minus_bismut_needs_plus_w(random_packages):
    """With ``-w`` in place of ``+w`` the torsion part is off by ``w / 2``,
    which is visibly nonzero for generic metrics."""
    worst = 0.0
    for _, _, pkg in random_packages:
        q = tz.quadratic_terms(pkg.torsion)
        minus_w = (-0.5 * geo.derivative_block(pkg.DbT_b)
                   + 0.25 * (-q["w"] - q["v_li"] - q["v_jk"] + 2 * q["v_ji"] + 2 * q["v_lk"]))
        lhs = geo.riemannian_curvature(pkg) - geo.bismut_curvature(pkg)
        worst = max(worst, float(np.max(np.abs(lhs - minus_w))))
    assert worst > 1e-3


def test_riemannian_matches_levi_civita_oracle_examples(hopf2):
    cases = [(catalog.build("flat_torus", n=2), (0.3, 0.1j)),
             (catalog.build("kaehler_ball_like", n=2), (0, 0)),
             (hopf2, (1, 0))]
    for model, point in cases:
        pkg = geo.curvature_package(model, point)
        oracle = geo.levi_civita_oracle(model, point)
        assert np.max(np.abs(oracle - geo.riemannian_curvature(pkg))) <= 1e-6


def test_levi_civita_oracle_flat_torus_is_zero():
    R = geo.levi_civita_oracle(catalog.build("flat_torus", n=2), (0.5, 0.5))
    assert np.max(np.abs(R)) == 0


def test_levi_civita_oracle_needs_chart(so3c):
    with pytest.raises(geo.NotApplicable):
        geo.levi_civita_oracle(so3c)


def test_connection_difference_oracle(random_packages):
    for _, _, pkg in random_packages[::4]:
        for t in (0.0, 0.5, 1.0, -1.0, 1.7):
            direct = geo.connection_difference_curvature(pkg, "gauduchon", t)
            assert np.max(np.abs(direct - geo.gauduchon_curvature(pkg, t))) <= 1e-10
        direct = geo.connection_difference_curvature(pkg, "riemannian")
        assert np.max(np.abs(direct - geo.riemannian_curvature(pkg))) <= 1e-10


def test_gauduchon_endpoints(random_packages):
    for _, _, pkg in random_packages[::3]:
        assert np.array_equal(geo.gauduchon_curvature(pkg, 1), geo.bismut_curvature(pkg))
        assert np.max(np.abs(geo.gauduchon_curvature(pkg, 0) - pkg.chern)) <= 1e-12


def test_gauduchon_is_quadratic_in_t(random_packages):
    for _, _, pkg in random_packages[::3]:
        g0, gh, g1 = (geo.gauduchon_curvature(pkg, t) for t in (0.0, 0.5, 1.0))
        predicted = 6 * g0 - 8 * gh + 3 * g1
        assert np.max(np.abs(predicted - geo.gauduchon_curvature(pkg, -1.0))) <= 1e-10


@pytest.mark.parametrize("name, point", [("hopf2", (1, 0)), ("hopf3", (0.2, 1j, -0.4)),
                                         ("so3c", None)])
def test_mirror_connection_diagonal_on_btp_models(name, point, hopf2, hopf3, so3c):
    model = {"hopf2": hopf2, "hopf3": hopf3, "so3c": so3c}[name]
    pkg = geo.curvature_package(model, point)
    Rm, Rb = geo.gauduchon_curvature(pkg, -1), geo.bismut_curvature(pkg)
    for i in range(model.dim):
        assert abs(Rm[i, i, i, i] - Rb[i, i, i, i]) <= 1e-12


def test_package_stores_requested_t(hopf2):
    pkg = geo.curvature_package(hopf2, (1, 0), ts=(0.5, -1))
    assert set(pkg.gauduchon) == {0.5, -1.0}
    assert np.array_equal(pkg.gauduchon[0.5], geo.gauduchon_curvature(pkg, 0.5))


def test_hermitian_pairing_of_all_curvatures(random_packages, so3c):
    pkgs = [p for _, _, p in random_packages] + [geo.curvature_package(so3c)]
    for pkg in pkgs:
        for P in all_curvatures(pkg).values():
            assert tz.hermitian_pairing_residual(P) <= 1e-10


# ---------------------------------------------------------------- Bianchi

def test_bianchi_on_catalog_and_random(random_packages):
    for name in ("flat_torus2", "flat_torus3", "kaehler_ball2", "hopf2", "hopf3"):
        model = catalog.load_model(catalog.data_path(f"{name}.model.json"))
        rng = np.random.default_rng(1)
        for _ in range(3):
            pt = families.random_point(rng, model.dim, 0.5)
            if name.startswith("hopf"):
                pt = tuple(x + 0.6 for x in pt)
            res = geo.bianchi_check(geo.curvature_package(model, pt))
            assert max(res.values()) <= 1e-9, (name, res)
    for _, _, pkg in random_packages:
        assert max(geo.bianchi_check(pkg).values()) <= 1e-9


def test_bianchi_kaehler_symmetric_curvature():
    model = families.random_chart_model(3, 3, kaehler=True)
    pkg = geo.curvature_package(model, (0.1, -0.1j, 0.05))
    assert max(geo.bianchi_check(pkg).values()) <= 1e-12
    assert np.allclose(pkg.chern, pkg.chern.transpose(2, 1, 0, 3), atol=1e-12)


def test_bianchi_so3c_is_jacobi(so3c):
    assert max(geo.bianchi_check(geo.curvature_package(so3c)).values()) == 0


# -------------------------------------------------------- frame covariance

def _pulled_back_jet(jet, M):
    """Jet of the metric in coordinates ``z = M z'``."""
    Mc = np.conj(M)
    g = np.einsum("ai,bj,ab->ij", M, Mc, jet.g)
    dg = np.einsum("km,ai,bj,kab->mij", M, M, Mc, jet.dg)
    dbg = np.einsum("km,ai,bj,kab->mij", Mc, M, Mc, jet.dbg)
    ddbg = np.einsum("pk,ql,ai,bj,pqab->klij", M, Mc, M, Mc, jet.ddbg)
    ddg = np.einsum("pk,ql,ai,bj,pqab->klij", M, M, M, Mc, jet.ddg)
    dbdbg = np.einsum("pk,ql,ai,bj,pqab->klij", Mc, Mc, M, Mc, jet.dbdbg)
    point = tuple(np.linalg.solve(M, np.asarray(jet.point)))
    return MetricJet(point, g, dg, dbg, ddbg, ddg, dbdbg)


def test_pipeline_is_frame_covariant(random_charts):
    rng = np.random.default_rng(77)
    for model, point in random_charts[::7]:
        n = model.dim
        jet = geo.metric_jet(model, point)
        M = tz.haar_unitary(n, rng) @ np.diag(1 + rng.random(n))
        jet2 = _pulled_back_jet(jet, M)
        p1, p2 = geo.curvature_package(jet), geo.curvature_package(jet2)
        # e'_a = sum_b U[a, b] e_b
        U = p2.frame.matrix @ M.T @ np.linalg.inv(p1.frame.matrix)
        assert tz.is_unitary(U, 1e-10)
        assert np.max(np.abs(tz.change_frame(p1.torsion, U, check=False) - p2.torsion)) <= 1e-9
        c1, c2 = all_curvatures(p1), all_curvatures(p2)
        for key in c1:
            assert np.max(np.abs(tz.change_frame(c1[key], U, check=False) - c2[key])) <= 1e-9
