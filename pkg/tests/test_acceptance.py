"""Acceptance suite: twelve criteria, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py`` or directly as a script.
"""

import contextlib
import io
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest
import sympy as sp

sys.path.insert(0, str(Path(__file__).parent))

from conftest import chart_cases  # noqa: E402
from hermlab import analysis as an  # noqa: E402
from hermlab import catalog  # noqa: E402
from hermlab import expr as ex  # noqa: E402
from hermlab import geometry as geo  # noqa: E402
from hermlab import tensors as tz  # noqa: E402
from hermlab.cli import main  # noqa: E402

_CACHE = {}


def _charts():
    if "charts" not in _CACHE:
        _CACHE["charts"] = chart_cases(count=20, points=5)
    return _CACHE["charts"]


def _max(a):
    return float(np.max(np.abs(a), initial=0.0))


@contextlib.contextmanager
def criterion(number, title, capsys=None, budget=None):
    """Time the block and print one PASS/FAIL line, whatever happens inside."""
    info = {}
    start = time.perf_counter()
    ok = False
    try:
        yield info
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        if budget is not None and elapsed > budget:
            info["runtime"] = f"{elapsed:.1f}s > {budget}s"
            ok = False
        detail = ", ".join(f"{k}={v:.2e}" if isinstance(v, float) else f"{k}={v}"
                           for k, v in info.items())
        line = f"[{'PASS' if ok else 'FAIL'}] {number:2d}. {title} ({elapsed:.2f}s) {detail}\n"
        if capsys is not None:
            with capsys.disabled():
                sys.stdout.write(line)
        else:
            sys.stdout.write(line)
    if budget is not None:
        assert elapsed <= budget, f"runtime {elapsed:.1f}s exceeds {budget}s"


# ----------------------------------------------------------------- 1

def test_01_conversion_coherence(capsys):
    with criterion(1, "conversion coherence on 20 random metrics", capsys, budget=30) as info:
        worst_diff, worst_routes = 0.0, 0.0
        pkgs = []
        for model, point in _charts():
            pkg = geo.curvature_package(model, point)
            pkgs.append(pkg)
            rr_b = geo.riemannian_curvature(pkg, "bismut")
            rr_c = geo.riemannian_curvature(pkg, "chern")
            gap = rr_b - geo.bismut_curvature(pkg) - geo.riemannian_minus_bismut(pkg)
            worst_diff = max(worst_diff, _max(gap))
            worst_routes = max(worst_routes, _max(rr_b - rr_c))
        _CACHE["packages"] = pkgs
        info.update(cases=len(pkgs), three_way=worst_diff, two_routes=worst_routes)
        assert worst_diff <= 1e-10 and worst_routes <= 1e-10


# ----------------------------------------------------------------- 2

def test_02_levi_civita_oracle(capsys):
    with criterion(2, "Riemannian curvature vs Levi-Civita oracle", capsys, budget=60) as info:
        worst = 0.0
        for model, point in _charts():
            jet = geo.metric_jet(model, point)
            pkg = geo.curvature_package(jet)
            worst = max(worst, _max(geo.riemannian_curvature(pkg)
                                    - geo.levi_civita_oracle(model, jet=jet)))
        info.update(cases=len(_charts()), max_residual=worst)
        assert worst <= 1e-6


# ----------------------------------------------------------------- 3

def test_03_gauduchon_family(capsys):
    with criterion(3, "t-Gauduchon endpoints and quadratic interpolation", capsys) as info:
        pkgs = _CACHE.get("packages") or [geo.curvature_package(m, p) for m, p in _charts()]
        pkgs = pkgs + [geo.curvature_package(catalog.build("hopf", n=2), (1, 0))]
        exact_one = all(np.array_equal(geo.gauduchon_curvature(p, 1), geo.bismut_curvature(p))
                        for p in pkgs)
        zero = max(_max(geo.gauduchon_curvature(p, 0) - p.chern) for p in pkgs)
        interp = 0.0
        for p in pkgs:
            g0, gh, g1, gm = (geo.gauduchon_curvature(p, t) for t in (0.0, 0.5, 1.0, -1.0))
            interp = max(interp, _max(6 * g0 - 8 * gh + 3 * g1 - gm))
        info.update(t1_exact=exact_one, t0=zero, t_minus1=interp)
        assert exact_one and zero <= 1e-12 and interp <= 1e-10


# ----------------------------------------------------------------- 4

def test_04_bianchi(capsys):
    with criterion(4, "Chern Bianchi identities", capsys) as info:
        worst = 0.0
        count = 0
        catalog_points = {
            "flat_torus2": [(0, 0), (0.3 + 0.2j, -0.5)],
            "flat_torus3": [(0.1, 0.2j, -0.3)],
            "kaehler_ball2": [(0, 0), (0.2 - 0.1j, 0.4j)],
            "hopf2": [(1, 0), (0.3 - 0.2j, 0.9j)],
            "hopf3": [(1, 0, 0), (0.2, 1j, -0.4)],
        }
        for name, pts in catalog_points.items():
            model = catalog.load_model(catalog.data_path(f"{name}.model.json"))
            for p in pts:
                worst = max(worst, max(geo.bianchi_check(geo.curvature_package(model, p)).values()))
                count += 1
        pkgs = _CACHE.get("packages") or [geo.curvature_package(m, p) for m, p in _charts()]
        for p in pkgs:
            worst = max(worst, max(geo.bianchi_check(p).values()))
            count += 1
        so3c = geo.curvature_package(catalog.build("so3c"))
        worst = max(worst, max(geo.bianchi_check(so3c).values()))
        info.update(cases=count + 1, max_residual=worst)
        assert worst <= 1e-9


# ----------------------------------------------------------------- 5

def test_05_hopf_facts(capsys):
    with criterion(5, "Hopf: non-balanced, BTP, H^b = 0 with R^b != 0 (n=3)", capsys,
                   budget=10) as info:
        for n, points in ((2, [(1, 0), (0.3 - 0.2j, 0.9j)]),
                          (3, [(1, 0, 0), (0.2, 1j, -0.4)])):
            model = catalog.build("hopf", n=n)
            for p in points:
                pkg = geo.curvature_package(model, p)
                Rb = geo.bismut_curvature(pkg)
                lam = an.gauduchon_form(pkg.torsion).lam
                ok, btp = an.btp_test(pkg)
                c, res = tz.constant_hsc_fit(Rb)
                info[f"n{n}_btp"] = max(info.get(f"n{n}_btp", 0.0), btp)
                info[f"n{n}_fit_res"] = max(info.get(f"n{n}_fit_res", 0.0), res)
                assert lam > 0 and ok and btp <= 1e-8
                assert abs(c) <= 1e-9 and res <= 1e-9
                if n == 3:
                    norm = float(np.linalg.norm(Rb))
                    info["n3_norm_Rb"] = norm
                    assert norm > 0.1
        stats = an.hsc_scan(geo.bismut_curvature(geo.curvature_package(model, (1, 0, 0))),
                            256, 0)
        info["n3_scan"] = max(abs(stats.min), abs(stats.max))
        assert info["n3_scan"] <= 1e-9


# ----------------------------------------------------------------- 6

def _perturbed_hopf():
    s = "1/(z1*w1+z2*w2) + 1/10*z1^2*w1^2"
    metric = ((ex.parse(s, 2), ex.parse("0", 2)), (ex.parse("0", 2), ex.parse(s, 2)))
    return catalog.ManifoldModel("chart", 2, name="hopf-perturbed", metric=metric)


def test_06_q_tensor(capsys):
    with criterion(6, "Q from R^b vs Q from torsion", capsys) as info:
        so3c = an.q_tensor(geo.curvature_package(catalog.build("so3c")))[2]
        hopf = an.q_tensor(geo.curvature_package(catalog.build("hopf", n=2), (1, 0)))[2]
        pert = an.q_tensor(geo.curvature_package(_perturbed_hopf(), (1, 0)))[2]
        info.update(so3c=so3c, hopf2=hopf, perturbed=pert)
        assert so3c <= 1e-8 and hopf <= 1e-8 and pert > 1e-3


# ----------------------------------------------------------------- 7

def test_07_admissible_frames(capsys):
    with criterion(7, "admissible frames on Hopf n=2,3", capsys) as info:
        worst = 0.0
        for model, p in ((catalog.build("hopf", n=2), (1, 0)),
                         (catalog.build("hopf", n=2), (0.3j, -1.1)),
                         (catalog.build("hopf", n=3), (1, 0, 0)),
                         (catalog.build("hopf", n=3), (0.2, 1j, -0.4))):
            pkg = geo.curvature_package(model, p)
            data = an.admissible_frame(pkg)
            n = model.dim
            T = tz.change_frame(pkg.torsion, data.matrix)
            Rb = tz.change_frame(geo.bismut_curvature(pkg), data.matrix)
            diag = np.zeros((n, n), dtype=complex)
            np.fill_diagonal(diag, data.a)
            checks = [_max(T[n - 1]), _max(T[:, :, n - 1].T - diag),
                      _max(Rb[:, :, :, n - 1]), abs(np.sum(data.a) - data.lam),
                      abs(data.a[-1])]
            worst = max(worst, *checks)
        info.update(max_residual=worst)
        assert worst <= 1e-8


# ----------------------------------------------------------------- 8

def test_08_reconstruction_values(capsys):
    with criterion(8, "constant-HSC reconstructions, exact entries", capsys) as info:
        c, t = sp.symbols("c t", real=True)
        a1 = sp.Symbol("a1", positive=True)
        Rr = an.rb_from_constant_hr(c, an.special_torsion([a1, 0, 0], dtype=object))
        d1 = sp.expand(Rr[1, 1, 0, 0] - (c / 2 + sp.Rational(3, 8) * a1 ** 2))
        Rt = an.rb_from_constant_ht(t, c, an.special_torsion([a1, a1, 0], dtype=object))
        d2 = sp.expand(Rt[1, 1, 2, 2] - (c / 2 + (t ** 2 - 1) / 4 * a1 ** 2))
        # and at concrete rationals, with Fraction-free sympy arithmetic
        for cv, av, tv in ((sp.Rational(3, 2), sp.Rational(2, 3), sp.Rational(1, 5)),
                           (sp.Integer(-1), sp.Integer(2), sp.Rational(-7, 3))):
            R1 = an.rb_from_constant_hr(cv, an.special_torsion([av, 0, 0], dtype=object))
            R2 = an.rb_from_constant_ht(tv, cv, an.special_torsion([av, av, 0], dtype=object))
            assert R1[1, 1, 0, 0] == cv / 2 + sp.Rational(3, 8) * av ** 2
            assert R2[1, 1, 2, 2] == cv / 2 + (tv ** 2 - 1) / 4 * av ** 2
        info.update(hr_entry=str(Rr[1, 1, 0, 0]), ht_entry=str(sp.factor(Rt[1, 1, 2, 2])))
        assert d1 == 0 and d2 == 0


# ----------------------------------------------------------------- 9

def test_09_obstructions(capsys):
    with criterion(9, "obstruction verdicts (exact)", capsys) as info:
        ts_generic = [0, sp.Rational(1, 2), sp.Rational(-1, 3), 2, sp.Rational(7, 5), -3]
        configs = [(1, [1]), (2, [1, 1]), (5, [3, 2, 0]), (sp.Rational(1, 7), [sp.Rational(1, 7)])]
        count = 0
        for lam, a in configs:
            v = an.nonbalanced_obstruction("riemannian", lam=float(lam), a=[float(x) for x in a])
            assert v.verdict == "infeasible"
            for t in ts_generic:
                v = an.nonbalanced_obstruction("gauduchon", lam=float(lam),
                                               a=[float(x) for x in a], t=t)
                assert v.verdict == "infeasible", (lam, a, t)
            for t in (1, -1):
                v = an.nonbalanced_obstruction("gauduchon", lam=float(lam),
                                               a=[float(x) for x in a], t=t)
                assert v.verdict == "c-must-be-zero" and v.forced_c == "0"
            count += 2 + len(ts_generic) + 1
        so3c = catalog.build("so3c")
        wallach = catalog.build("wallach", b=0.2, t=0.1, s=0)
        middle = catalog.build("middle", x=0, y=1)
        r3 = an.threefold_probe(so3c, "riemannian")
        r1 = an.threefold_probe(wallach, "riemannian")
        r2 = an.threefold_probe(middle, "gauduchon", sp.Rational(1, 2))
        flat = an.threefold_probe(so3c, "gauduchon", 0)
        assert r3.verdict == r1.verdict == r2.verdict == "infeasible"
        assert "a1**2/4 = 0" in r3.constraints[0]
        assert flat.verdict == "c-must-be-zero" and flat.consistent
        info.update(nonbalanced_cases=count, r3=r3.constraints[0], r1=r1.constraints[0],
                    r2=r2.constraints[0])


# ---------------------------------------------------------------- 10

def test_10_middle_quartic(capsys):
    with criterion(10, "middle-type quartic equals 2q(q - iyp) at x = 0", capsys) as info:
        rng = np.random.default_rng(10)
        worst = 0.0
        for _ in range(1000):
            y = rng.uniform(-5, 5)
            X = rng.standard_normal(3) + 1j * rng.standard_normal(3)
            direct = an.middle_type_quartic(0.0, y, X)
            p = abs(X[0]) ** 2 + abs(X[1]) ** 2
            q = X[0] * np.conj(X[1]) - X[1] * np.conj(X[0])
            closed = 2 * q * (q - 1j * y * p)
            worst = max(worst, abs(direct - closed) / max(abs(closed), np.linalg.norm(X) ** 4))
        y = sp.Symbol("y", real=True)
        value = sp.expand(an.middle_type_quartic(0, y, (1, sp.I, 0)))
        info.update(max_relative=worst, value_at_1_i_0=str(value))
        assert worst <= 1e-12 and sp.expand(value + 8 * (1 + y)) == 0


# ---------------------------------------------------------------- 11

def test_11_wallach_relation(capsys):
    with criterion(11, "Wallach R^b_1111 = 2 R^b_2211 (exact)", capsys) as info:
        rng = np.random.default_rng(11)
        draws = 0
        for _ in range(200):
            b = Fraction(int(rng.integers(-50, 51)), int(rng.integers(1, 20)))
            t = complex(Fraction(int(rng.integers(-9, 10)), 7), Fraction(int(rng.integers(-9, 10)), 3))
            s = complex(Fraction(int(rng.integers(-9, 10)), 5), Fraction(int(rng.integers(-9, 10)), 11))
            model = catalog.build("wallach", b=float(b), t=t, s=s)
            R = catalog.curvature_model_bismut(model, exact=True)
            assert sp.simplify(R[0, 0, 0, 0] - 2 * R[1, 1, 0, 0]) == 0
            draws += 1
        bs = sp.Symbol("b", real=True)
        Rs = catalog.theta_to_curvature(catalog.wallach_theta(bs, sp.Symbol("t"), sp.Symbol("s")))
        assert sp.expand(Rs[0, 0, 0, 0] - 2 * Rs[1, 1, 0, 0]) == 0
        info.update(draws=draws, symbolic="identity")


# ---------------------------------------------------------------- 12

def _run_cli(argv):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = main(argv)
    assert code == 0, err.getvalue()
    return out.getvalue().encode()


def test_12_determinism(capsys):
    with criterion(12, "analyze/scan byte-identical across runs and workers", capsys) as info:
        analyze = ["analyze", "hopf3", "--point", "0.2,1i,-0.4", "--t", "0,0.5,1,-1",
                   "--samples", "256", "--seed", "7"]
        a = [_run_cli(analyze + ["--workers", w]) for w in ("1", "1", "4")]
        scan = ["scan", "--family", "chart-random", "--dim", "3", "--trials", "10", "--seed", "7"]
        s = [_run_cli(scan + ["--workers", w]) for w in ("1", "1", "3")]
        lie = ["scan", "--family", "lie-random", "--dim", "3", "--trials", "10", "--seed", "7"]
        l_ = [_run_cli(lie + ["--workers", w]) for w in ("1", "2")]
        assert json.loads(a[0])["seed"] == 7
        info.update(analyze_bytes=len(a[0]), scan_bytes=len(s[0]))
        assert a[0] == a[1] == a[2]
        assert s[0] == s[1] == s[2]
        assert l_[0] == l_[1]


if __name__ == "__main__":
    failures = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_") and callable(fn):
            try:
                fn(None)
            except AssertionError:
                failures += 1
    sys.exit(1 if failures else 0)
