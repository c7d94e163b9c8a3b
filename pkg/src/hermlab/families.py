"""Random model families used by the scan harness and the test suites.

``random_chart_model`` draws a rational Hermitian metric near the origin of
``C^n`` (optionally Kaehler, from a random potential); ``random_lie_model``
draws a complex Lie algebra from a few standard families and applies a
random change of basis, which changes the induced metric.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from . import expr as ex
from .catalog import ManifoldModel, jacobi_residual
from .tensors import epsilon3

__all__ = ["random_chart_model", "random_point", "random_lie_model", "LIE_FAMILIES"]


def _coef(rng, den: int = 8) -> ex.ExprTree:
    re = Fraction(int(rng.integers(-3, 4)), den)
    im = Fraction(int(rng.integers(-3, 4)), den)
    return ex.const(ex.CRational(re, im))


def _rho(n: int) -> ex.ExprTree:
    return ex.add(*(ex.mul(ex.zvar(m), ex.wvar(m)) for m in range(1, n + 1)))


def _hermitian_part(M, n):
    """``(M + M^*) / 2`` where ``M^*_{ij} = conj_swap(M_{ji})``."""
    half = ex.const(Fraction(1, 2))
    return [[ex.mul(half, ex.add(M[i][j], ex.conj_swap(M[j][i]))) for j in range(n)]
            for i in range(n)]


def random_chart_model(seed: int, n: int, kaehler: bool = False) -> ManifoldModel:
    """Random rational Hermitian (or Kaehler) metric, positive near ``z = 0``."""
    rng = np.random.default_rng(seed)
    z, w = ex.zvar, ex.wvar
    if kaehler:
        terms = [_rho(n)]
        for _ in range(2 * n):
            i, j, k = (int(x) for x in rng.integers(1, n + 1, size=3))
            t = ex.mul(_coef(rng), z(i), z(j), w(k))
            terms += [t, ex.conj_swap(t)]
        for _ in range(2 * n):
            i, j, k, l = (int(x) for x in rng.integers(1, n + 1, size=4))
            t = ex.mul(_coef(rng), z(i), z(j), w(k), w(l))
            terms += [t, ex.conj_swap(t)]
        phi = ex.add(*terms)
        g = [[ex.wirtinger_diff(ex.wirtinger_diff(phi, i, "z"), j, "w")
              for j in range(1, n + 1)] for i in range(1, n + 1)]
        label = "chart-kaehler"
    else:
        M = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                terms = []
                for k in range(1, n + 1):
                    if rng.random() < 0.7:
                        terms.append(ex.mul(_coef(rng), z(k)))
                    if rng.random() < 0.7:
                        terms.append(ex.mul(_coef(rng), w(k)))
                    for l in range(1, n + 1):
                        if rng.random() < 0.4:
                            terms.append(ex.mul(_coef(rng), z(k), w(l)))
                        if l >= k and rng.random() < 0.3:
                            terms.append(ex.mul(_coef(rng), z(k), z(l)))
                M[i][j] = ex.add(*terms) if terms else ex.const(0)
        H = _hermitian_part(M, n)
        g = [[ex.add(ex.const(1 if i == j else 0), H[i][j]) for j in range(n)]
             for i in range(n)]
        if rng.random() < 0.5:
            factor = ex.div(ex.const(1), ex.add(ex.const(1), ex.mul(ex.const(Fraction(1, 3)), _rho(n))))
            g = [[ex.mul(factor, e) for e in row] for row in g]
        label = "chart-random"
    metric = tuple(tuple(row) for row in g)
    return ManifoldModel("chart", n, name=label, metric=metric,
                         metadata={"seed": int(seed), "kaehler": bool(kaehler)})


def random_point(rng: np.random.Generator, n: int, radius: float = 0.25) -> tuple:
    """Uniform point of the polydisc of the given radius."""
    r = radius * np.sqrt(rng.random(n))
    th = 2 * np.pi * rng.random(n)
    return tuple(complex(x) for x in r * np.exp(1j * th))


def _bracket(n, pairs):
    c = np.zeros((n, n, n), dtype=complex)
    for (i, k, r), v in pairs.items():
        c[r, i, k] += v
        c[r, k, i] -= v
    return c


def _family_abelian(n):
    return np.zeros((n, n, n), dtype=complex)


def _family_solvable(n):
    # [e1, e2] = e2, rest abelian
    return _bracket(n, {(0, 1, 1): 1})


def _family_heisenberg(n):
    return _bracket(n, {(0, 1, 2): 1})


def _family_sl2(n):
    c = np.zeros((n, n, n), dtype=complex)
    c[:3, :3, :3] = epsilon3(float).transpose(2, 0, 1)
    return c


def _family_double_solvable(n):
    return _bracket(n, {(0, 1, 1): 1, (2, 3, 3): 1})


LIE_FAMILIES = {
    "abelian": (2, _family_abelian),
    "solvable": (2, _family_solvable),
    "heisenberg": (3, _family_heisenberg),
    "sl2": (3, _family_sl2),
    "solvable2": (4, _family_double_solvable),
}


def random_lie_model(seed: int, n: int, family: str | None = None) -> ManifoldModel:
    """Random basis of a Lie algebra from :data:`LIE_FAMILIES`.

    The new basis ``f_a = sum_i P[a, i] e_i`` is declared unitary, so
    different ``P`` give genuinely different left-invariant metrics.
    """
    rng = np.random.default_rng(seed)
    names = [k for k, (dmin, _) in LIE_FAMILIES.items() if dmin <= n]
    if family is None:
        family = names[int(rng.integers(len(names)))]
    if family not in names:
        raise ValueError(f"family {family!r} needs a larger dimension than {n}")
    c = LIE_FAMILIES[family][1](n)
    P = np.eye(n) + 0.5 * (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    while abs(np.linalg.det(P)) < 0.1:
        P = P + np.eye(n)
    c2 = np.einsum("ai,bk,rik,dr->dab", P, P, c, np.linalg.inv(P).T)
    assert jacobi_residual(c2) < 1e-9
    return ManifoldModel("lie", n, name=f"lie-{family}", structure_constants=c2,
                         metadata={"seed": int(seed), "family": family})
