"""Chern, Bismut, Levi-Civita and Gauduchon curvature at a point.

Everything is computed pointwise from a metric jet (``g`` and its first and
second Wirtinger derivatives).  The Chern connection is built in the
coordinate frame; torsion, curvature and covariant derivatives of torsion
are then expressed in a unitary frame, where the conversion formulas to the
other canonical connections are applied.

Array layouts follow :mod:`hermlab.tensors`; for covariant derivatives of
torsion the direction index is last, ``DT[l, i, k, j] = T^l_{ik;j}`` and
``DbT[l, i, k, j] = T^l_{ik;jbar}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import expr as ex
from .tensors import UnitaryFrame, gram_schmidt, quadratic_terms

__all__ = [
    "MetricJet",
    "ConnectionCoeffs",
    "CurvaturePackage",
    "GeometryError",
    "NotApplicable",
    "metric_jet",
    "jet_from_callable",
    "chern_data",
    "torsion_cov_derivatives",
    "bismut_derivatives_gamma",
    "curvature_package",
    "riemannian_curvature",
    "bismut_curvature",
    "riemannian_minus_bismut",
    "gauduchon_curvature",
    "connection_difference_curvature",
    "levi_civita_oracle",
    "bianchi_check",
    "derivative_block",
]


class GeometryError(ValueError):
    pass


class NotApplicable(GeometryError):
    """Operation needs metric derivatives the model does not carry."""


@dataclass(frozen=True)
class MetricJet:
    """Second-order jet of ``g_{i jbar}`` at a point.

    ``dg[k] = d_k g``, ``dbg[k] = dbar_k g``, ``ddbg[k, l] = d_k dbar_l g``,
    ``ddg[k, m] = d_k d_m g``, ``dbdbg[k, l] = dbar_k dbar_l g``; the trailing
    two axes are ``(i, j)`` of ``g_{i jbar}``.
    """

    point: tuple
    g: np.ndarray
    dg: np.ndarray
    dbg: np.ndarray
    ddbg: np.ndarray
    ddg: np.ndarray
    dbdbg: np.ndarray

    @property
    def dim(self) -> int:
        return self.g.shape[0]

    def conjugation_residual(self) -> float:
        """How far the jet is from the symmetries forced by ``g`` Hermitian."""
        r = [
            self.g - self.g.conj().T,
            self.dg - np.conj(self.dbg).transpose(0, 2, 1),
            self.ddbg - np.conj(self.ddbg).transpose(1, 0, 3, 2),
            self.ddg - np.conj(self.dbdbg).transpose(0, 1, 3, 2),
        ]
        return float(max(np.max(np.abs(a)) for a in r))


@dataclass(frozen=True)
class ConnectionCoeffs:
    """Chern connection data at the base point.

    ``christoffel[i, j, k] = Gamma^k_{ij}`` with ``nabla_{d_i} d_j =
    Gamma^k_{ij} d_k`` in the coordinate frame.  ``gamma_h[j, i, p]`` and
    ``gamma_a[j, i, p]`` are the matrices of ``nabla^b - nabla`` in the
    directions ``e_p`` and ``conj(e_p)`` of the unitary frame.
    """

    christoffel: np.ndarray
    gamma_h: np.ndarray
    gamma_a: np.ndarray
    compatibility_residual: float = 0.0


@dataclass(frozen=True)
class CurvaturePackage:
    """All torsion and curvature data at one point, in one unitary frame."""

    point: tuple
    frame: UnitaryFrame
    torsion: np.ndarray
    chern: np.ndarray
    DT: np.ndarray          # Chern (1,0)-derivatives of T
    DbT: np.ndarray         # Chern (0,1)-derivatives of T
    DT_b: np.ndarray        # Bismut (1,0)-derivatives of T
    DbT_b: np.ndarray       # Bismut (0,1)-derivatives of T
    coeffs: ConnectionCoeffs | None = None
    source: str = "chart"
    gauduchon: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.torsion.shape[0]

    @property
    def bismut(self) -> np.ndarray:
        return bismut_curvature(self)

    @property
    def riemannian(self) -> np.ndarray:
        return riemannian_curvature(self)


# ------------------------------------------------------------------- jets

@lru_cache(maxsize=64)
def _jet_programs(metric: tuple):
    """Compiled evaluators for g and its derivatives, keyed by the metric trees."""
    n = len(metric)
    d = ex.wirtinger_diff

    def grid(f):
        return [[f(metric[i][j]) for j in range(n)] for i in range(n)]

    first_h = [grid(lambda e, k=k: d(e, k, "z")) for k in range(1, n + 1)]
    first_a = [grid(lambda e, k=k: d(e, k, "w")) for k in range(1, n + 1)]
    trees = {
        "g": [grid(lambda e: e)],
        "dg": first_h,
        "dbg": first_a,
        "ddbg": [grid(lambda e, k=k, l=l: d(d(e, k, "z"), l, "w"))
                 for k in range(1, n + 1) for l in range(1, n + 1)],
        "ddg": [grid(lambda e, k=k, m=m: d(d(e, k, "z"), m, "z"))
                for k in range(1, n + 1) for m in range(1, n + 1)],
        "dbdbg": [grid(lambda e, k=k, l=l: d(d(e, k, "w"), l, "w"))
                  for k in range(1, n + 1) for l in range(1, n + 1)],
    }
    shapes = {"g": (n, n), "dg": (n, n, n), "dbg": (n, n, n),
              "ddbg": (n, n, n, n), "ddg": (n, n, n, n), "dbdbg": (n, n, n, n)}
    flat = [(name, [ex.compile_expr(e) for blk in blocks for row in blk for e in row])
            for name, blocks in trees.items()]
    return flat, shapes


def metric_jet(model, point) -> MetricJet:
    """Exact-derivative jet of a chart model at ``point``."""
    if getattr(model, "kind", "chart") != "chart":
        raise NotApplicable(f"{model.kind} models carry no metric expressions")
    metric = model.metric if hasattr(model, "metric") else tuple(model)
    n = len(metric)
    z = [complex(x) for x in point]
    if len(z) != n:
        raise GeometryError(f"point has dimension {len(z)}, model has {n}")
    w = [x.conjugate() for x in z]
    programs, shapes = _jet_programs(metric)
    arrays = {}
    try:
        for name, fns in programs:
            arrays[name] = np.array([f(z, w) for f in fns], dtype=complex).reshape(shapes[name])
    except ex.EvaluationError as err:
        raise GeometryError(f"metric is singular at {tuple(point)}: {err}") from err
    return MetricJet(tuple(z), **arrays)


def jet_from_callable(metric_fn, point, h: float = 1e-5, h2: float = 1e-3) -> MetricJet:
    """Finite-difference jet of ``metric_fn(z) -> g`` (central differences,
    one Richardson level).  ``h2`` is the step for second derivatives."""
    z0 = np.asarray(point, dtype=complex)
    n = z0.size
    dirs = [np.eye(n, dtype=complex)[m] for m in range(n)] + \
           [1j * np.eye(n, dtype=complex)[m] for m in range(n)]

    def f(z):
        return np.asarray(metric_fn(z), dtype=complex)

    def d1(u, s):
        D = lambda s_: (f(z0 + s_ * u) - f(z0 - s_ * u)) / (2 * s_)
        return (4 * D(s / 2) - D(s)) / 3

    def d2(u, v, s):
        D = lambda s_: (f(z0 + s_ * (u + v)) - f(z0 + s_ * (u - v))
                        - f(z0 - s_ * (u - v)) + f(z0 - s_ * (u + v))) / (4 * s_ * s_)
        return (4 * D(s / 2) - D(s)) / 3

    real1 = np.array([d1(u, h) for u in dirs])
    real2 = np.array([[d2(u, v, h2) for v in dirs] for u in dirs])
    # Wirtinger: d_m = (d_x - i d_y)/2, dbar_m = (d_x + i d_y)/2
    A = np.zeros((n, 2 * n), dtype=complex)
    Ab = np.zeros((n, 2 * n), dtype=complex)
    for m in range(n):
        A[m, m], A[m, n + m] = 0.5, -0.5j
        Ab[m, m], Ab[m, n + m] = 0.5, 0.5j
    dg = np.einsum("ma,aij->mij", A, real1)
    dbg = np.einsum("ma,aij->mij", Ab, real1)
    ddbg = np.einsum("ka,lb,abij->klij", A, Ab, real2)
    ddg = np.einsum("ka,lb,abij->klij", A, A, real2)
    dbdbg = np.einsum("ka,lb,abij->klij", Ab, Ab, real2)
    return MetricJet(tuple(z0), f(z0), dg, dbg, ddbg, ddg, dbdbg)


# -------------------------------------------------------------- Chern data

def _to_frame_torsion(Tc, E, Einv):
    return np.einsum("ai,ck,mik,mb->bac", E, E, Tc, Einv)


def chern_data(jet: MetricJet):
    """Unitary frame, torsion ``T^j_{ik}``, Chern curvature and connection data."""
    n = jet.dim
    frame = gram_schmidt(jet.g, jet.point)
    E = frame.matrix
    Einv = np.linalg.inv(E)
    H = np.linalg.inv(jet.g)
    # Gamma^k_{ij} = d_i g_{j lbar} g^{lbar k}
    Gam = np.einsum("ijl,lk->ijk", jet.dg, H)
    Tc = np.einsum("ijk->kij", Gam) - np.einsum("jik->kij", Gam)
    # dbar_m Gamma^k_{ij}
    dbH = -np.einsum("ab,mbc,cd->mad", H, jet.dbg, H)
    dbGam = (np.einsum("imjl,lk->mijk", jet.ddbg, H)
             + np.einsum("ijl,mlk->mijk", jet.dg, dbH))
    Rc = -np.einsum("jikm,ml->ijkl", dbGam, jet.g)
    T = _to_frame_torsion(Tc, E, Einv)
    Ec = np.conj(E)
    R = np.einsum("ai,bj,ck,dl,ijkl->abcd", E, Ec, E, Ec, Rc)
    compat = np.max(np.abs(jet.dbg - np.einsum("kjm,im->kij", np.conj(Gam), jet.g)))
    coeffs = ConnectionCoeffs(Gam, T.copy(), -np.conj(T).transpose(1, 0, 2),
                              float(compat))
    return frame, T, R, coeffs


def torsion_cov_derivatives(jet: MetricJet, frame: UnitaryFrame, coeffs: ConnectionCoeffs):
    """Chern and Bismut covariant derivatives of the torsion.

    Returns ``(DT, DbT, DT_b, DbT_b)``.  Bismut (0,1)-derivatives use the
    explicit Chern/Bismut relation; Bismut (1,0)-derivatives use the action
    of ``gamma = nabla^b - nabla``.
    """
    E = frame.matrix
    Einv = np.linalg.inv(E)
    H = np.linalg.inv(jet.g)
    Gam = coeffs.christoffel
    dH = -np.einsum("ab,mbc,cd->mad", H, jet.dg, H)
    dbH = -np.einsum("ab,mbc,cd->mad", H, jet.dbg, H)
    # d_m Gamma^k_{ij} and dbar_m Gamma^k_{ij}
    dGam = np.einsum("mijl,lk->mijk", jet.ddg, H) + np.einsum("ijl,mlk->mijk", jet.dg, dH)
    dbGam = np.einsum("imjl,lk->mijk", jet.ddbg, H) + np.einsum("ijl,mlk->mijk", jet.dg, dbH)
    Tc = np.einsum("ijk->kij", Gam) - np.einsum("jik->kij", Gam)
    dTc = np.einsum("mijk->kijm", dGam) - np.einsum("mjik->kijm", dGam)
    dbTc = np.einsum("mijk->kijm", dbGam) - np.einsum("mjik->kijm", dbGam)
    # T^l_{ik;j} = d_j T^l_{ik} + Gamma^l_{jm} T^m_{ik} - Gamma^m_{ji} T^l_{mk} - Gamma^m_{jk} T^l_{im}
    DTc = (dTc + np.einsum("jml,mik->likj", Gam, Tc)
           - np.einsum("jim,lmk->likj", Gam, Tc) - np.einsum("jkm,lim->likj", Gam, Tc))
    Ec = np.conj(E)
    DT = np.einsum("ai,ck,dj,mikj,mb->bacd", E, E, E, DTc, Einv)
    DbT = np.einsum("ai,ck,dj,mikj,mb->bacd", E, E, Ec, dbTc, Einv)
    T = _to_frame_torsion(Tc, E, Einv)
    DT_b, DbT_b = bismut_derivatives(T, DT, DbT)
    return DT, DbT, DT_b, DbT_b


def _gamma_action(G: np.ndarray, T: np.ndarray) -> np.ndarray:
    """Derivation action of ``gamma`` (matrices ``G[j, i, p]``) on ``T``."""
    return (np.einsum("lmp,mik->likp", G, T) - np.einsum("mip,lmk->likp", G, T)
            - np.einsum("mkp,lim->likp", G, T))


def eq7_difference(T: np.ndarray) -> np.ndarray:
    """``T^l_{ik;jbar} - T^l_{ik,jbar}`` as a torsion quadratic, layout ``[l, i, k, j]``."""
    Tc = np.conj(T)
    return (-np.einsum("rik,rjl->likj", T, Tc) - np.einsum("lkr,ijr->likj", T, Tc)
            + np.einsum("lir,kjr->likj", T, Tc))


def bismut_derivatives(T, DT, DbT):
    gamma_h = T
    DT_b = DT + _gamma_action(gamma_h, T)
    DbT_b = DbT - eq7_difference(T)
    return DT_b, DbT_b


def bismut_derivatives_gamma(T, DT, DbT):
    """Both Bismut derivative families through the ``gamma`` action only."""
    gamma_h = T
    gamma_a = -np.conj(T).transpose(1, 0, 2)
    return DT + _gamma_action(gamma_h, T), DbT + _gamma_action(gamma_a, T)


def curvature_package(source, point=None, ts=()) -> CurvaturePackage:
    """Build the full package from a chart model + point, a jet, or a lie model."""
    kind = getattr(source, "kind", None)
    if isinstance(source, MetricJet) or kind == "chart":
        jet = source if isinstance(source, MetricJet) else metric_jet(source, point)
        frame, T, R, coeffs = chern_data(jet)
        DT, DbT, DT_b, DbT_b = torsion_cov_derivatives(jet, frame, coeffs)
        pkg = CurvaturePackage(jet.point, frame, T, R, DT, DbT, DT_b, DbT_b, coeffs, "chart")
    elif kind == "lie":
        pkg = lie_package(source)
    elif kind == "curvature_model":
        raise NotApplicable("curvature models carry no metric jet; use analysis on R^b directly")
    else:
        raise GeometryError(f"cannot build curvature data from {source!r}")
    for t in ts:
        pkg.gauduchon[float(t)] = gauduchon_curvature(pkg, t)
    return pkg


def lie_package(model) -> CurvaturePackage:
    """Complex Lie group, invariant frame declared unitary.

    The invariant frame is holomorphic and unitary, so the Chern connection
    form vanishes in it: ``R = 0`` and ``nabla T = 0`` with
    ``T^r_{ik} = -c^r_{ik}``.
    """
    n = model.dim
    T = -np.asarray(model.structure_constants, dtype=complex)
    zero4 = np.zeros((n, n, n, n), dtype=complex)
    DT_b, DbT_b = bismut_derivatives(T, zero4, zero4)
    frame = UnitaryFrame(np.eye(n, dtype=complex), ())
    coeffs = ConnectionCoeffs(np.zeros((n, n, n), dtype=complex), T.copy(),
                              -np.conj(T).transpose(1, 0, 2))
    return CurvaturePackage((), frame, T, zero4.copy(), zero4.copy(), zero4.copy(),
                            DT_b, DbT_b, coeffs, "lie")


# ----------------------------------------------------- conversion formulas

def derivative_block(DbT: np.ndarray) -> np.ndarray:
    """``T^l_{ik,jbar} + conj(T^k_{jl,ibar})`` in curvature layout."""
    return np.einsum("likj->ijkl", DbT) + np.conj(np.einsum("kjli->ijkl", DbT))


def riemannian_curvature(pkg: CurvaturePackage, route: str = "chern") -> np.ndarray:
    """Levi-Civita curvature ``R^r_{i jbar k lbar}`` from Chern data.

    ``route="chern"`` uses Chern derivatives of torsion; ``route="bismut"``
    uses Bismut derivatives.  The two agree identically.
    """
    q = quadratic_terms(pkg.torsion)
    if route == "chern":
        return (pkg.chern + 0.5 * derivative_block(pkg.DbT)
                + 0.25 * (q["w"] - q["v_li"] - q["v_jk"]))
    if route == "bismut":
        return (pkg.chern + 0.5 * derivative_block(pkg.DbT_b)
                + 0.25 * (-3 * q["w"] + 3 * q["v_li"] - q["v_jk"]
                          - 2 * q["v_ji"] - 2 * q["v_lk"]))
    raise GeometryError(f"unknown route {route!r}")


def bismut_curvature(pkg: CurvaturePackage) -> np.ndarray:
    q = quadratic_terms(pkg.torsion)
    return (pkg.chern + derivative_block(pkg.DbT_b)
            - q["w"] + q["v_li"] - q["v_ji"] - q["v_lk"])


def riemannian_minus_bismut(pkg: CurvaturePackage) -> np.ndarray:
    """``R^r - R^b`` written with Bismut derivatives of torsion.

    The torsion part is ``(w - v_li - v_jk + 2 v_ji + 2 v_lk) / 4``; note the
    sign of ``w``, which is what the two individual conversions imply.
    """
    q = quadratic_terms(pkg.torsion)
    return (-0.5 * derivative_block(pkg.DbT_b)
            + 0.25 * (q["w"] - q["v_li"] - q["v_jk"] + 2 * q["v_ji"] + 2 * q["v_lk"]))


def gauduchon_curvature(pkg: CurvaturePackage, t: float) -> np.ndarray:
    """Curvature of ``(1 - t) nabla + t nabla^b``, via the Bismut curvature."""
    Rb = bismut_curvature(pkg)
    if t == 1:
        return Rb
    s = t - 1
    q = quadratic_terms(pkg.torsion)
    return (Rb + s * derivative_block(pkg.DbT_b) - s * (q["v_ji"] + q["v_lk"])
            + s * s * (q["w"] - q["v_li"]))


def connection_difference_curvature(pkg: CurvaturePackage, which: str = "gauduchon",
                                    t: float = 1.0) -> np.ndarray:
    """Curvature of ``nabla + A`` from the difference tensor ``A`` directly.

    ``which="gauduchon"`` uses ``A = t * gamma``; ``which="riemannian"`` uses
    the Levi-Civita difference tensor, which also has ``conj(e)``
    components.  Works on the complexified frame ``(e_1..e_n, conj e_1..)``:

        R^D(X, Y) = R(X, Y) + (nabla_X A)_Y - (nabla_Y A)_X + [A_X, A_Y],

    the torsion term dropping out because ``T(e_i, conj e_j) = 0``.
    """
    n = pkg.dim

    def diff_tensor(T, S):
        # A[x, y, z]: coefficient of basis vector z in A_{b_x} b_y;
        # S stands in for conj(T) so derivatives can be fed through.
        A = np.zeros((2 * n, 2 * n, 2 * n), dtype=complex)
        gamma = np.zeros_like(A)
        gamma[:n, :n, :n] = np.einsum("jik->kij", T)
        gamma[n:, :n, :n] = -np.einsum("ijk->kij", S)
        gamma[:n, n:, n:] = -np.einsum("ijk->kij", T)
        gamma[n:, n:, n:] = np.einsum("jik->kij", S)
        if which == "gauduchon":
            A = t * gamma
        elif which == "riemannian":
            A = 0.5 * gamma
            A[n:, :n, n:] += 0.5 * np.einsum("kij->kij", T)
            A[:n, n:, :n] += 0.5 * np.einsum("kij->kij", S)
        else:
            raise GeometryError(f"unknown connection {which!r}")
        return A

    T = pkg.torsion
    A = diff_tensor(T, np.conj(T))
    # nabla_{e_i} A and nabla_{conj e_j} A
    dA_h = [diff_tensor(pkg.DT[..., i], np.conj(pkg.DbT[..., i])) for i in range(n)]
    dA_a = [diff_tensor(pkg.DbT[..., j], np.conj(pkg.DT[..., j])) for j in range(n)]
    out = pkg.chern.astype(complex).copy()
    for i in range(n):
        for j in range(n):
            X, Y = i, n + j
            for k in range(n):
                term = (dA_h[i][Y, k, :n] - dA_a[j][X, k, :n]
                        + A[X, :, :n].T @ A[Y, k, :] - A[Y, :, :n].T @ A[X, k, :])
                out[i, j, k, :] += term
    return out


# ------------------------------------------------------ Levi-Civita oracle

def levi_civita_oracle(model, point=None, jet: MetricJet | None = None) -> np.ndarray:
    """``R^r_{i jbar k lbar}`` from the underlying Riemannian metric.

    Works in real coordinates ``(Re z, Im z)``: assembles the real metric and
    its derivatives from the jet, forms Christoffel symbols and the Riemann
    tensor, and evaluates it on the unitary frame vectors.  Shares nothing
    with the Chern pipeline beyond the jet and the frame.
    """
    if jet is None:
        if getattr(model, "kind", "chart") != "chart":
            raise NotApplicable("the Levi-Civita oracle needs a chart model")
        jet = metric_jet(model, point)
    n = jet.dim
    N = 2 * n
    # real basis vectors in the (d_1..d_n, dbar_1..dbar_n) basis
    P = np.zeros((N, N), dtype=complex)
    alpha = np.zeros(N, dtype=complex)
    beta = np.zeros(N, dtype=complex)
    idx = np.zeros(N, dtype=int)
    for m in range(n):
        P[m, m], P[n + m, m] = 1, 1
        P[m, n + m], P[n + m, n + m] = 1j, -1j
        alpha[m], beta[m], idx[m] = 1, 1, m
        alpha[n + m], beta[n + m], idx[n + m] = 1j, -1j, m

    def real_metric(G):
        Gc = np.zeros((N, N), dtype=complex)
        Gc[:n, n:] = G
        Gc[n:, :n] = G.T
        return P.T @ Gc @ P

    g = real_metric(jet.g).real
    dG = [alpha[a] * jet.dg[idx[a]] + beta[a] * jet.dbg[idx[a]] for a in range(N)]
    dg = np.array([real_metric(G).real for G in dG])
    ddg = np.empty((N, N, N, N))
    for a in range(N):
        ma = idx[a]
        for b in range(N):
            mb = idx[b]
            G2 = (alpha[a] * alpha[b] * jet.ddg[ma, mb] + alpha[a] * beta[b] * jet.ddbg[ma, mb]
                  + beta[a] * alpha[b] * jet.ddbg[mb, ma] + beta[a] * beta[b] * jet.dbdbg[ma, mb])
            ddg[a, b] = real_metric(G2).real
    ginv = np.linalg.inv(g)
    low = 0.5 * (np.einsum("bdc->dbc", dg) + np.einsum("cdb->dbc", dg) - dg)
    Gam = np.einsum("ad,dbc->abc", ginv, low)
    dlow = 0.5 * (np.einsum("ebdc->edbc", ddg) + np.einsum("ecdb->edbc", ddg)
                  - np.einsum("edbc->edbc", ddg))
    dginv = -np.einsum("ad,edf,fb->eab", ginv, dg, ginv)
    dGam = np.einsum("ead,dbc->eabc", dginv, low) + np.einsum("ad,edbc->eabc", ginv, dlow)
    # R^a_{bcd}: R(d_c, d_d) d_b = R^a_{bcd} d_a
    Rup = (np.einsum("cadb->abcd", dGam) - np.einsum("dacb->abcd", dGam)
           + np.einsum("acf,fdb->abcd", Gam, Gam) - np.einsum("adf,fcb->abcd", Gam, Gam))
    # Rm[x, y, z, w] = g(R(d_x, d_y) d_z, d_w)
    Rm = np.einsum("azxy,aw->xyzw", Rup, g)
    E = gram_schmidt(jet.g, jet.point).matrix
    V = np.zeros((n, N), dtype=complex)
    V[:, :n] = 0.5 * E
    V[:, n:] = -0.5j * E
    Vc = np.conj(V)
    return np.einsum("xyzw,ix,jy,kz,lw->ijkl", Rm, V, Vc, V, Vc)


# ---------------------------------------------------------------- Bianchi

def bianchi_check(pkg: CurvaturePackage) -> dict[str, float]:
    """Max residuals of the two Chern first Bianchi identities."""
    T, DT, DbT, R = pkg.torsion, pkg.DT, pkg.DbT, pkg.chern
    X = DT + np.einsum("rij,lrk->lijk", T, T)
    cyc = X + np.einsum("ljki->lijk", X) + np.einsum("lkij->lijk", X)
    holo = float(np.max(np.abs(cyc), initial=0.0))
    lhs = -np.einsum("likj->ijkl", DbT)
    rhs = R - np.einsum("kjil->ijkl", R)
    mixed = float(np.max(np.abs(lhs - rhs), initial=0.0))
    return {"torsion_cyclic": holo, "torsion_curvature": mixed}
