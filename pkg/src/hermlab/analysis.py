"""Torsion diagnostics and constant holomorphic sectional curvature analysis.

Covers the Gauduchon torsion 1-form, the BTP test, the Q and B tensors,
admissible frames (non-balanced BTP) and special frames (balanced
threefolds), reconstruction of the Bismut curvature from a constant
Riemannian or t-Gauduchon holomorphic sectional curvature, an exact
obstruction engine built on that reconstruction, and a direction scan for
holomorphic sectional curvature.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import sympy as sp
from scipy.linalg import null_space, schur
from scipy.optimize import minimize

from . import catalog
from .geometry import CurvaturePackage, MetricJet, bismut_curvature
from .tensors import (change_frame, epsilon3, haar_unitary, hsc_value, model_tensor,
                      quadratic_terms, symmetrize)

__all__ = [
    "GAUDUCHON_KAPPA",
    "AnalysisError",
    "TorsionOneForm",
    "AdmissibleFrameData",
    "ObstructionVerdict",
    "BTensor",
    "HSCStats",
    "gauduchon_form",
    "exterior_gauduchon_residual",
    "calibrate_gauduchon_kappa",
    "btp_test",
    "q_tensor",
    "q_from_torsion",
    "b_tensor",
    "admissible_frame",
    "special_frame",
    "special_torsion",
    "rb_hat",
    "rb_from_constant_hr",
    "rb_from_constant_ht",
    "nonbalanced_obstruction",
    "threefold_probe",
    "middle_type_quartic",
    "hsc_scan",
]

# eta_i = kappa * sum_k T^k_{ki}; see demos/calibrate_gauduchon_form.py
GAUDUCHON_KAPPA = 1

BALANCED_TOL = 1e-8
BTP_TOL = 1e-8


class AnalysisError(ValueError):
    pass


# ------------------------------------------------------- Gauduchon 1-form

@dataclass(frozen=True)
class TorsionOneForm:
    eta: np.ndarray
    lam: float

    @property
    def balanced(self) -> bool:
        return self.lam <= BALANCED_TOL


def gauduchon_form(T: np.ndarray) -> TorsionOneForm:
    """Gauduchon torsion 1-form ``eta_i = kappa * sum_k T^k_{ki}`` and ``|eta|``."""
    eta = GAUDUCHON_KAPPA * np.einsum("kki->i", np.asarray(T, dtype=complex))
    return TorsionOneForm(eta, float(np.linalg.norm(eta)))


def _wedge(a: dict, b: dict) -> dict:
    out: dict = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            if set(ka) & set(kb):
                continue
            idx = ka + kb
            # sign of the sorting permutation
            sign, lst = 1, list(idx)
            for i in range(len(lst)):
                for j in range(len(lst) - 1 - i):
                    if lst[j] > lst[j + 1]:
                        lst[j], lst[j + 1] = lst[j + 1], lst[j]
                        sign = -sign
            key = tuple(lst)
            out[key] = out.get(key, 0) + sign * va * vb
    return out


def _add_forms(a: dict, b: dict, s=1) -> dict:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + s * v
    return out


def _kaehler_form(G: np.ndarray) -> dict:
    """``omega = i sum g_{i jbar} dz_i ^ dzbar_j``; dz_i -> i, dzbar_j -> n + j."""
    n = G.shape[0]
    return {(i, n + j): 1j * G[i, j] for i in range(n) for j in range(n) if G[i, j] != 0}


def _gauduchon_pieces(jet: MetricJet):
    """``d'(omega^{n-1})`` and ``eta0 ^ omega^{n-1}`` with ``eta0 = sum T^k_{ki} dz_i``."""
    n = jet.dim
    omega = _kaehler_form(jet.g)
    power = {(): 1}
    for _ in range(n - 2):
        power = _wedge(power, omega)            # omega^{n-2}
    top = _wedge(power, omega)                  # omega^{n-1}
    d_top: dict = {}
    for k in range(n):
        dk = _kaehler_form(jet.dg[k])           # d_k omega
        term = _wedge({(k,): 1}, _wedge(dk, power))
        d_top = _add_forms(d_top, term, n - 1)
    H = np.linalg.inv(jet.g)
    Gam = np.einsum("ijl,lk->ijk", jet.dg, H)
    Tc = np.einsum("ijk->kij", Gam) - np.einsum("jik->kij", Gam)
    eta0 = np.einsum("kki->i", Tc)
    eta_wedge = _wedge({(i,): eta0[i] for i in range(n)}, top)
    return d_top, eta_wedge


def exterior_gauduchon_residual(jet: MetricJet, kappa=GAUDUCHON_KAPPA) -> float:
    """Max coefficient of ``d'(omega^{n-1}) + kappa * eta0 ^ omega^{n-1}``.

    ``d'`` is the (1,0)-part of ``d``; the (0,1)-part is its conjugate, so
    this is the full defining relation of the Gauduchon 1-form.
    """
    d_top, eta_wedge = _gauduchon_pieces(jet)
    total = _add_forms(d_top, eta_wedge, kappa)
    return float(max((abs(v) for v in total.values()), default=0.0))


def calibrate_gauduchon_kappa(jet: MetricJet) -> float:
    """Least-squares ``kappa`` with ``d'(omega^{n-1}) = -kappa eta0 ^ omega^{n-1}``."""
    d_top, eta_wedge = _gauduchon_pieces(jet)
    keys = sorted(set(d_top) | set(eta_wedge))
    a = np.array([eta_wedge.get(k, 0) for k in keys], dtype=complex)
    b = -np.array([d_top.get(k, 0) for k in keys], dtype=complex)
    if not np.any(a):
        raise AnalysisError("metric is balanced at this point; kappa is undetermined")
    return float(np.real(np.vdot(a, b) / np.vdot(a, a)))


# ------------------------------------------------------------- BTP, Q, B

def btp_test(pkg: CurvaturePackage, tol: float = BTP_TOL) -> tuple[bool, float]:
    """Whether all Bismut covariant derivatives of the torsion vanish."""
    residual = float(max(np.max(np.abs(pkg.DT_b), initial=0.0),
                         np.max(np.abs(pkg.DbT_b), initial=0.0)))
    return residual <= tol, residual


def q_from_torsion(T: np.ndarray) -> np.ndarray:
    q = quadratic_terms(T)
    return -q["w"] - q["v_ji"] - q["v_lk"] + q["v_li"] + q["v_jk"]


def q_tensor(pkg: CurvaturePackage | tuple) -> tuple[np.ndarray, np.ndarray, float]:
    """``Q = R^b - R^b(i <-> k)`` two ways: from ``R^b`` and from torsion alone.

    The two agree on BTP metrics; the gap measures the failure otherwise.
    Accepts a package or a pair ``(Rb, T)``.
    """
    if isinstance(pkg, tuple):
        Rb, T = pkg
    else:
        Rb, T = bismut_curvature(pkg), pkg.torsion
    from_rb = Rb - np.einsum("kjil->ijkl", Rb)
    from_t = q_from_torsion(T)
    return from_rb, from_t, float(np.max(np.abs(from_rb - from_t), initial=0.0))


@dataclass(frozen=True)
class BTensor:
    matrix: np.ndarray
    rank: int
    eigenvalues: np.ndarray
    near_degenerate: bool


def b_tensor(T: np.ndarray) -> BTensor:
    """``B_{i jbar} = sum_{k,l} T^j_{kl} conj(T^i_{kl})`` and its numerical rank."""
    T = np.asarray(T, dtype=complex)
    B = np.einsum("jkl,ikl->ij", T, np.conj(T))
    ev = np.linalg.eigvalsh((B + B.conj().T) / 2)[::-1]
    scale = max(1.0, float(ev[0]) if ev.size else 1.0)
    rank = int(np.sum(ev > 1e-8 * scale))
    rel = np.abs(ev) / scale
    near = bool(np.any((rel >= 1e-10) & (rel <= 1e-6)))
    return BTensor(B, rank, ev, near)


# ------------------------------------------------------- admissible frames

@dataclass(frozen=True)
class AdmissibleFrameData:
    """Admissible frame: rows of ``matrix`` are the new frame vectors."""

    matrix: np.ndarray
    a: np.ndarray
    lam: float
    residuals: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.a.size


def admissible_frame(pkg: CurvaturePackage, eta: TorsionOneForm | None = None,
                     tol: float = 1e-8) -> AdmissibleFrameData:
    """Unitary frame with ``eta = lambda phi_n`` diagonalizing ``T^j_{in}``.

    Checks ``T^n_{ik} = 0``, ``T^j_{in} = a_i delta_ij``,
    ``R^b_{i jbar k nbar} = 0`` and ``sum a_i = lambda``; any failure is an
    error rather than a silently returned frame.
    """
    T = pkg.torsion
    n = T.shape[0]
    eta = eta or gauduchon_form(T)
    if eta.balanced:
        raise AnalysisError("admissible frames need a non-balanced metric (eta = 0 here)")
    ok, res = btp_test(pkg)
    if not ok:
        raise AnalysisError(f"metric is not BTP at this point (residual {res:.3e})")
    u = np.conj(eta.eta) / eta.lam
    comp = null_space(np.conj(u)[None, :]).T          # rows orthogonal to u
    U0 = np.vstack([comp, u[None, :]])
    T0 = change_frame(T, U0)
    A = T0[: n - 1, : n - 1, n - 1]                    # A[j, i] = T^j_{in}
    S, Z = schur(A, output="complex")
    off = float(np.max(np.abs(np.triu(S, 1)), initial=0.0))
    if off > tol:
        raise AnalysisError(f"T^j_(in) is not unitarily diagonalizable (off-diagonal {off:.3e})")
    a = np.diag(S)
    order = sorted(range(n - 1), key=lambda i: (-a[i].real, -a[i].imag))
    V = Z.T[order]
    U = np.eye(n, dtype=complex)
    U[: n - 1, : n - 1] = V
    U = U @ U0
    Tn = change_frame(T, U)
    Rb = change_frame(bismut_curvature(pkg), U)
    a_full = np.append(a[order], 0)
    expect = np.zeros_like(Tn[:, :, n - 1])
    np.fill_diagonal(expect, a_full)
    residuals = {
        "T^n_ik": float(np.max(np.abs(Tn[n - 1]))),
        "T^j_in": float(np.max(np.abs(Tn[:, :, n - 1].T - expect))),
        "Rb_ijkn": float(np.max(np.abs(Rb[:, :, :, n - 1]))),
        "sum_a": float(abs(np.sum(a_full) - eta.lam)),
    }
    bad = {k: v for k, v in residuals.items() if v > tol}
    if bad:
        raise AnalysisError(f"admissibility conditions fail: {bad}")
    return AdmissibleFrameData(U, a_full, eta.lam, residuals)


# ---------------------------------------------------------- special frames

def special_torsion(a, dtype=complex) -> np.ndarray:
    """Threefold torsion with ``T^i_{jk} = a_i`` for cyclic ``(ijk)``."""
    return catalog.special_torsion(a, dtype=dtype)


def special_frame(T: np.ndarray, tol: float = 1e-8) -> tuple[np.ndarray, np.ndarray]:
    """Unitary change to a frame where only ``T^i_{jk} = a_i`` (cyclic) survive.

    Writing ``T^j_{ik} = sum_m eps_{ikm} M[m, j]``, the metric is balanced
    exactly when ``M`` is symmetric; a Takagi factorization
    ``M = W diag(a) W^T`` then gives the frame ``conj(det W) W^T``.
    """
    T = np.asarray(T, dtype=complex)
    if T.shape != (3, 3, 3):
        raise AnalysisError("special frames are defined in dimension 3 only")
    eta = gauduchon_form(T)
    if not eta.balanced:
        raise AnalysisError(f"special frames need balanced torsion (|eta| = {eta.lam:.3e})")
    M = 0.5 * np.einsum("ikm,jik->mj", epsilon3(float), T)
    M = (M + M.T) / 2
    Bm = np.block([[M.real, M.imag], [M.imag, -M.real]])
    ev, vecs = np.linalg.eigh(Bm)
    scale = max(1.0, float(np.max(np.abs(ev))))
    cols = [vecs[:3, i] + 1j * vecs[3:, i] for i in range(5, -1, -1) if ev[i] > 1e-12 * scale]
    cols = cols[:3]
    W = np.array(cols, dtype=complex).T.reshape(3, len(cols))
    if W.shape[1] < 3:
        rest = null_space(W.conj().T) if W.shape[1] else np.eye(3, dtype=complex)
        W = np.hstack([W, rest[:, : 3 - W.shape[1]]])
    U = np.conj(np.linalg.det(W)) * W.T
    Ts = change_frame(T, U)
    a = np.array([Ts[0, 1, 2], Ts[1, 2, 0], Ts[2, 0, 1]])
    residual = float(np.max(np.abs(Ts - special_torsion(a))))
    if residual > tol or np.max(np.abs(a.imag)) > tol:
        raise AnalysisError(f"torsion is not of special type (residual {residual:.3e})")
    return U, a.real


# ------------------------------------------- constant-HSC reconstructions

def _is_exact(*arrays) -> bool:
    return any(isinstance(a, np.ndarray) and a.dtype == object for a in arrays)


def _rat(p: int, q: int, exact: bool):
    return sp.Rational(p, q) if exact else p / q


def rb_hat(Rb: np.ndarray, T: np.ndarray) -> np.ndarray:
    """Symmetrized Bismut curvature of a BTP metric from ``R^b`` and ``T``."""
    q = quadratic_terms(T)
    h = _rat(1, 2, _is_exact(Rb, T))
    return Rb + h * (q["w"] + q["v_ji"] + q["v_lk"] - q["v_li"] - q["v_jk"])


def rb_from_constant_hr(c, T: np.ndarray) -> np.ndarray:
    """``R^b`` of a BTP metric whose Riemannian HSC is the constant ``c``."""
    exact = _is_exact(T)
    q = quadratic_terms(T)
    n = T.shape[0]
    M = model_tensor(n, T if exact else None)
    return (c * _rat(1, 2, exact) * M - _rat(1, 2, exact) * q["w"]
            - _rat(5, 8, exact) * (q["v_ji"] + q["v_lk"])
            + _rat(3, 8, exact) * (q["v_li"] + q["v_jk"]))


def rb_from_constant_ht(t, c, T: np.ndarray) -> np.ndarray:
    """``R^b`` of a BTP metric whose ``t``-Gauduchon HSC is the constant ``c``."""
    exact = _is_exact(T)
    q = quadratic_terms(T)
    n = T.shape[0]
    M = model_tensor(n, T if exact else None)
    four = sp.Integer(4) if exact else 4
    return (c * _rat(1, 2, exact) * M - _rat(1, 2, exact) * q["w"]
            + (t * t - 3) / four * (q["v_ji"] + q["v_lk"])
            + (t * t + 1) / four * (q["v_li"] + q["v_jk"]))


# ------------------------------------------------------ obstruction engine

@dataclass(frozen=True)
class ObstructionVerdict:
    connection: str
    forced_c: str | None
    constraints: tuple
    verdict: str            # infeasible | c-must-be-zero | undetermined
    trace: tuple
    consistent: bool = False

    def as_dict(self) -> dict:
        return {"connection": self.connection, "forced_c": self.forced_c,
                "constraints": list(self.constraints), "verdict": self.verdict,
                "consistent": self.consistent, "trace": list(self.trace)}


def _exact_t(t):
    if t is None:
        return None
    if isinstance(t, (int, Fraction)):
        return sp.Rational(t)
    if isinstance(t, sp.Basic):
        return t
    return sp.Rational(repr(float(t)))


def _label(connection: str, t) -> str:
    if connection == "riemannian":
        return "riemannian"
    if connection == "gauduchon":
        return f"gauduchon(t={t})"
    raise AnalysisError(f"unknown connection {connection!r}; expected riemannian or gauduchon")


def _sym_object(a) -> np.ndarray:
    out = np.empty(np.shape(a), dtype=object)
    out[...] = sp.Integer(0)
    return out


def _reconstruct(connection: str, t, c, T):
    if connection == "riemannian":
        return rb_from_constant_hr(c, T)
    return rb_from_constant_ht(t, c, T)


def nonbalanced_obstruction(connection: str, data: AdmissibleFrameData | None = None, *,
                            lam=None, a=None, t=None) -> ObstructionVerdict:
    """Constant-HSC obstruction on a non-balanced BTP manifold.

    Works with exact symbols: the reconstructed ``R^b`` entry ``(i, ibar,
    n, nbar)`` must vanish in an admissible frame.  Only ``|a_i|^2`` enters,
    so each ``a_i`` is represented by its modulus.
    """
    if data is not None:
        lam, a = data.lam, list(data.a)
    if lam is None or a is None:
        raise AnalysisError("need admissible-frame data or (lambda, a)")
    if not lam > 0:
        raise AnalysisError("lambda must be positive for a non-balanced metric")
    a = [complex(x) for x in a]
    if len(a) < 2 or abs(a[-1]) > 1e-8:
        a = a + [0j]
    if abs(sum(a) - lam) > 1e-8:
        raise AnalysisError(f"sum of a_i is {sum(a)}, expected lambda = {lam}")
    if connection == "gauduchon" and t is None:
        raise AnalysisError("gauduchon connection needs t")
    ts = _exact_t(t) if connection == "gauduchon" else None
    label = _label(connection, ts)
    n = len(a)
    c = sp.Symbol("c", real=True)
    m = sp.symbols(f"m1:{n}", nonnegative=True)    # m_i = |a_i|, i < n
    T = _sym_object(np.zeros((n, n, n)))
    for i in range(n - 1):
        T[i, i, n - 1] = m[i]
        T[i, n - 1, i] = -m[i]
    Rb = _reconstruct(connection, ts, c, T)
    trace = [f"admissible frame, n = {n}: T^j_(in) = a_i delta_ij, a_n = 0, "
             f"sum a_i = lambda = {lam}",
             "R^b_(i ibar n nbar) = 0 for every i (e_n is Bismut parallel)"]
    entries = [sp.expand(Rb[i, i, n - 1, n - 1]) for i in range(n)]
    for i, e in enumerate(entries):
        trace.append(f"  i = {i + 1}: 0 = {e}")
    c_sol = sp.solve(sp.Eq(entries[-1], 0), c)
    if c_sol != [0]:
        return ObstructionVerdict(label, None, (), "undetermined", tuple(trace))
    trace.append("i = n gives c = 0")
    constraints = []
    coefs = []
    for i in range(n - 1):
        e = sp.expand(entries[i].subs(c, 0))
        coef = sp.simplify(e / m[i] ** 2)
        coefs.append(coef)
        constraints.append(f"({coef})*|a_{i + 1}|^2 = 0")
    trace.append("then: " + ", ".join(constraints))
    if connection == "gauduchon":
        tt = sp.Symbol("t", real=True)
        general = rb_from_constant_ht(tt, 0, T)[0, 0, n - 1, n - 1]
        crit = sp.solve(sp.Eq(sp.expand(general / m[0] ** 2), 0), tt)
        trace.append(f"coefficient vanishes only for t in {sorted(crit)}")
    if all(cf != 0 for cf in coefs):
        trace.append("every a_i = 0, so sum a_i = 0 < lambda: contradiction")
        return ObstructionVerdict(label, "0", tuple(constraints), "infeasible", tuple(trace))
    trace.append("no constraint on a_i; only c = 0 is forced")
    return ObstructionVerdict(label, "0", tuple(constraints), "c-must-be-zero",
                              tuple(trace), consistent=True)


def _threefold_type(model) -> int:
    if model.kind == "curvature_model":
        return {"wallach": 1, "middle": 2}[model.curvature["type"]]
    if model.kind == "lie" and model.dim == 3:
        T = model.torsion
        if gauduchon_form(T).balanced:
            _, a = special_frame(T)
            if np.min(a) > 1e-8 and np.ptp(a) <= 1e-8 * max(1.0, a[0]):
                return 3
    raise AnalysisError("model is not one of the classified balanced BTP threefold types "
                        "(SO(3,C) quotient, Wallach, middle type)")


def threefold_probe(model, connection: str, t=None) -> ObstructionVerdict:
    """Replay the balanced-threefold contradiction for the model's B-rank."""
    r = _threefold_type(model)
    if connection == "gauduchon" and t is None:
        raise AnalysisError("gauduchon connection needs t")
    ts = _exact_t(t) if connection == "gauduchon" else None
    label = _label(connection, ts)
    c = sp.Symbol("c", real=True)
    a1 = sp.Symbol("a1", positive=True)
    a = [a1] * r + [sp.Integer(0)] * (3 - r)
    T = special_torsion(a, dtype=object)
    Rf = _reconstruct(connection, ts, c, T)
    trace = [f"B-rank r = {r}; special frame a = ({', '.join(map(str, a))})",
             f"reconstructed R^b_(i ibar i ibar) = {sp.simplify(Rf[0, 0, 0, 0])}"]

    def done(verdict, constraints, forced="0", consistent=False):
        return ObstructionVerdict(label, forced, tuple(constraints), verdict,
                                  tuple(trace), consistent)

    if r == 3:
        q = quadratic_terms(T)
        Rm = q["v_li"] - q["w"] - q["v_ji"] - q["v_lk"]
        trace.append("Chern flat and BTP: R^b = -w + v_li - v_ji - v_lk")
        eqs = {sp.expand(Rm[i, i, k, k] - Rf[i, i, k, k])
               for i in range(3) for k in range(3)}
        eqs.discard(0)
        trace.append("R^b_(i ibar k kbar) (model) - (reconstruction) = 0: "
                     + ", ".join(f"{e} = 0" for e in sorted(eqs, key=str)))
        diag = [sp.expand(Rm[i, i, i, i] - Rf[i, i, i, i]) for i in range(3)]
        c_val = sp.solve(diag, c, dict=True)
        c_val = c_val[0][c] if c_val else None
        rest = {sp.simplify(e.subs(c, 0)) for e in eqs} - {0}
        if c_val != 0:
            return done("undetermined", [str(e) for e in eqs], None)
        trace.append("diagonal entries give c = 0")
        if rest:
            trace.append(f"remaining: {', '.join(f'{e} = 0' for e in rest)} forces a1 = 0, "
                         "contradicting a1 > 0")
            return done("infeasible", [f"{e} = 0" for e in rest])
        trace.append("no contradiction: Chern flat, c = 0 is consistent")
        return done("c-must-be-zero", [], consistent=True)

    Rmodel = catalog.curvature_model_bismut(model, exact=True)
    if r == 1:
        rel = sp.simplify(Rmodel[0, 0, 0, 0] - 2 * Rmodel[1, 1, 0, 0])
        trace.append(f"model: R^b_(1111) - 2 R^b_(2211) = {rel} "
                     "(Theta_11 = 2 phi_11 + phi_22 + phi_33)")
        if rel != 0:
            raise AnalysisError("Wallach model violates R^b_1111 = 2 R^b_2211")
        e = sp.expand(Rf[0, 0, 0, 0] - 2 * Rf[1, 1, 0, 0])
        trace.append(f"reconstruction: c = 2 R^b_(2211) gives {e} = 0")
        if sp.solve(sp.Eq(e, 0), a1):
            return done("undetermined", [f"{e} = 0"], None)
        trace.append("forces a1 = 0, contradicting a1 > 0")
        return done("infeasible", [f"{e} = 0"], None)

    # r == 2, middle type: Theta_33 = 0
    z33 = (Rmodel[1, 1, 2, 2], Rmodel[2, 2, 2, 2])
    trace.append(f"model: Theta_33 = 0 so R^b_(2233) = {z33[0]}, R^b_(3333) = {z33[1]}")
    e_c = sp.expand(Rf[2, 2, 2, 2])
    e_a = sp.expand(Rf[1, 1, 2, 2])
    trace.append(f"reconstruction: R^b_(3333) = {e_c}, R^b_(2233) = {e_a}")
    c_sol = sp.solve(sp.Eq(e_c, 0), c)
    if c_sol != [0]:
        return done("undetermined", [f"{e_c} = 0"], None)
    rest = sp.expand(e_a.subs(c, 0))
    trace.append(f"c = 0, then {rest} = 0")
    if rest != 0:
        trace.append("forces a1 = 0, contradicting a1 > 0")
        return done("infeasible", [f"{rest} = 0"])
    # t = +-1: H^(t) has the symmetrized curvature of R^b; use the quartic
    if ts is not None and ts == -1:
        q = quadratic_terms(T)
        mirror = 2 * (q["v_ji"] + q["v_lk"]) + 4 * (q["w"] - q["v_li"])
        diff = symmetrize(mirror)
        trace.append("t = -1: R^(-1) - R^b = 2(v_ji + v_lk) + 4(w - v_li), whose "
                     f"symmetrization is {'zero' if all(sp.simplify(x) == 0 for x in diff.flat) else 'nonzero'}; "
                     "so H^(-1) = H^b")
    y = sp.Symbol("y", real=True)
    trace.append("R^b_(1111) = x must equal c = 0, so x = 0")
    w1 = sp.expand(middle_type_quartic(0, y, (1, sp.I, 0)))
    w2 = sp.expand(middle_type_quartic(0, y, (1, -sp.I, 0)))
    trace.append(f"with x = 0: R^b(X) = 2q(q - iyp); X = (1, i, 0) gives {w1}, "
                 f"X = (1, -i, 0) gives {w2}")
    if sp.solve([w1, w2], y):
        return done("undetermined", [f"{w1} = 0", f"{w2} = 0"])
    trace.append("both cannot vanish for one y: H^b is not constant")
    return done("infeasible", [f"{w1} = 0", f"{w2} = 0"])


def middle_type_quartic(x, y, X):
    """``R^b(X, Xbar, X, Xbar)`` for the middle-type curvature model.

    Evaluates ``p * dalpha(X, Xbar) + q * dbeta0(X, Xbar)`` with
    ``p = |x1|^2 + |x2|^2`` and ``q = x1 conj(x2) - x2 conj(x1)``, using
    ``(phi_k ^ conj phi_j)(X, Xbar) = x_k conj(x_j)``.
    """
    symbolic = any(isinstance(v, sp.Basic) for v in (x, y, *X))
    I = sp.I if symbolic else 1j
    conj = sp.conjugate if symbolic else np.conj
    x1, x2 = X[0], X[1]
    p = x1 * conj(x1) + x2 * conj(x2)
    q = x1 * conj(x2) - x2 * conj(x1)

    def pair(k, j):
        return X[k - 1] * conj(X[j - 1])

    dalpha = x * (pair(1, 1) + pair(2, 2)) + I * y * (pair(2, 1) - pair(1, 2))
    dbeta0 = -I * y * (pair(1, 1) + pair(2, 2)) + (x - 2) * (pair(2, 1) - pair(1, 2))
    return p * dalpha + q * dbeta0


# -------------------------------------------------------------- HSC scan

@dataclass(frozen=True)
class HSCStats:
    min: float
    max: float
    mean: float
    variance: float
    argmin: np.ndarray
    argmax: np.ndarray
    samples: int
    seed: int

    def as_dict(self) -> dict:
        def vec(v):
            return [[float(z.real), float(z.imag)] for z in v]
        return {"min": self.min, "max": self.max, "mean": self.mean,
                "variance": self.variance, "argmin": vec(self.argmin),
                "argmax": vec(self.argmax), "samples": self.samples, "seed": self.seed}


def _quartic_grad(P, X):
    Xc = np.conj(X)
    q = np.einsum("ijkl,i,j,k,l->", P, X, Xc, X, Xc)
    A = np.einsum("imkl,i,k,l->m", P, X, X, Xc) + np.einsum("ijkm,i,j,k->m", P, X, Xc, X)
    B = np.einsum("mjkl,j,k,l->m", P, Xc, X, Xc) + np.einsum("ijml,i,j,l->m", P, X, Xc, Xc)
    return q.real, A + np.conj(B)


def _refine(P, X, sign: int, max_iter: int = 200, gtol: float = 1e-10):
    """Local minimum (sign=-1) or maximum (+1) of the HSC near ``X``.

    Quasi-Newton on the scale-invariant function ``X -> HSC(X)`` of
    ``R^{2n}``; its gradient at a unit vector is the projection of the
    quartic's gradient onto the sphere.
    """
    n = X.size

    def fun(v):
        Z = v[:n] + 1j * v[n:]
        N = np.real(np.vdot(Z, Z))
        q, G = _quartic_grad(P, Z)
        h = q / N ** 2
        grad = G / N ** 2 - 4 * h * Z / N
        return -sign * h, -sign * np.concatenate([grad.real, grad.imag])

    x0 = X / np.linalg.norm(X)
    res = minimize(fun, np.concatenate([x0.real, x0.imag]), jac=True, method="BFGS",
                   options={"gtol": gtol, "maxiter": max_iter})
    Z = res.x[:n] + 1j * res.x[n:]
    Z = Z / np.linalg.norm(Z)
    return float(-sign * res.fun), Z


def _scan_batch(P, n, seed, batch, count):
    rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(batch,)))
    cols = []
    while len(cols) < count:
        U = haar_unitary(n, rng)
        cols.extend(U[:, j] for j in range(n))
    dirs = np.array(cols[:count])
    vals = np.array([hsc_value(P, X).real for X in dirs])
    return vals, dirs


def hsc_scan(P: np.ndarray, samples: int = 256, seed: int = 0, *, batch_size: int = 64,
             workers: int = 1, refine: bool = True) -> HSCStats:
    """Holomorphic sectional curvature over sampled unit directions.

    Directions are columns of Haar unitaries drawn from per-batch substreams
    of ``seed``, so the output does not depend on ``workers``.  The extreme
    samples are refined by projected gradient ascent/descent.
    """
    if samples < 1:
        raise AnalysisError("samples must be at least 1")
    P = np.asarray(P, dtype=complex)
    n = P.shape[0]
    nb = math.ceil(samples / batch_size)
    counts = [min(batch_size, samples - b * batch_size) for b in range(nb)]
    jobs = [(P, n, seed, b, counts[b]) for b in range(nb)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda j: _scan_batch(*j), jobs))
    else:
        parts = [_scan_batch(*j) for j in jobs]
    vals = np.concatenate([p[0] for p in parts])
    dirs = np.concatenate([p[1] for p in parts])
    i_min, i_max = int(np.argmin(vals)), int(np.argmax(vals))
    vmin, xmin = vals[i_min], dirs[i_min]
    vmax, xmax = vals[i_max], dirs[i_max]
    if refine:
        fmin, ymin = _refine(P, xmin, -1)
        fmax, ymax = _refine(P, xmax, +1)
        if fmin < vmin:
            vmin, xmin = fmin, ymin
        if fmax > vmax:
            vmax, xmax = fmax, ymax
    return HSCStats(float(vmin), float(vmax), float(np.mean(vals)), float(np.var(vals)),
                    xmin, xmax, samples, seed)
