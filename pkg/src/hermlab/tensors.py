"""Tensor containers and frame algebra under a unitary frame.

Index conventions (0-based arrays, used everywhere in the package):

* curvature-type tensors: ``P[i, j, k, l] = P_{i jbar k lbar}``
* torsion: ``T[j, i, k] = T^j_{ik}``, antisymmetric in ``(i, k)``
* Hermitian 2-tensors: ``B[i, j] = B_{i jbar}``
* a frame change ``U`` has the new frame vectors as rows,
  ``e'_a = sum_i U[a, i] e_i``.

All functions accept ``object`` arrays (``Fraction`` or sympy entries) as
well as complex floating arrays, so identities can be checked exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.stats import unitary_group

__all__ = [
    "UnitaryFrame",
    "FrameError",
    "model_tensor",
    "symmetrize",
    "quartic",
    "hsc_value",
    "constant_hsc_fit",
    "change_frame",
    "gram_schmidt",
    "quadratic_terms",
    "hermitian_pairing_residual",
    "is_unitary",
    "haar_unitary",
    "epsilon3",
    "torsion_antisymmetry_residual",
]

UNITARY_TOL = 1e-12


class FrameError(ValueError):
    pass


@dataclass(frozen=True)
class UnitaryFrame:
    """Unitary frame at a point.

    ``matrix[a, i]`` is the coefficient of ``d/dz_i`` in ``e_a``.  It satisfies
    ``matrix @ g @ matrix.conj().T == I`` for the metric ``g[i, j] = g_{i jbar}``.
    """

    matrix: np.ndarray
    point: tuple = ()

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def inverse(self) -> np.ndarray:
        return np.linalg.inv(self.matrix)


def _eye(n: int, like: np.ndarray | None = None) -> np.ndarray:
    if like is not None and like.dtype == object:
        out = np.empty((n, n), dtype=object)
        out[...] = Fraction(0)
        for i in range(n):
            out[i, i] = Fraction(1)
        return out
    return np.eye(n)


def model_tensor(n: int, like: np.ndarray | None = None) -> np.ndarray:
    """``delta_ij delta_kl + delta_il delta_kj``, the curvature of constant HSC 2."""
    d = _eye(n, like)
    return np.einsum("ij,kl->ijkl", d, d) + np.einsum("il,kj->ijkl", d, d)


def symmetrize(P: np.ndarray) -> np.ndarray:
    """Average over the swaps ``i <-> k`` and ``j <-> l``."""
    total = (P + P.transpose(2, 1, 0, 3) + P.transpose(0, 3, 2, 1)
             + P.transpose(2, 3, 0, 1))
    return total * Fraction(1, 4) if P.dtype == object else total / 4


def quartic(P: np.ndarray, X) -> complex:
    """``P(X, Xbar, X, Xbar)``."""
    X = np.asarray(X)
    Xb = np.conj(X)
    return np.einsum("ijkl,i,j,k,l->", P, X, Xb, X, Xb)


def hsc_value(P: np.ndarray, X) -> complex:
    """Holomorphic sectional curvature ``P(X,Xbar,X,Xbar) / |X|^4``."""
    X = np.asarray(X)
    norm2 = np.sum(X * np.conj(X))
    if norm2 == 0:
        raise ValueError("holomorphic sectional curvature of the zero vector")
    return quartic(P, X) / norm2 ** 2


def constant_hsc_fit(P: np.ndarray) -> tuple[float, float]:
    """Best constant ``c`` with ``sym(P) ~ (c/2) model_tensor`` and the residual.

    The residual is the Frobenius norm of ``sym(P) - (c/2) model``; it is zero
    exactly when the holomorphic sectional curvature of ``P`` is constant.
    """
    P = np.asarray(P, dtype=complex)
    n = P.shape[0]
    half_model = model_tensor(n) / 2
    Ph = symmetrize(P)
    c = float(np.real(np.vdot(half_model, Ph)) / np.vdot(half_model, half_model).real)
    residual = float(np.linalg.norm(Ph - c * half_model))
    return c, residual


def is_unitary(U: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    U = np.asarray(U, dtype=complex)
    return np.max(np.abs(U @ U.conj().T - np.eye(U.shape[0]))) <= tol


def change_frame(A: np.ndarray, U: np.ndarray, *, check: bool = True) -> np.ndarray:
    """Components of a tensor in the frame ``e'_a = sum_i U[a, i] e_i``.

    The kind is read from ``A.ndim``: 2 for Hermitian ``B_{i jbar}``, 3 for
    torsion ``T^j_{ik}``, 4 for curvature ``P_{i jbar k lbar}``.
    """
    U = np.asarray(U)
    if check and U.dtype != object and not is_unitary(U):
        raise FrameError("frame change is not unitary")
    Uc = np.conj(U)
    if A.ndim == 2:
        return np.einsum("ai,bj,ij->ab", U, Uc, A)
    if A.ndim == 3:
        # e_m = sum_b conj(U[b, m]) e'_b for unitary U
        return np.einsum("ai,ck,mik,bm->bac", U, U, A, Uc)
    if A.ndim == 4:
        return np.einsum("ai,bj,ck,dl,ijkl->abcd", U, Uc, U, Uc, A)
    raise FrameError(f"no frame rule for a tensor of rank {A.ndim}")


def gram_schmidt(g: np.ndarray, point: tuple = ()) -> UnitaryFrame:
    """Unitary frame obtained by Gram-Schmidt on ``d/dz_1, ..., d/dz_n``.

    Returns a lower-triangular ``E`` (rows are frame vectors) with
    ``E g E^H = I``.
    """
    g = np.asarray(g, dtype=complex)
    if np.max(np.abs(g - g.conj().T)) > 1e-12 * max(1.0, np.max(np.abs(g))):
        raise FrameError("metric matrix is not Hermitian")
    evals = np.linalg.eigvalsh(g)
    if evals.min() <= 1e-12:
        raise FrameError(f"metric is not positive definite (min eigenvalue {evals.min():.3e})")
    # <e_a, e_b> = (E g E^H)[a, b]; g = L L^H gives E = L^{-1}.
    L = np.linalg.cholesky(g)
    E = np.linalg.inv(L)
    return UnitaryFrame(np.tril(E), tuple(point))


def quadratic_terms(T: np.ndarray) -> dict[str, np.ndarray]:
    """The five torsion quadratics, as curvature-type tensors.

    ``w = T^r_{ik} conj(T^r_{jl})``, ``v_ji = T^j_{ir} conj(T^k_{lr})``,
    ``v_lk = T^l_{kr} conj(T^i_{jr})``, ``v_li = T^l_{ir} conj(T^k_{jr})``,
    ``v_jk = T^j_{kr} conj(T^i_{lr})``, summed over ``r``.
    """
    Tc = np.conj(T)
    return {
        "w": np.einsum("rik,rjl->ijkl", T, Tc),
        "v_ji": np.einsum("jir,klr->ijkl", T, Tc),
        "v_lk": np.einsum("lkr,ijr->ijkl", T, Tc),
        "v_li": np.einsum("lir,kjr->ijkl", T, Tc),
        "v_jk": np.einsum("jkr,ilr->ijkl", T, Tc),
    }


def hermitian_pairing_residual(P: np.ndarray) -> float:
    """max |P_{i jbar k lbar} - conj(P_{j ibar l kbar})|."""
    P = np.asarray(P, dtype=complex)
    return float(np.max(np.abs(P - np.conj(P.transpose(1, 0, 3, 2))), initial=0.0))


def torsion_antisymmetry_residual(T: np.ndarray) -> float:
    T = np.asarray(T, dtype=complex)
    return float(np.max(np.abs(T + T.transpose(0, 2, 1)), initial=0.0))


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    return unitary_group.rvs(n, random_state=rng) if n > 1 else np.exp(
        2j * np.pi * rng.random()) * np.ones((1, 1))


def epsilon3(dtype=int) -> np.ndarray:
    eps = np.zeros((3, 3, 3), dtype=dtype)
    for (i, j, k), s in {(0, 1, 2): 1, (1, 2, 0): 1, (2, 0, 1): 1,
                         (0, 2, 1): -1, (2, 1, 0): -1, (1, 0, 2): -1}.items():
        eps[i, j, k] = s
    return eps
