"""Built-in manifold models and the JSON model-file format.

Three kinds of model are supported:

``chart``
    a Hermitian metric ``g_{i jbar}`` written as rational expressions in
    ``z1..zn, w1..wn`` on a single chart.
``lie``
    a complex Lie group with a left-invariant metric for which the
    invariant holomorphic frame is unitary; it is described by structure
    constants ``[e_i, e_k] = sum_r c^r_{ik} e_r``.
``curvature_model``
    a balanced BTP threefold given by its Bismut curvature matrix under a
    special frame (Wallach or middle type) together with its torsion.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

import jsonschema
import numpy as np

from . import expr as ex
from .tensors import epsilon3

__all__ = [
    "ManifoldModel",
    "ModelError",
    "build",
    "load_model",
    "save_model",
    "model_from_dict",
    "model_to_dict",
    "curvature_model_bismut",
    "curvature_model_torsion",
    "wallach_theta",
    "middle_theta",
    "theta_to_curvature",
    "jacobi_residual",
    "CATALOG_NAMES",
    "data_path",
]

CATALOG_NAMES = ("flat_torus", "kaehler_ball_like", "hopf", "so3c", "wallach", "middle")


class ModelError(ValueError):
    """Schema or invariant violation in a model description."""


@dataclass(frozen=True, eq=False)
class ManifoldModel:
    kind: str
    dim: int
    name: str | None = None
    metric: tuple | None = None                 # chart: n x n ExprTree
    structure_constants: np.ndarray | None = None  # lie: c[r, i, k] = c^r_{ik}
    curvature: dict | None = None               # curvature_model parameters
    metadata: dict = field(default_factory=dict)

    def __eq__(self, other):
        return isinstance(other, ManifoldModel) and model_to_dict(self) == model_to_dict(other)

    def __hash__(self):
        return hash(json.dumps(model_to_dict(self), sort_keys=True))

    def __repr__(self):
        label = self.name or self.kind
        return f"ManifoldModel({label!r}, kind={self.kind!r}, dim={self.dim})"

    @property
    def torsion(self) -> np.ndarray:
        """Constant torsion of a lie or curvature model, ``T[j, i, k]``."""
        if self.kind == "lie":
            return -np.asarray(self.structure_constants, dtype=complex)
        if self.kind == "curvature_model":
            return curvature_model_torsion(self)
        raise ModelError("chart models have point-dependent torsion; use geometry.chern_data")


# ------------------------------------------------------------------ builders

def _metric_from_strings(rows, dim) -> tuple:
    return tuple(tuple(ex.parse(s, dim) for s in row) for row in rows)


def build(name: str, **params) -> ManifoldModel:
    """Construct a catalog model by name.

    ``flat_torus(n)``, ``kaehler_ball_like(n)``, ``hopf(n)``, ``so3c(scale)``,
    ``wallach(b, t, s, a1)``, ``middle(x, y, a1)``.
    """
    if name == "flat_torus":
        n = _dim_param(params)
        rows = [["1" if i == j else "0" for j in range(n)] for i in range(n)]
        return ManifoldModel("chart", n, name="flat_torus", metric=_metric_from_strings(rows, n))
    if name == "kaehler_ball_like":
        # -d dbar log(1 - |z|^2): the ball metric, Kaehler with H = -2.
        n = _dim_param(params)
        rho = "+".join(f"z{m}*w{m}" for m in range(1, n + 1))
        rows = [[(f"1/(1-({rho}))+" if i == j else "") + f"w{i}*z{j}/(1-({rho}))^2"
                 for j in range(1, n + 1)] for i in range(1, n + 1)]
        return ManifoldModel("chart", n, name="kaehler_ball_like",
                             metric=_metric_from_strings(rows, n),
                             metadata={"domain": "|z| < 1"})
    if name == "hopf":
        n = _dim_param(params)
        rho = "+".join(f"z{m}*w{m}" for m in range(1, n + 1))
        rows = [[f"1/({rho})" if i == j else "0" for j in range(n)] for i in range(n)]
        meta = {"domain": "z != 0", "quotient": "z ~ alpha*z"}
        if "alpha" in params:
            meta["alpha"] = params["alpha"]
        return ManifoldModel("chart", n, name="hopf", metric=_metric_from_strings(rows, n),
                             metadata=meta)
    if name == "so3c":
        scale = params.get("scale", 1)
        c = np.asarray(epsilon3(int), dtype=complex).transpose(2, 0, 1) * complex(scale)
        # c[r, i, k] = scale * eps_{ikr}
        return ManifoldModel("lie", 3, name="so3c", structure_constants=c)
    if name == "wallach":
        p = {"type": "wallach", "b": float(params.get("b", 0.0)),
             "t": complex(params.get("t", 0)), "s": complex(params.get("s", 0)),
             "a1": float(params.get("a1", 1.0))}
        _check_curvature_params(p)
        return ManifoldModel("curvature_model", 3, name="wallach", curvature=p)
    if name == "middle":
        p = {"type": "middle", "x": float(params.get("x", 0.0)),
             "y": float(params.get("y", 0.0)), "a1": float(params.get("a1", 1.0))}
        _check_curvature_params(p)
        return ManifoldModel("curvature_model", 3, name="middle", curvature=p)
    raise ModelError(f"unknown model {name!r}; expected one of {', '.join(CATALOG_NAMES)}")


def _dim_param(params) -> int:
    n = params.get("n", params.get("dim", 2))
    if int(n) != n or n < 2:
        raise ModelError(f"dimension must be an integer >= 2, got {n!r}")
    return int(n)


def _check_curvature_params(p: dict) -> None:
    values = [complex(v) for k, v in p.items() if k != "type"]
    if not all(np.isfinite(v.real) and np.isfinite(v.imag) for v in values):
        raise ModelError(f"{p['type']} parameters must be finite")
    if p["a1"] <= 0:
        raise ModelError("a1 must be positive")


# ------------------------------------------------------- curvature models

def _form(entries: dict, n: int = 3, dtype=object) -> np.ndarray:
    """(1,1)-form ``sum F[k, j] phi_k ^ conj(phi_j)`` from ``{(k, j): coeff}`` (1-based)."""
    F = np.zeros((n, n), dtype=dtype)
    if dtype == object:
        F[...] = 0
    for (k, j), v in entries.items():
        F[k - 1, j - 1] = F[k - 1, j - 1] + v
    return F


def _conj_form(F: np.ndarray) -> np.ndarray:
    # conj(phi_k ^ conj(phi_j)) = -phi_j ^ conj(phi_k)
    return -np.conj(F).T


def wallach_theta(b, t, s) -> list[list[np.ndarray]]:
    """Bismut curvature matrix of the Wallach threefold under a special frame."""
    tb = np.conj(t)
    alpha = _form({(1, 1): 1, (2, 2): 1 - b, (3, 3): b, (2, 3): t, (3, 2): tb})
    beta = _form({(1, 1): 1, (2, 2): b, (3, 3): 1 - b, (2, 3): -t, (3, 2): -tb})
    sigma = _form({(2, 2): t, (3, 3): -t, (2, 3): s, (3, 2): 1 + b})
    zero = _form({})
    return [[alpha + beta, zero, zero],
            [zero, alpha, sigma],
            [zero, -_conj_form(sigma), beta]]


def middle_theta(x, y) -> list[list[np.ndarray]]:
    """Bismut curvature matrix of a middle-type threefold under a special frame."""
    iy = 1j * y if not _is_symbolic(y) else _sym_I() * y
    dalpha = _form({(1, 1): x, (2, 2): x, (2, 1): iy, (1, 2): -iy})
    dbeta0 = _form({(1, 1): -iy, (2, 2): -iy, (2, 1): x - 2, (1, 2): -(x - 2)})
    zero = _form({})
    return [[dalpha, dbeta0, zero],
            [-dbeta0, dalpha, zero],
            [zero, zero, zero]]


def _is_symbolic(v) -> bool:
    return type(v).__module__.startswith("sympy")


def _sym_I():
    import sympy
    return sympy.I


def theta_to_curvature(theta) -> np.ndarray:
    """Curvature tensor from a matrix of (1,1)-forms.

    Entry ``(i, l)`` of the matrix has ``phi_k ^ conj(phi_j)`` coefficient
    ``R_{k jbar i lbar}``.
    """
    n = len(theta)
    R = np.empty((n, n, n, n), dtype=object)
    for i in range(n):
        for l in range(n):
            R[:, :, i, l] = theta[i][l]
    return R


def curvature_model_bismut(model: ManifoldModel, exact: bool = False) -> np.ndarray:
    """Bismut curvature ``R^b_{i jbar k lbar}`` of a curvature model."""
    p = model.curvature
    if p is None:
        raise ModelError("not a curvature model")
    if p["type"] == "wallach":
        args = (p["b"], p["t"], p["s"])
        theta = wallach_theta(*(_exact(a) for a in args) if exact else args)
    else:
        args = (p["x"], p["y"])
        theta = middle_theta(*(_exact(a) for a in args) if exact else args)
    R = theta_to_curvature(theta)
    return R if exact else R.astype(complex)


def _exact(v):
    import sympy
    if isinstance(v, complex):
        return sympy.nsimplify(v.real, rational=True) + sympy.I * sympy.nsimplify(
            v.imag, rational=True)
    return sympy.nsimplify(v, rational=True)


def special_torsion(a, dtype=complex) -> np.ndarray:
    """Torsion with ``T^i_{jk} = a_i`` for cyclic ``(ijk)`` and nothing else."""
    T = np.zeros((3, 3, 3), dtype=dtype)
    if dtype == object:
        T[...] = 0
    eps = epsilon3(int)
    for i in range(3):
        for j in range(3):
            for k in range(3):
                if eps[j, k, i]:
                    T[i, j, k] = eps[j, k, i] * a[i]
    return T


def curvature_model_torsion(model: ManifoldModel, exact: bool = False) -> np.ndarray:
    p = model.curvature
    a1 = _exact(p["a1"]) if exact else p["a1"]
    a = (a1, 0, 0) if p["type"] == "wallach" else (a1, a1, 0)
    return special_torsion(a, dtype=object if exact else complex)


# --------------------------------------------------------------- lie models

def jacobi_residual(c: np.ndarray) -> float:
    """max |sum_r c^r_{ij} c^m_{rk} + cyclic(i, j, k)|."""
    c = np.asarray(c, dtype=complex)
    J = np.einsum("rij,mrk->ijkm", c, c)
    cyc = J + J.transpose(1, 2, 0, 3) + J.transpose(2, 0, 1, 3)
    return float(np.max(np.abs(cyc), initial=0.0))


# ------------------------------------------------------------- file format

_CHART = {
    "type": "object",
    "properties": {
        "kind": {"const": "chart"},
        "dim": {"type": "integer", "minimum": 1},
        "name": {"type": "string"},
        "metadata": {"type": "object"},
        "metric": {"type": "array",
                   "items": {"type": "array", "items": {"type": "string"}}},
    },
    "required": ["kind", "dim", "metric"],
    "additionalProperties": False,
}

_LIE = {
    "type": "object",
    "properties": {
        "kind": {"const": "lie"},
        "dim": {"type": "integer", "minimum": 1},
        "name": {"type": "string"},
        "metadata": {"type": "object"},
        "structure_constants": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "r": {"type": "integer", "minimum": 1},
                    "i": {"type": "integer", "minimum": 1},
                    "k": {"type": "integer", "minimum": 1},
                    "value": {"type": "array", "items": {"type": "number"},
                              "minItems": 2, "maxItems": 2},
                },
                "required": ["r", "i", "k", "value"],
                "additionalProperties": False,
            },
        },
    },
    "required": ["kind", "dim", "structure_constants"],
    "additionalProperties": False,
}

_COMPLEX = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}

_CURV = {
    "type": "object",
    "properties": {
        "kind": {"const": "curvature_model"},
        "dim": {"const": 3},
        "name": {"type": "string"},
        "metadata": {"type": "object"},
        "model": {
            "oneOf": [
                {"type": "object",
                 "properties": {"type": {"const": "wallach"}, "b": {"type": "number"},
                                "t": _COMPLEX, "s": _COMPLEX,
                                "a1": {"type": "number", "exclusiveMinimum": 0}},
                 "required": ["type", "b", "t", "s", "a1"],
                 "additionalProperties": False},
                {"type": "object",
                 "properties": {"type": {"const": "middle"}, "x": {"type": "number"},
                                "y": {"type": "number"},
                                "a1": {"type": "number", "exclusiveMinimum": 0}},
                 "required": ["type", "x", "y", "a1"],
                 "additionalProperties": False},
            ]
        },
    },
    "required": ["kind", "dim", "model"],
    "additionalProperties": False,
}

_SCHEMAS = {"chart": _CHART, "lie": _LIE, "curvature_model": _CURV}


def _validate(data: Any) -> None:
    if not isinstance(data, dict):
        raise ModelError("model file must contain a JSON object")
    kind = data.get("kind")
    if kind not in _SCHEMAS:
        raise ModelError(f"$.kind: expected one of {sorted(_SCHEMAS)}, got {kind!r}")
    validator = jsonschema.Draft202012Validator(_SCHEMAS[kind])
    errors = sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        path = "$" + "".join(f"[{p}]" if isinstance(p, int) else f".{p}"
                             for p in err.absolute_path)
        raise ModelError(f"{path}: {err.message}")


def model_from_dict(data: dict) -> ManifoldModel:
    _validate(data)
    kind, n = data["kind"], data["dim"]
    name, meta = data.get("name"), dict(data.get("metadata", {}))
    if kind == "chart":
        rows = data["metric"]
        if len(rows) != n or any(len(r) != n for r in rows):
            raise ModelError(f"$.metric: expected a {n}x{n} matrix")
        metric = []
        for i, row in enumerate(rows):
            out_row = []
            for j, src in enumerate(row):
                try:
                    out_row.append(ex.parse(src, n))
                except ex.ParseError as err:
                    raise ModelError(f"$.metric[{i}][{j}]: {err}") from err
            metric.append(tuple(out_row))
        metric = tuple(metric)
        _check_hermitian(metric, n)
        return ManifoldModel("chart", n, name=name, metric=metric, metadata=meta)
    if kind == "lie":
        c = np.zeros((n, n, n), dtype=complex)
        seen = np.zeros((n, n, n), dtype=bool)
        for idx, sc in enumerate(data["structure_constants"]):
            r, i, k = sc["r"] - 1, sc["i"] - 1, sc["k"] - 1
            if max(r, i, k) >= n:
                raise ModelError(f"$.structure_constants[{idx}]: index out of range")
            v = complex(*sc["value"])
            if i == k:
                if v != 0:
                    raise ModelError(f"$.structure_constants[{idx}]: c^r_ii must vanish")
                continue
            for (a, b, val) in ((i, k, v), (k, i, -v)):
                if seen[r, a, b] and c[r, a, b] != val:
                    raise ModelError(
                        f"$.structure_constants[{idx}]: conflicts with antisymmetry")
                c[r, a, b] = val
                seen[r, a, b] = True
        res = jacobi_residual(c)
        if res > 1e-12 * max(1.0, float(np.max(np.abs(c))) ** 2):
            raise ModelError(f"structure constants violate the Jacobi identity (residual {res:.3e})")
        return ManifoldModel("lie", n, name=name, structure_constants=c, metadata=meta)
    m = dict(data["model"])
    if m["type"] == "wallach":
        p = {"type": "wallach", "b": float(m["b"]), "t": complex(*m["t"]),
             "s": complex(*m["s"]), "a1": float(m["a1"])}
    else:
        p = {"type": "middle", "x": float(m["x"]), "y": float(m["y"]), "a1": float(m["a1"])}
    return ManifoldModel("curvature_model", 3, name=name, curvature=p, metadata=meta)


def _check_hermitian(metric, n: int) -> None:
    rng = random.Random(20240601)
    pts = [[ex.CRational(Fraction(rng.randint(-9, 9), 7), Fraction(rng.randint(-9, 9), 11))
            for _ in range(n)] for _ in range(4)]
    for i in range(n):
        for j in range(i, n):
            a, b = metric[i][j], ex.conj_swap(metric[j][i])
            if a == b:
                continue
            ok = True
            for p in pts:
                try:
                    if ex.evaluate_exact(a, p) != ex.evaluate_exact(b, p):
                        ok = False
                        break
                except ex.EvaluationError:
                    continue
            if not ok:
                raise ModelError(
                    f"metric is not Hermitian: g[{i + 1}][{j + 1}] != conj-swap(g[{j + 1}][{i + 1}])")


def _num(v: float):
    v = float(v)
    return int(v) if v.is_integer() else v


def model_to_dict(model: ManifoldModel) -> dict:
    out: dict[str, Any] = {"kind": model.kind, "dim": model.dim}
    if model.name is not None:
        out["name"] = model.name
    if model.metadata:
        out["metadata"] = dict(model.metadata)
    if model.kind == "chart":
        out["metric"] = [[str(e) for e in row] for row in model.metric]
    elif model.kind == "lie":
        c = np.asarray(model.structure_constants)
        n = model.dim
        out["structure_constants"] = [
            {"r": r + 1, "i": i + 1, "k": k + 1,
             "value": [_num(c[r, i, k].real), _num(c[r, i, k].imag)]}
            for r in range(n) for i in range(n) for k in range(i + 1, n) if c[r, i, k] != 0]
    else:
        p = model.curvature
        if p["type"] == "wallach":
            out["model"] = {"type": "wallach", "b": _num(p["b"]),
                            "t": [_num(p["t"].real), _num(p["t"].imag)],
                            "s": [_num(p["s"].real), _num(p["s"].imag)],
                            "a1": _num(p["a1"])}
        else:
            out["model"] = {"type": "middle", "x": _num(p["x"]), "y": _num(p["y"]),
                            "a1": _num(p["a1"])}
    return out


def load_model(path) -> ManifoldModel:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as err:
        raise ModelError(f"{path}: invalid JSON ({err})") from err
    return model_from_dict(data)


def save_model(model: ManifoldModel, path) -> None:
    Path(path).write_text(json.dumps(model_to_dict(model), indent=2, sort_keys=True) + "\n",
                          encoding="utf-8")


def data_path(filename: str) -> Path:
    """Path of a model file shipped with the package."""
    return Path(__file__).parent / "data" / filename
