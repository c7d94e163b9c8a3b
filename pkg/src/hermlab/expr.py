"""Rational expressions in holomorphic coordinates and their conjugates.

Metric entries are written in the variables ``z1..zn`` and ``w1..wn`` where
``wi`` stands for ``conj(zi)``.  Under Wirtinger calculus the two families are
independent, so ``d/dz`` and ``d/dw`` are ordinary partial derivatives of the
tree.  Constants are exact complex rationals; only evaluation rounds.

Grammar::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | '+' unary | power
    power   := atom ('^' exponent)?
    exponent:= ['-'] INT | '(' ['-'] INT ')'
    atom    := NUMBER ['i'] | 'i' | ('z' | 'w') INT | '(' expr ')'
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Sequence

__all__ = [
    "CRational",
    "ExprTree",
    "ExprError",
    "ParseError",
    "EvaluationError",
    "parse",
    "wirtinger_diff",
    "evaluate",
    "evaluate_exact",
    "conj_swap",
    "compile_expr",
    "const",
    "zvar",
    "wvar",
    "add",
    "mul",
    "div",
    "power",
    "neg",
    "sub",
]


class ExprError(ValueError):
    """Base class for expression errors."""


class ParseError(ExprError):
    def __init__(self, message: str, position: int, source: str = ""):
        self.position = position
        self.source = source
        super().__init__(f"{message} at position {position}")


class EvaluationError(ExprError, ZeroDivisionError):
    """Raised when a denominator vanishes at the evaluation point."""


@dataclass(frozen=True)
class CRational:
    """Exact complex rational ``re + im*i``."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    @classmethod
    def of(cls, value) -> "CRational":
        if isinstance(value, CRational):
            return value
        if isinstance(value, complex):
            return cls(Fraction(value.real), Fraction(value.imag))
        return cls(Fraction(value), Fraction(0))

    def __add__(self, other):
        other = CRational.of(other)
        return CRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = CRational.of(other)
        return CRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return CRational.of(other) - self

    def __mul__(self, other):
        other = CRational.of(other)
        return CRational(self.re * other.re - self.im * other.im,
                         self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = CRational.of(other)
        den = other.re * other.re + other.im * other.im
        if den == 0:
            raise EvaluationError("division by zero")
        num = self * other.conjugate()
        return CRational(num.re / den, num.im / den)

    def __rtruediv__(self, other):
        return CRational.of(other) / self

    def __neg__(self):
        return CRational(-self.re, -self.im)

    def __pow__(self, k: int):
        if k < 0:
            return CRational(Fraction(1)) / (self ** -k)
        out = CRational(Fraction(1))
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        try:
            other = CRational.of(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def conjugate(self) -> "CRational":
        return CRational(self.re, -self.im)

    @property
    def is_real(self) -> bool:
        return self.im == 0

    def __str__(self):
        if self.im == 0:
            return _fmt_fraction(self.re)
        if self.re == 0:
            return _fmt_imag(self.im)
        sign = "-" if self.im < 0 else "+"
        return f"({_fmt_fraction(self.re)}{sign}{_fmt_imag(abs(self.im))})"

    def __repr__(self):
        return f"CRational({self})"


def _fmt_fraction(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"({q.numerator}/{q.denominator})"


def _fmt_imag(q: Fraction) -> str:
    if q == 1:
        return "i"
    if q == -1:
        return "-i"
    if q.denominator == 1:
        return f"{q.numerator}i"
    return f"({q.numerator}/{q.denominator})*i"


ZERO = CRational()
ONE = CRational(Fraction(1))

# Node kinds.  sub and neg only appear in raw parse output; normalization
# rewrites them through add/mul.
CONST, ZVAR, WVAR, ADD, SUB, MUL, DIV, POW, NEG = (
    "const", "z", "w", "add", "sub", "mul", "div", "pow", "neg")


class ExprTree:
    """Immutable expression node.

    ``kind`` is one of ``const, z, w, add, sub, mul, div, pow, neg``.  For
    variables ``value`` is the 1-based index, for ``pow`` the exponent and for
    constants a :class:`CRational`.
    """

    __slots__ = ("kind", "args", "value", "_key", "_hash")

    def __init__(self, kind: str, args: tuple = (), value=None):
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "args", tuple(args))
        object.__setattr__(self, "value", value)
        object.__setattr__(self, "_key", None)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("ExprTree is immutable")

    @property
    def key(self) -> str:
        if self._key is None:
            object.__setattr__(self, "_key", _to_string(self, 0))
        return self._key

    def __eq__(self, other):
        return isinstance(other, ExprTree) and self.key == other.key

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(self.key))
        return self._hash

    def __str__(self):
        return self.key

    def __repr__(self):
        return f"ExprTree({self.key!r})"

    # Arithmetic sugar for building trees in code.
    def __add__(self, other):
        return add(self, _lift(other))

    def __radd__(self, other):
        return add(_lift(other), self)

    def __sub__(self, other):
        return sub(self, _lift(other))

    def __rsub__(self, other):
        return sub(_lift(other), self)

    def __mul__(self, other):
        return mul(self, _lift(other))

    def __rmul__(self, other):
        return mul(_lift(other), self)

    def __truediv__(self, other):
        return div(self, _lift(other))

    def __rtruediv__(self, other):
        return div(_lift(other), self)

    def __neg__(self):
        return neg(self)

    def __pow__(self, k: int):
        return power(self, k)

    @property
    def is_const(self) -> bool:
        return self.kind == CONST

    def max_index(self) -> int:
        if self.kind in (ZVAR, WVAR):
            return self.value
        return max((a.max_index() for a in self.args), default=0)

    def has_division(self) -> bool:
        return self.kind == DIV or any(a.has_division() for a in self.args)

    def size(self) -> int:
        return 1 + sum(a.size() for a in self.args)


def _lift(x) -> ExprTree:
    return x if isinstance(x, ExprTree) else const(x)


# ---------------------------------------------------------------- printing

_PREC = {ADD: 1, SUB: 1, MUL: 2, DIV: 2, NEG: 3, POW: 4}


def _to_string(e: ExprTree, parent: int) -> str:
    k = e.kind
    if k == CONST:
        s = str(e.value)
        # Negative or compound literals need protection inside products/powers.
        if parent >= 2 and (s.startswith("-") or ("/" in s and not s.startswith("("))):
            return f"({s})"
        return s
    if k == ZVAR:
        return f"z{e.value}"
    if k == WVAR:
        return f"w{e.value}"
    if k == ADD:
        parts = []
        for i, a in enumerate(e.args):
            s = _to_string(a, 1)
            if i and not s.startswith("-"):
                s = "+" + s
            parts.append(s)
        out = "".join(parts)
    elif k == SUB:
        out = _to_string(e.args[0], 1) + "-" + _to_string(e.args[1], 2)
    elif k == MUL:
        args = list(e.args)
        prefix = ""
        if args[0].kind == CONST and args[0].value == -ONE and len(args) > 1:
            prefix = "-"
            args = args[1:]
        out = prefix + "*".join(_to_string(a, 2) for a in args)
        if prefix and parent >= 2:
            return f"({out})"
    elif k == DIV:
        num = _to_string(e.args[0], 2)
        out = f"{num}/{_to_string(e.args[1], 3)}"
        if num.startswith("-") and parent >= 2:
            return f"({out})"
    elif k == NEG:
        out = "-" + _to_string(e.args[0], 3)
        if parent >= 2:
            return f"({out})"
    elif k == POW:
        out = f"{_to_string(e.args[0], 5)}^{e.value}"
    else:  # pragma: no cover
        raise ExprError(f"unknown node kind {k}")
    if _PREC[k] < parent:
        return f"({out})"
    return out


# ---------------------------------------------------------- smart builders

def const(value) -> ExprTree:
    return ExprTree(CONST, (), CRational.of(value))


def zvar(i: int) -> ExprTree:
    return ExprTree(ZVAR, (), int(i))


def wvar(i: int) -> ExprTree:
    return ExprTree(WVAR, (), int(i))


_ZERO_T = const(0)
_ONE_T = const(1)


def _split_coeff(e: ExprTree) -> tuple[CRational, ExprTree | None]:
    """Split ``e`` as ``coeff * core`` with ``core`` free of a leading constant."""
    if e.kind == CONST:
        return e.value, None
    if e.kind == MUL and e.args[0].kind == CONST:
        rest = e.args[1:]
        core = rest[0] if len(rest) == 1 else ExprTree(MUL, rest)
        return e.args[0].value, core
    return ONE, e


def _scale(coeff: CRational, core: ExprTree | None) -> ExprTree:
    if core is None:
        return const(coeff)
    if coeff == ZERO:
        return _ZERO_T
    if coeff == ONE:
        return core
    if core.kind == MUL:
        return ExprTree(MUL, (const(coeff),) + core.args)
    return ExprTree(MUL, (const(coeff), core))


def add(*terms: ExprTree) -> ExprTree:
    flat: list[ExprTree] = []
    for t in terms:
        t = _lift(t)
        if t.kind == ADD:
            flat.extend(t.args)
        else:
            flat.append(t)
    constant = ZERO
    combined: dict[str, list] = {}
    order: list[str] = []
    for t in flat:
        c, core = _split_coeff(t)
        if core is None:
            constant = constant + c
            continue
        k = core.key
        if k in combined:
            combined[k][0] = combined[k][0] + c
        else:
            combined[k] = [c, core]
            order.append(k)
    out = [_scale(combined[k][0], combined[k][1]) for k in sorted(order)
           if combined[k][0] != ZERO]
    if constant != ZERO:
        out.append(const(constant))
    if not out:
        return _ZERO_T
    if len(out) == 1:
        return out[0]
    return ExprTree(ADD, tuple(out))


def mul(*factors: ExprTree) -> ExprTree:
    flat: list[ExprTree] = []
    for f in factors:
        f = _lift(f)
        if f.kind == MUL:
            flat.extend(f.args)
        else:
            flat.append(f)
    if any(f.kind == DIV for f in flat):
        nums = [f.args[0] if f.kind == DIV else f for f in flat]
        dens = [f.args[1] for f in flat if f.kind == DIV]
        return div(mul(*nums), mul(*dens))
    coeff = ONE
    powers: dict[str, list] = {}
    for f in flat:
        if f.kind == CONST:
            coeff = coeff * f.value
            continue
        base, k = (f.args[0], f.value) if f.kind == POW else (f, 1)
        key = base.key
        if key in powers:
            powers[key][1] += k
        else:
            powers[key] = [base, k]
    if coeff == ZERO:
        return _ZERO_T
    rest = [power(b, k) for _, (b, k) in sorted(powers.items()) if k != 0]
    rest = [r for r in rest if not (r.kind == CONST and r.value == ONE)]
    if not rest:
        return const(coeff)
    return _scale(coeff, rest[0] if len(rest) == 1 else ExprTree(MUL, tuple(rest)))


def div(num: ExprTree, den: ExprTree) -> ExprTree:
    num, den = _lift(num), _lift(den)
    if den.kind == CONST:
        if den.value == ZERO:
            raise EvaluationError("division by constant zero")
        return mul(const(ONE / den.value), num)
    if num.kind == CONST and num.value == ZERO:
        return _ZERO_T
    if num == den:
        return _ONE_T
    # Keep a single fraction bar: pull nested divisions outward.
    if num.kind == DIV:
        return div(num.args[0], mul(num.args[1], den))
    if den.kind == DIV:
        return div(mul(num, den.args[1]), den.args[0])
    cn, pn = _factor_powers(num)
    cd, pd = _factor_powers(den)
    for key in set(pn) & set(pd):
        m = min(pn[key][1], pd[key][1])
        pn[key][1] -= m
        pd[key][1] -= m
    coeff = cn / cd
    core_n = mul(*(power(b, k) for b, k in pn.values()))
    core_d = mul(*(power(b, k) for b, k in pd.values()))
    if core_d.kind == CONST:
        return mul(const(coeff / core_d.value), core_n)
    return _scale(coeff, ExprTree(DIV, (core_n, core_d)))


def _factor_powers(e: ExprTree) -> tuple[CRational, dict]:
    coeff, core = _split_coeff(e)
    out: dict[str, list] = {}
    if core is None:
        return coeff, out
    for f in (core.args if core.kind == MUL else (core,)):
        base, k = (f.args[0], f.value) if f.kind == POW else (f, 1)
        out[base.key] = [base, k]
    return coeff, out


def power(base: ExprTree, k: int) -> ExprTree:
    base = _lift(base)
    k = int(k)
    if k < 0:
        return div(_ONE_T, power(base, -k))
    if k == 0:
        return _ONE_T
    if k == 1:
        return base
    if base.kind == CONST:
        return const(base.value ** k)
    if base.kind == POW:
        return power(base.args[0], base.value * k)
    if base.kind == MUL:
        return mul(*(power(f, k) for f in base.args))
    if base.kind == DIV:
        return div(power(base.args[0], k), power(base.args[1], k))
    return ExprTree(POW, (base,), k)


def neg(e: ExprTree) -> ExprTree:
    return mul(const(-1), e)


def sub(a: ExprTree, b: ExprTree) -> ExprTree:
    return add(a, neg(b))


def normalize(e: ExprTree) -> ExprTree:
    """Rebuild ``e`` bottom-up through the smart constructors."""
    k = e.kind
    if k in (CONST, ZVAR, WVAR):
        return e
    args = [normalize(a) for a in e.args]
    if k == ADD:
        return add(*args)
    if k == SUB:
        return sub(*args)
    if k == MUL:
        return mul(*args)
    if k == DIV:
        return div(*args)
    if k == NEG:
        return neg(args[0])
    if k == POW:
        return power(args[0], e.value)
    raise ExprError(f"unknown node kind {k}")  # pragma: no cover


# ----------------------------------------------------------------- parsing

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<var>[zw]\d+)
  | (?P<imag>i)
  | (?P<op>[-+*/^()])
""", re.VERBOSE)


def _tokenize(source: str):
    pos = 0
    toks = []
    while pos < len(source):
        m = _TOKEN.match(source, pos)
        if m is None:
            raise ParseError(f"unexpected character {source[pos]!r}", pos, source)
        kind = m.lastgroup
        if kind != "ws":
            toks.append((kind, m.group(), pos))
        pos = m.end()
    toks.append(("end", "", len(source)))
    return toks


class _Parser:
    def __init__(self, source: str, dim: int):
        self.source = source
        self.dim = dim
        self.toks = _tokenize(source)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        return ParseError(msg, tok[2], self.source)

    def expect(self, text):
        tok = self.take()
        if tok[1] != text:
            raise self.error(f"expected {text!r}, found {tok[1] or 'end of input'!r}", tok)
        return tok

    def parse(self) -> ExprTree:
        if self.peek()[0] == "end":
            raise ParseError("empty input", 0, self.source)
        e = self.expr()
        if self.peek()[0] != "end":
            raise self.error(f"unexpected token {self.peek()[1]!r}")
        return e

    def expr(self):
        e = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            e = ExprTree(ADD, (e, rhs)) if op == "+" else ExprTree(SUB, (e, rhs))
        return e

    def term(self):
        e = self.unary()
        while self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            rhs = self.unary()
            e = ExprTree(MUL, (e, rhs)) if op == "*" else ExprTree(DIV, (e, rhs))
        return e

    def unary(self):
        tok = self.peek()
        if tok[1] == "-":
            self.take()
            return ExprTree(NEG, (self.unary(),))
        if tok[1] == "+":
            self.take()
            return self.unary()
        return self.pow_()

    def pow_(self):
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            k = self.exponent()
            if k < 0:
                return ExprTree(DIV, (const(1), ExprTree(POW, (base,), -k)))
            return ExprTree(POW, (base,), k)
        return base

    def exponent(self) -> int:
        paren = self.peek()[1] == "("
        if paren:
            self.take()
        sign = 1
        if self.peek()[1] == "-":
            self.take()
            sign = -1
        tok = self.take()
        if tok[0] != "num" or not tok[1].isdigit():
            raise self.error("exponent must be an integer", tok)
        if paren:
            self.expect(")")
        return sign * int(tok[1])

    def atom(self):
        tok = self.take()
        kind, text, pos = tok
        if kind == "num":
            value = Fraction(text)
            if self.peek()[0] == "imag":
                self.take()
                return const(CRational(Fraction(0), value))
            return const(value)
        if kind == "imag":
            return const(CRational(Fraction(0), Fraction(1)))
        if kind == "var":
            idx = int(text[1:])
            if not 1 <= idx <= self.dim:
                raise ParseError(
                    f"variable {text} out of range for dimension {self.dim}", pos, self.source)
            return zvar(idx) if text[0] == "z" else wvar(idx)
        if text == "(":
            e = self.expr()
            self.expect(")")
            return e
        raise self.error(
            f"unexpected token {text!r}" if text else "unexpected end of input", tok)


def parse(source: str, dim: int, *, raw: bool = False) -> ExprTree:
    """Parse ``source`` into a normalized tree over ``dim`` coordinates.

    With ``raw=True`` the literal parse tree (with ``sub``/``neg`` nodes) is
    returned instead.
    """
    if dim < 1:
        raise ExprError("dimension must be positive")
    tree = _Parser(source, dim).parse()
    return tree if raw else normalize(tree)


# ---------------------------------------------------------- differentiation

def wirtinger_diff(e: ExprTree, index: int, kind: str = "holomorphic") -> ExprTree:
    """Exact d/dz_index (``holomorphic``) or d/dw_index (``antiholomorphic``)."""
    if kind in ("holomorphic", "z"):
        var = ZVAR
    elif kind in ("antiholomorphic", "w", "conj"):
        var = WVAR
    else:
        raise ExprError(f"unknown derivative kind {kind!r}")
    return _diff(e, var, int(index))


@lru_cache(maxsize=200_000)
def _diff(e: ExprTree, var: str, i: int) -> ExprTree:
    k = e.kind
    if k == CONST:
        return _ZERO_T
    if k in (ZVAR, WVAR):
        return _ONE_T if (k == var and e.value == i) else _ZERO_T
    if k == ADD:
        return add(*(_diff(a, var, i) for a in e.args))
    if k == SUB:
        return sub(_diff(e.args[0], var, i), _diff(e.args[1], var, i))
    if k == NEG:
        return neg(_diff(e.args[0], var, i))
    if k == MUL:
        terms = []
        for j, a in enumerate(e.args):
            da = _diff(a, var, i)
            if da.kind == CONST and da.value == ZERO:
                continue
            terms.append(mul(*(e.args[:j] + (da,) + e.args[j + 1:])))
        return add(*terms)
    if k == DIV:
        u, v = e.args
        du, dv = _diff(u, var, i), _diff(v, var, i)
        first = div(du, v)
        if dv.kind == CONST and dv.value == ZERO:
            return first
        return sub(first, div(mul(u, dv), power(v, 2)))
    if k == POW:
        b = e.args[0]
        db = _diff(b, var, i)
        return mul(const(e.value), power(b, e.value - 1), db)
    raise ExprError(f"unknown node kind {k}")  # pragma: no cover


def conj_swap(e: ExprTree) -> ExprTree:
    """Swap ``z_i <-> w_i`` and conjugate constants: the tree of ``conj(e)``."""
    k = e.kind
    if k == CONST:
        return const(e.value.conjugate())
    if k == ZVAR:
        return wvar(e.value)
    if k == WVAR:
        return zvar(e.value)
    args = [conj_swap(a) for a in e.args]
    if k == POW:
        return power(args[0], e.value)
    return normalize(ExprTree(k, tuple(args), e.value))


# -------------------------------------------------------------- evaluation

def _emit(e: ExprTree) -> str:
    k = e.kind
    if k == CONST:
        return repr(complex(e.value))
    if k == ZVAR:
        return f"z[{e.value - 1}]"
    if k == WVAR:
        return f"w[{e.value - 1}]"
    if k in (ADD,):
        return "(" + "+".join(_emit(a) for a in e.args) + ")"
    if k == SUB:
        return f"({_emit(e.args[0])}-{_emit(e.args[1])})"
    if k == MUL:
        return "(" + "*".join(_emit(a) for a in e.args) + ")"
    if k == DIV:
        return f"_div({_emit(e.args[0])},{_emit(e.args[1])})"
    if k == NEG:
        return f"(-{_emit(e.args[0])})"
    if k == POW:
        return f"({_emit(e.args[0])}**{e.value})"
    raise ExprError(f"unknown node kind {k}")  # pragma: no cover


def _safe_div(a, b):
    if b == 0:
        raise EvaluationError("division by zero at evaluation point")
    return a / b


@lru_cache(maxsize=50_000)
def compile_expr(e: ExprTree) -> Callable[[Sequence[complex], Sequence[complex]], complex]:
    """Compile ``e`` to a Python callable ``f(z, w)``."""
    code = compile(f"lambda z, w: {_emit(e)}", "<expr>", "eval")
    return eval(code, {"_div": _safe_div})


def _is_exact(x) -> bool:
    return isinstance(x, (int, Fraction, CRational)) and not isinstance(x, bool)


def evaluate(e: ExprTree, point: Sequence) -> complex:
    """Evaluate at ``point`` (length ``n``) with ``w_i`` bound to ``conj(z_i)``.

    Rational points take an exact path and are rounded once at the end.
    """
    if point and all(_is_exact(x) for x in point):
        return complex(evaluate_exact(e, point))
    z = [complex(x) for x in point]
    if e.max_index() > len(z):
        raise ExprError(f"point has dimension {len(z)}, expression needs {e.max_index()}")
    w = [x.conjugate() for x in z]
    return complex(compile_expr(e)(z, w))


def evaluate_exact(e: ExprTree, point: Sequence) -> CRational:
    """Exact evaluation at a point with complex-rational coordinates."""
    z = [CRational.of(x) for x in point]
    if e.max_index() > len(z):
        raise ExprError(f"point has dimension {len(z)}, expression needs {e.max_index()}")
    w = [x.conjugate() for x in z]
    return _eval_exact(e, z, w)


def _eval_exact(e, z, w) -> CRational:
    k = e.kind
    if k == CONST:
        return e.value
    if k == ZVAR:
        return z[e.value - 1]
    if k == WVAR:
        return w[e.value - 1]
    vals = [_eval_exact(a, z, w) for a in e.args]
    if k == ADD:
        out = ZERO
        for v in vals:
            out = out + v
        return out
    if k == SUB:
        return vals[0] - vals[1]
    if k == MUL:
        out = ONE
        for v in vals:
            out = out * v
        return out
    if k == DIV:
        if vals[1] == ZERO:
            raise EvaluationError("division by zero at evaluation point")
        return vals[0] / vals[1]
    if k == NEG:
        return -vals[0]
    if k == POW:
        return vals[0] ** e.value
    raise ExprError(f"unknown node kind {k}")  # pragma: no cover


def variables(e: ExprTree) -> set[tuple[str, int]]:
    if e.kind in (ZVAR, WVAR):
        return {(e.kind, e.value)}
    out: set = set()
    for a in e.args:
        out |= variables(a)
    return out


def as_tree(x, dim: int) -> ExprTree:
    """Accept a tree, a string, or a number."""
    if isinstance(x, ExprTree):
        return x
    if isinstance(x, str):
        return parse(x, dim)
    return const(x)


def sum_of(terms: Iterable[ExprTree]) -> ExprTree:
    return add(*terms)
