"""Order-3 truncated Taylor arithmetic over a small number of chart variables.

A Jet3 carries the value, gradient, Hessian and (optionally) the symmetric
third-derivative tensor of a scalar quantity.  Arithmetic implements the
exact sum/product/chain rules, so derivatives of expression trees are exact
up to rounding.  A central finite-difference oracle is provided as an
independent cross-check.
"""
from __future__ import annotations

import math
from itertools import combinations_with_replacement, permutations

import numpy as np

from .errors import DomainError, InputError

MAX_VARS = 6
DIV_EPS = 1e-12


def _sym2(h: np.ndarray) -> np.ndarray:
    """Copy the upper triangle onto the lower one (canonical storage)."""
    m = h.shape[0]
    out = np.empty_like(h)
    for i in range(m):
        for j in range(i, m):
            out[i, j] = out[j, i] = h[i, j]
    return out


def _sym3(t: np.ndarray) -> np.ndarray:
    """Broadcast each sorted-index entry to all index permutations."""
    m = t.shape[0]
    out = np.empty_like(t)
    for i, j, k in combinations_with_replacement(range(m), 3):
        v = t[i, j, k]
        for p in set(permutations((i, j, k))):
            out[p] = v
    return out


class Jet3:
    """Truncated Taylor expansion: value, grad (m,), hess (m,m), third (m,m,m).

    `third` is None when the jet was built at order 2.
    """

    __slots__ = ("value", "grad", "hess", "third")

    def __init__(self, value, grad, hess, third=None):
        self.value = float(value)
        self.grad = np.asarray(grad, dtype=float)
        self.hess = np.asarray(hess, dtype=float)
        self.third = None if third is None else np.asarray(third, dtype=float)

    @property
    def nvars(self) -> int:
        return self.grad.shape[0]

    @property
    def order(self) -> int:
        return 2 if self.third is None else 3

    @classmethod
    def constant(cls, c: float, m: int, order: int = 3) -> "Jet3":
        third = np.zeros((m, m, m)) if order == 3 else None
        return cls(c, np.zeros(m), np.zeros((m, m)), third)

    @classmethod
    def variable(cls, index: int, value: float, m: int, order: int = 3) -> "Jet3":
        g = np.zeros(m)
        g[index] = 1.0
        third = np.zeros((m, m, m)) if order == 3 else None
        return cls(value, g, np.zeros((m, m)), third)

    def _coerce(self, other) -> "Jet3":
        if isinstance(other, Jet3):
            return other
        return Jet3.constant(float(other), self.nvars, self.order)

    def __add__(self, other):
        o = self._coerce(other)
        third = None if self.third is None else self.third + o.third
        return Jet3(self.value + o.value, self.grad + o.grad,
                    self.hess + o.hess, third)

    __radd__ = __add__

    def __neg__(self):
        third = None if self.third is None else -self.third
        return Jet3(-self.value, -self.grad, -self.hess, third)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + self._coerce(other)

    def __mul__(self, other):
        o = self._coerce(other)
        value = self.value * o.value
        grad = self.value * o.grad + o.value * self.grad
        hess = _sym2(self.value * o.hess + o.value * self.hess
                     + np.outer(self.grad, o.grad) + np.outer(o.grad, self.grad))
        third = None
        if self.third is not None:
            def mixed(h, g):
                # H_ij g_k + H_jk g_i + H_ik g_j
                t = np.multiply.outer(h, g)
                return t + np.transpose(t, (2, 0, 1)) + np.transpose(t, (0, 2, 1))
            third = _sym3(self.value * o.third + o.value * self.third
                          + mixed(self.hess, o.grad) + mixed(o.hess, self.grad))
        return Jet3(value, grad, hess, third)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        return self * o._reciprocal()

    def __rtruediv__(self, other):
        return self._coerce(other) * self._reciprocal()

    def _reciprocal(self):
        t = self.value
        if abs(t) <= DIV_EPS:
            raise DomainError(f"division by value {t!r} within 1e-12 of zero")
        return self.apply(1.0 / t, -1.0 / t**2, 2.0 / t**3, -6.0 / t**4)

    def apply(self, d0, d1, d2, d3) -> "Jet3":
        """Chain rule for a scalar function with derivatives d0..d3 at value."""
        g = self.grad
        grad = d1 * g
        hess = _sym2(d2 * np.outer(g, g) + d1 * self.hess)
        third = None
        if self.third is not None:
            gg = np.outer(g, g)
            t1 = d3 * np.multiply.outer(gg, g)
            t2 = np.multiply.outer(self.hess, g)
            t2 = t2 + np.transpose(t2, (2, 0, 1)) + np.transpose(t2, (0, 2, 1))
            third = _sym3(t1 + d2 * t2 + d1 * self.third)
        return Jet3(d0, grad, hess, third)


# ---------------------------------------------------------------------------
# Expression trees
# ---------------------------------------------------------------------------

class Expr:
    """Immutable expression tree over chart variables u_0..u_{m-1}."""

    def jet(self, var_jets: list[Jet3]) -> Jet3:
        raise NotImplementedError

    def value_at(self, point: np.ndarray) -> float:
        raise NotImplementedError

    def substitute(self, replacements: list["Expr"]) -> "Expr":
        """Replace Var(i) by replacements[i], returning a new tree."""
        raise NotImplementedError

    def __add__(self, other):
        return Add(self, as_expr(other))

    def __radd__(self, other):
        return Add(as_expr(other), self)

    def __sub__(self, other):
        return Sub(self, as_expr(other))

    def __rsub__(self, other):
        return Sub(as_expr(other), self)

    def __mul__(self, other):
        return Mul(self, as_expr(other))

    def __rmul__(self, other):
        return Mul(as_expr(other), self)

    def __truediv__(self, other):
        return Div(self, as_expr(other))

    def __rtruediv__(self, other):
        return Div(as_expr(other), self)

    def __neg__(self):
        return Mul(Const(-1.0), self)


def as_expr(x) -> Expr:
    if isinstance(x, Expr):
        return x
    return Const(float(x))


class Const(Expr):
    def __init__(self, value: float):
        self.value = float(value)

    def jet(self, var_jets):
        probe = var_jets[0] if var_jets else None
        m = probe.nvars if probe else 0
        order = probe.order if probe else 3
        return Jet3.constant(self.value, m, order)

    def value_at(self, point):
        return self.value

    def substitute(self, replacements):
        return self


class Var(Expr):
    def __init__(self, index: int):
        self.index = index

    def jet(self, var_jets):
        return var_jets[self.index]

    def value_at(self, point):
        return float(point[self.index])

    def substitute(self, replacements):
        return replacements[self.index]


class _Binary(Expr):
    def __init__(self, left: Expr, right: Expr):
        self.left = left
        self.right = right

    def substitute(self, replacements):
        return type(self)(self.left.substitute(replacements),
                          self.right.substitute(replacements))


class Add(_Binary):
    def jet(self, var_jets):
        return self.left.jet(var_jets) + self.right.jet(var_jets)

    def value_at(self, point):
        return self.left.value_at(point) + self.right.value_at(point)


class Sub(_Binary):
    def jet(self, var_jets):
        return self.left.jet(var_jets) - self.right.jet(var_jets)

    def value_at(self, point):
        return self.left.value_at(point) - self.right.value_at(point)


class Mul(_Binary):
    def jet(self, var_jets):
        return self.left.jet(var_jets) * self.right.jet(var_jets)

    def value_at(self, point):
        return self.left.value_at(point) * self.right.value_at(point)


class Div(_Binary):
    def jet(self, var_jets):
        return self.left.jet(var_jets) / self.right.jet(var_jets)

    def value_at(self, point):
        den = self.right.value_at(point)
        if abs(den) <= DIV_EPS:
            raise DomainError(f"division by value {den!r} within 1e-12 of zero")
        return self.left.value_at(point) / den


def _sqrt_derivs(t):
    if t <= 0.0:
        raise DomainError(f"sqrt argument {t!r} is not strictly positive")
    s = math.sqrt(t)
    return s, 0.5 / s, -0.25 / (s * t), 0.375 / (s * t * t)


_FUNCS = {
    "sqrt": _sqrt_derivs,
    "sin": lambda t: (math.sin(t), math.cos(t), -math.sin(t), -math.cos(t)),
    "cos": lambda t: (math.cos(t), -math.sin(t), -math.cos(t), math.sin(t)),
    "sinh": lambda t: (math.sinh(t), math.cosh(t), math.sinh(t), math.cosh(t)),
    "cosh": lambda t: (math.cosh(t), math.sinh(t), math.cosh(t), math.sinh(t)),
}


class Func(Expr):
    def __init__(self, name: str, arg: Expr):
        if name not in _FUNCS:
            raise InputError(f"unknown function {name!r}")
        self.name = name
        self.arg = arg

    def jet(self, var_jets):
        inner = self.arg.jet(var_jets)
        return inner.apply(*_FUNCS[self.name](inner.value))

    def value_at(self, point):
        return _FUNCS[self.name](self.arg.value_at(point))[0]

    def substitute(self, replacements):
        return Func(self.name, self.arg.substitute(replacements))


def sqrt(x) -> Expr:
    return Func("sqrt", as_expr(x))


def sin(x) -> Expr:
    return Func("sin", as_expr(x))


def cos(x) -> Expr:
    return Func("cos", as_expr(x))


def sinh(x) -> Expr:
    return Func("sinh", as_expr(x))


def cosh(x) -> Expr:
    return Func("cosh", as_expr(x))


def variables(n: int) -> list[Var]:
    return [Var(i) for i in range(n)]


def indefinite_square(exprs: list[Expr], neg: int) -> Expr:
    """-sum of first `neg` squares + sum of the rest."""
    acc: Expr = Const(0.0)
    for i, e in enumerate(exprs):
        term = e * e
        acc = acc - term if i < neg else acc + term
    return acc


def evaluate(exprs, point, order: int = 3,
             max_vars: int = MAX_VARS) -> list[Jet3]:
    """Jets of one or several expressions at a point.

    Derivatives are exact Taylor arithmetic, no truncation error.  Raises
    DomainError naming the offending output coordinate when the point falls
    outside an expression's domain.
    """
    single = isinstance(exprs, Expr)
    expr_list = [exprs] if single else list(exprs)
    point = np.asarray(point, dtype=float)
    m = point.shape[0]
    if m > max_vars:
        raise InputError(f"{m} chart variables exceeds the cap of {max_vars}")
    if order not in (2, 3):
        raise InputError("order must be 2 or 3")
    var_jets = [Jet3.variable(i, point[i], m, order) for i in range(m)]
    out = []
    for k, e in enumerate(expr_list):
        try:
            out.append(e.jet(var_jets))
        except DomainError as err:
            raise DomainError(f"coordinate {k}: {err}") from err
    return out[0] if single else out


# ---------------------------------------------------------------------------
# Finite-difference oracle
# ---------------------------------------------------------------------------

def fd_oracle(expr: Expr, point, step: float = 1e-4) -> Jet3:
    """Central finite-difference jet: O(step^2) truncation on every entry.

    Independent of the Taylor path; exists purely as a cross-check oracle.
    """
    point = np.asarray(point, dtype=float)
    m = point.shape[0]

    def f(p):
        return expr.value_at(p)

    def shift(p, i, d):
        q = p.copy()
        q[i] += d
        return q

    h = step
    value = f(point)
    grad = np.zeros(m)
    for i in range(m):
        grad[i] = (f(shift(point, i, h)) - f(shift(point, i, -h))) / (2 * h)

    def fd_hess(p):
        out = np.zeros((m, m))
        f0 = f(p)
        for i in range(m):
            out[i, i] = (f(shift(p, i, h)) - 2 * f0 + f(shift(p, i, -h))) / h**2
            for j in range(i + 1, m):
                v = (f(shift(shift(p, i, h), j, h))
                     - f(shift(shift(p, i, h), j, -h))
                     - f(shift(shift(p, i, -h), j, h))
                     + f(shift(shift(p, i, -h), j, -h))) / (4 * h**2)
                out[i, j] = out[j, i] = v
        return out

    hess = fd_hess(point)
    third = np.zeros((m, m, m))
    for i in range(m):
        hp = fd_hess(shift(point, i, h))
        hm = fd_hess(shift(point, i, -h))
        d = (hp - hm) / (2 * h)
        for j, k in combinations_with_replacement(range(m), 2):
            if i <= j:
                third[i, j, k] = d[j, k]
    third = _sym3(third)
    return Jet3(value, grad, hess, third)
