"""Immersion charts into flat coordinate space forms.

A chart is a jet-evaluable map from an open box of chart coordinates into
the flat embedding space of an ambient space form (flat space itself, a
unit pseudo-sphere, or a unit pseudo-hyperbolic space).  Charts may be
expression-backed or compositions of other charts; composition propagates
jets with the exact third-order chain rule.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import jets as J
from .bilinear import Signature
from .errors import InputError


@dataclass(frozen=True)
class AmbientSpace:
    """A space form of curvature epsilon embedded in flat coordinates.

    epsilon: 0 for flat space, +1 for the unit pseudo-sphere, -1 for the
    unit pseudo-hyperbolic space.  `n` is the space form's dimension and
    `p` its index; `signature` describes the flat embedding space (equal
    to (p, n-p) for epsilon=0, (p, n+1-p) for +1, (p+1, n+1-p) for -1).
    """

    epsilon: int
    n: int
    p: int
    signature: Signature

    def __post_init__(self):
        if self.epsilon not in (-1, 0, 1):
            raise InputError("epsilon must be -1, 0 or +1")
        expected_dim = self.n if self.epsilon == 0 else self.n + 1
        if self.signature.dim != expected_dim or self.signature.null != 0:
            raise InputError(
                f"embedding signature {self.signature} inconsistent with "
                f"epsilon={self.epsilon}, n={self.n}")

    @property
    def flat_dim(self) -> int:
        return self.signature.dim

    def metric(self) -> np.ndarray:
        return self.signature.metric()

    @classmethod
    def flat(cls, n: int, p: int) -> "AmbientSpace":
        return cls(0, n, p, Signature(p, n - p))

    @classmethod
    def sphere(cls, n: int, p: int) -> "AmbientSpace":
        return cls(1, n, p, Signature(p, n + 1 - p))

    @classmethod
    def hyperbolic(cls, n: int, p: int) -> "AmbientSpace":
        return cls(-1, n, p, Signature(p + 1, n - p))


class ImmersionChart:
    """Base class: a map from an nvars-dimensional box into flat coordinates."""

    def __init__(self, nvars: int, ambient: AmbientSpace,
                 box: np.ndarray | None = None, name: str = ""):
        self.nvars = nvars
        self.ambient = ambient
        if box is None:
            box = np.tile([-0.5, 0.5], (nvars, 1))
        self.box = np.asarray(box, dtype=float).reshape(nvars, 2)
        self.name = name

    # -- evaluation -------------------------------------------------------
    def jet_list(self, point, order: int = 3) -> list[J.Jet3]:
        raise NotImplementedError

    def jet_arrays(self, point, order: int = 3):
        """(values (N,), jac (N,m), hess (N,m,m), third (N,m,m,m) or None)."""
        js = self.jet_list(point, order)
        val = np.array([j.value for j in js])
        jac = np.stack([j.grad for j in js])
        hess = np.stack([j.hess for j in js])
        third = None
        if order == 3:
            third = np.stack([j.third for j in js])
        return val, jac, hess, third

    def value(self, point) -> np.ndarray:
        raise NotImplementedError

    def sample_points(self, count: int, seed: int = 42) -> np.ndarray:
        """Seeded uniform draws in the chart box (rows are points)."""
        rng = np.random.default_rng(seed)
        lo, hi = self.box[:, 0], self.box[:, 1]
        return rng.uniform(lo, hi, size=(count, self.nvars))

    def sample_values(self, count: int, seed: int = 42) -> np.ndarray:
        return np.stack([self.value(p) for p in self.sample_points(count, seed)])


class ExprChart(ImmersionChart):
    """Chart backed by one expression tree per ambient coordinate."""

    def __init__(self, exprs, nvars: int, ambient: AmbientSpace,
                 box=None, name: str = ""):
        super().__init__(nvars, ambient, box, name)
        self.exprs = [J.as_expr(e) for e in exprs]
        if len(self.exprs) != ambient.flat_dim:
            raise InputError(
                f"{len(self.exprs)} coordinate expressions for flat dimension "
                f"{ambient.flat_dim}")

    def jet_list(self, point, order: int = 3):
        return J.evaluate(self.exprs, point, order, max_vars=max(J.MAX_VARS, self.nvars))

    def value(self, point):
        point = np.asarray(point, dtype=float)
        return np.array([e.value_at(point) for e in self.exprs])


class CompositeChart(ImmersionChart):
    """Pointwise composition outer(inner(u)); jets via the chain rule."""

    def __init__(self, outer: ImmersionChart, inner: ImmersionChart,
                 name: str = ""):
        if inner.ambient.flat_dim != outer.nvars:
            raise InputError(
                f"inner produces {inner.ambient.flat_dim} coordinates but the "
                f"outer chart has {outer.nvars} variables")
        super().__init__(inner.nvars, outer.ambient, inner.box,
                         name or f"{outer.name}*{inner.name}")
        self.outer = outer
        self.inner = inner

    def value(self, point):
        return self.outer.value(self.inner.value(point))

    def jet_list(self, point, order: int = 3):
        gval, gjac, ghess, gthird = self.inner.jet_arrays(point, order)
        fjets = self.outer.jet_list(gval, order)
        m = self.nvars
        out = []
        for fj in fjets:
            grad = np.einsum("a,ai->i", fj.grad, gjac)
            hess = (np.einsum("ab,ai,bj->ij", fj.hess, gjac, gjac)
                    + np.einsum("a,aij->ij", fj.grad, ghess))
            hess = J._sym2(hess)
            third = None
            if order == 3:
                t1 = np.einsum("abc,ai,bj,ck->ijk", fj.third, gjac, gjac, gjac)
                t2 = np.einsum("ab,aij,bk->ijk", fj.hess, ghess, gjac)
                t2 = (t2 + np.transpose(t2, (2, 0, 1))
                      + np.transpose(t2, (0, 2, 1)))
                t3 = np.einsum("a,aijk->ijk", fj.grad, gthird)
                third = J._sym3(t1 + t2 + t3)
            out.append(J.Jet3(fj.value, grad.reshape(m),
                              hess.reshape(m, m), third))
        return out


def compose(outer: ImmersionChart, inner: ImmersionChart) -> CompositeChart:
    """Chart composition; the inner image must stay inside the outer domain."""
    return CompositeChart(outer, inner)


def linear_chart(matrix: np.ndarray, ambient: AmbientSpace,
                 name: str = "linear") -> ExprChart:
    """Chart u -> matrix @ u (rows of `matrix` give ambient coordinates)."""
    matrix = np.asarray(matrix, dtype=float)
    nvars = matrix.shape[1]
    vs = J.variables(nvars)
    exprs = []
    for row in matrix:
        acc = J.as_expr(0.0)
        for c, v in zip(row, vs):
            if c != 0.0:
                acc = acc + J.Const(c) * v
        exprs.append(acc)
    return ExprChart(exprs, nvars, ambient, name=name)


def transform_chart(chart: ImmersionChart, matrix: np.ndarray) -> ImmersionChart:
    """Post-compose a chart with a linear map of its flat embedding space."""
    matrix = np.asarray(matrix, dtype=float)
    if matrix.shape != (chart.ambient.flat_dim,) * 2:
        raise InputError("transform matrix does not match the embedding dimension")
    if isinstance(chart, CompositeChart):
        return CompositeChart(transform_chart(chart.outer, matrix), chart.inner,
                              name=chart.name + "~L")
    new_exprs = []
    for row in matrix:
        acc = J.as_expr(0.0)
        for c, e in zip(row, chart.exprs):
            if c != 0.0:
                acc = acc + J.Const(c) * e
        new_exprs.append(acc)
    return ExprChart(new_exprs, chart.nvars, chart.ambient, chart.box,
                     name=chart.name + "~L")


def fd_jet_arrays(chart: ImmersionChart, point, step: float = 1e-4):
    """Finite-difference analogue of jet_arrays for expression-backed charts."""
    if isinstance(chart, CompositeChart):
        raise InputError("finite-difference oracle needs an expression chart")
    out = [J.fd_oracle(e, point, step) for e in chart.exprs]
    val = np.array([j.value for j in out])
    jac = np.stack([j.grad for j in out])
    hess = np.stack([j.hess for j in out])
    third = np.stack([j.third for j in out])
    return val, jac, hess, third


def ambient_residual(chart: ImmersionChart, points) -> float:
    """Max deviation of <f,f> from epsilon over the given chart points."""
    if chart.ambient.epsilon == 0:
        return 0.0
    w = chart.ambient.signature.weights()
    worst = 0.0
    for p in np.atleast_2d(points):
        y = chart.value(p)
        worst = max(worst, abs(float(np.dot(y * w, y)) - chart.ambient.epsilon))
    return worst
