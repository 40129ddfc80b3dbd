"""Tests for the order-3 Taylor arithmetic and its finite-difference oracle."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from umbilic import jets as J
from umbilic.errors import DomainError, InputError

finite = st.floats(-2.0, 2.0, allow_nan=False)


def _poly(u, v):
    # an asymmetric polynomial whose derivatives are easy to write down
    return u * u * v + 3.0 * v - u * v * v * v


def _poly_derivs(x, y):
    grad = np.array([2 * x * y - y**3, x * x + 3.0 - 3 * x * y * y])
    hess = np.array([[2 * y, 2 * x - 3 * y * y],
                     [2 * x - 3 * y * y, -6 * x * y]])
    third = np.zeros((2, 2, 2))
    third[0, 0, 1] = third[0, 1, 0] = third[1, 0, 0] = 2.0
    third[0, 1, 1] = third[1, 0, 1] = third[1, 1, 0] = -6 * y
    third[1, 1, 1] = -6 * x
    return grad, hess, third


class TestJetArithmetic:
    def test_polynomial_derivatives_exact(self):
        u, v = J.variables(2)
        jet = J.evaluate(_poly(u, v), [0.7, -0.4])
        grad, hess, third = _poly_derivs(0.7, -0.4)
        np.testing.assert_allclose(jet.grad, grad, atol=1e-14)
        np.testing.assert_allclose(jet.hess, hess, atol=1e-14)
        np.testing.assert_allclose(jet.third, third, atol=1e-14)

    def test_symmetry_is_exact(self):
        # canonical storage: permuted index reads are bit-identical
        u, v, w = J.variables(3)
        e = J.sqrt(1.0 + u * v * w + u * u) * J.sin(v + 2.0 * w)
        jet = J.evaluate(e, [0.3, -0.2, 0.15])
        assert np.array_equal(jet.hess, jet.hess.T)
        for perm in [(0, 2, 1), (1, 0, 2), (2, 1, 0), (1, 2, 0), (2, 0, 1)]:
            assert np.array_equal(jet.third, np.transpose(jet.third, perm))

    def test_quotient_rule(self):
        u, v = J.variables(2)
        f, g = u * u + 1.0, v + 2.0
        prod = J.evaluate((f / g) * g, [0.5, 0.25])
        direct = J.evaluate(f, [0.5, 0.25])
        np.testing.assert_allclose(prod.grad, direct.grad, atol=1e-12)
        np.testing.assert_allclose(prod.third, direct.third, atol=1e-12)

    def test_order2_has_no_third(self):
        u, = J.variables(1)
        jet = J.evaluate(u * u, [1.0], order=2)
        assert jet.third is None
        assert jet.order == 2

    @given(finite, finite, finite, finite)
    @settings(max_examples=50, deadline=None)
    def test_product_rule_consistency(self, a, b, x, y):
        # d(fg) computed by jet multiply equals the expanded polynomial
        u, v = J.variables(2)
        f = u + a
        g = v * v + b * u
        lhs = J.evaluate(f * g, [x, y])
        rhs = J.evaluate(u * v * v + b * u * u + a * v * v + (a * b) * u,
                         [x, y])
        np.testing.assert_allclose(lhs.grad, rhs.grad, atol=1e-9)
        np.testing.assert_allclose(lhs.hess, rhs.hess, atol=1e-9)
        np.testing.assert_allclose(lhs.third, rhs.third, atol=1e-9)


class TestChainRule:
    def test_substitution_agrees_with_direct_evaluation(self):
        # evaluating f(g(u)) as one tree equals composing the displays
        u, v = J.variables(2)
        inner = [u * v + 1.5, u - v]
        outer_var = J.variables(2)
        outer = J.sqrt(outer_var[0]) * J.cos(outer_var[1])
        composed = outer.substitute(inner)
        pt = [0.4, -0.3]
        jet = J.evaluate(composed, pt)
        fd = J.fd_oracle(composed, pt, 1e-3)
        np.testing.assert_allclose(jet.grad, fd.grad, atol=1e-6)
        np.testing.assert_allclose(jet.hess, fd.hess, atol=1e-6)
        np.testing.assert_allclose(jet.third, fd.third, atol=1e-4)

    def test_known_transcendental_thirds(self):
        u, v = J.variables(2)
        jet = J.evaluate(J.sin(u * v), [0.2, -0.3])
        x, y = 0.2, -0.3
        c, s = math.cos(x * y), math.sin(x * y)
        assert jet.third[0, 0, 0] == pytest.approx(-y**3 * c, abs=1e-14)
        assert jet.third[0, 0, 1] == pytest.approx(-2 * y * s - x * y * y * c,
                                                   abs=1e-14)
        assert jet.third[0, 1, 1] == pytest.approx(-2 * x * s - x * x * y * c,
                                                   abs=1e-14)

    def test_hyperbolic_functions(self):
        t, = J.variables(1)
        jet = J.evaluate(J.cosh(t) * J.cosh(t) - J.sinh(t) * J.sinh(t), [0.8])
        assert jet.value == pytest.approx(1.0)
        np.testing.assert_allclose(jet.grad, 0.0, atol=1e-14)
        np.testing.assert_allclose(jet.third, 0.0, atol=1e-13)


class TestDomainHandling:
    def test_sqrt_at_zero_rejected(self):
        u, = J.variables(1)
        with pytest.raises(DomainError):
            J.evaluate(J.sqrt(u), [0.0])

    def test_division_near_zero_rejected(self):
        u, = J.variables(1)
        with pytest.raises(DomainError):
            J.evaluate(1.0 / u, [1e-13])

    def test_error_names_the_coordinate(self):
        u, = J.variables(1)
        exprs = [u, J.sqrt(u - 2.0)]
        with pytest.raises(DomainError, match="coordinate 1"):
            J.evaluate(exprs, [1.0])

    def test_variable_cap(self):
        with pytest.raises(InputError):
            J.evaluate(J.Const(1.0), np.zeros(J.MAX_VARS + 1))

    def test_bad_order(self):
        u, = J.variables(1)
        with pytest.raises(InputError):
            J.evaluate(u, [0.0], order=4)


class TestFiniteDifferenceOracle:
    def test_agreement_on_transcendental(self):
        u, v = J.variables(2)
        e = J.sqrt(2.0 - u * u - v * v) * J.sin(u + 0.5 * v)
        pt = [0.3, -0.5]
        jet = J.evaluate(e, pt)
        fd = J.fd_oracle(e, pt, 1e-4)
        assert np.max(np.abs(jet.grad - fd.grad)) < 1e-5
        assert np.max(np.abs(jet.hess - fd.hess)) < 1e-5

    def test_richardson_ratio(self):
        # halving the step divides the truncation error by ~4
        u, v = J.variables(2)
        e = J.sin(2.0 * u) * J.sqrt(1.5 + v)
        pt = [0.4, 0.1]
        jet = J.evaluate(e, pt)
        err = []
        for h in (1e-2, 5e-3):
            fd = J.fd_oracle(e, pt, h)
            err.append(np.max(np.abs(fd.hess - jet.hess)))
        assert 3.5 <= err[0] / err[1] <= 4.5

    def test_third_is_symmetric(self):
        u, v, w = J.variables(3)
        fd = J.fd_oracle(u * v * w + J.cos(u * w), [0.2, 0.3, -0.1], 1e-3)
        for perm in [(1, 0, 2), (0, 2, 1), (2, 1, 0)]:
            assert np.array_equal(fd.third, np.transpose(fd.third, perm))
