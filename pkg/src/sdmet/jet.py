"""Truncated second-order Taylor arithmetic (forward-mode jets).

A :class:`Jet` carries a value together with its gradient and Hessian with
respect to ``dim`` independent variables. Arithmetic propagates all three
exactly (up to rounding), so any closed-form expression written with the
operators below and the module-level functions (:func:`sqrt`, :func:`exp`, ...)
yields exact first and second partial derivatives.

The module-level functions dispatch on their argument, so the same closed form
can be evaluated on plain floats, numpy arrays or jets.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np


class Jet:
    """Value, gradient and Hessian of a scalar with respect to ``dim`` inputs."""

    __slots__ = ("value", "grad", "hess")
    # make numpy scalars defer to the reflected operators below
    __array_ufunc__ = None

    def __init__(self, value: float, grad: np.ndarray, hess: np.ndarray):
        self.value = float(value)
        self.grad = grad
        self.hess = hess

    @classmethod
    def variable(cls, value: float, index: int, dim: int) -> "Jet":
        grad = np.zeros(dim)
        grad[index] = 1.0
        return cls(value, grad, np.zeros((dim, dim)))

    @classmethod
    def constant(cls, value: float, dim: int) -> "Jet":
        return cls(value, np.zeros(dim), np.zeros((dim, dim)))

    @property
    def dim(self) -> int:
        return self.grad.shape[0]

    def __repr__(self) -> str:
        return f"Jet(value={self.value!r}, grad={self.grad.tolist()!r})"

    # -- chain rule for a scalar function with known first/second derivative
    def _apply(self, f0: float, f1: float, f2: float) -> "Jet":
        g = self.grad
        return Jet(f0, f1 * g, f1 * self.hess + f2 * np.outer(g, g))

    def __neg__(self) -> "Jet":
        return Jet(-self.value, -self.grad, -self.hess)

    def __pos__(self) -> "Jet":
        return self

    def __add__(self, other) -> "Jet":
        if isinstance(other, Jet):
            return Jet(self.value + other.value, self.grad + other.grad, self.hess + other.hess)
        return Jet(self.value + other, self.grad, self.hess)

    __radd__ = __add__

    def __sub__(self, other) -> "Jet":
        if isinstance(other, Jet):
            return Jet(self.value - other.value, self.grad - other.grad, self.hess - other.hess)
        return Jet(self.value - other, self.grad, self.hess)

    def __rsub__(self, other) -> "Jet":
        return Jet(other - self.value, -self.grad, -self.hess)

    def __mul__(self, other) -> "Jet":
        if isinstance(other, Jet):
            a, b = self.value, other.value
            ga, gb = self.grad, other.grad
            cross = np.outer(ga, gb)
            return Jet(a * b, a * gb + b * ga, a * other.hess + b * self.hess + cross + cross.T)
        return Jet(self.value * other, self.grad * other, self.hess * other)

    __rmul__ = __mul__

    def reciprocal(self) -> "Jet":
        v = self.value
        if v == 0.0:
            raise ZeroDivisionError("jet reciprocal of zero value")
        inv = 1.0 / v
        return self._apply(inv, -inv * inv, 2.0 * inv * inv * inv)

    def __truediv__(self, other) -> "Jet":
        if isinstance(other, Jet):
            return self * other.reciprocal()
        return Jet(self.value / other, self.grad / other, self.hess / other)

    def __rtruediv__(self, other) -> "Jet":
        return self.reciprocal() * other

    def __pow__(self, exponent) -> "Jet":
        if isinstance(exponent, Jet):
            return exp(exponent * log(self))
        if isinstance(exponent, int) and exponent >= 0:
            if exponent == 0:
                return Jet.constant(1.0, self.dim)
            result = self
            for _ in range(exponent - 1):
                result = result * self
            return result
        p = float(exponent)
        v = self.value
        return self._apply(v**p, p * v ** (p - 1.0), p * (p - 1.0) * v ** (p - 2.0))

    def sqrt(self) -> "Jet":
        s = math.sqrt(self.value)
        if s == 0.0:
            raise ZeroDivisionError("jet sqrt is not differentiable at 0")
        return self._apply(s, 0.5 / s, -0.25 / (s * self.value))

    def exp(self) -> "Jet":
        e = math.exp(self.value)
        return self._apply(e, e, e)

    def log(self) -> "Jet":
        v = self.value
        return self._apply(math.log(v), 1.0 / v, -1.0 / (v * v))

    def sin(self) -> "Jet":
        s, c = math.sin(self.value), math.cos(self.value)
        return self._apply(s, c, -s)

    def cos(self) -> "Jet":
        s, c = math.sin(self.value), math.cos(self.value)
        return self._apply(c, -s, -c)


def _dispatch(name: str, npfunc: Callable):
    def f(x):
        if isinstance(x, Jet):
            return getattr(x, name)()
        return npfunc(x)

    f.__name__ = name
    f.__doc__ = f"``{name}`` of a float, array or :class:`Jet`."
    return f


sqrt = _dispatch("sqrt", np.sqrt)
exp = _dispatch("exp", np.exp)
log = _dispatch("log", np.log)
sin = _dispatch("sin", np.sin)
cos = _dispatch("cos", np.cos)


def value_of(x):
    """Plain value of ``x`` (strips derivative parts from a jet)."""
    return x.value if isinstance(x, Jet) else x


def seed(values, order: int = 2) -> list:
    """Independent variables at ``values``; plain floats when ``order`` is 0."""
    values = [float(v) for v in values]
    if order == 0:
        return values
    dim = len(values)
    return [Jet.variable(v, i, dim) for i, v in enumerate(values)]


def lift(x, dim: int) -> Jet:
    """Promote a constant to a jet (identity on jets)."""
    return x if isinstance(x, Jet) else Jet.constant(x, dim)


def stack(entries, dim: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Split an array-like of jets/constants into value, gradient and Hessian arrays.

    Returns arrays of shape ``S``, ``S + (dim,)`` and ``S + (dim, dim)`` where
    ``S`` is the shape of ``entries``.
    """
    obj = np.empty(np.shape(entries), dtype=object)
    obj[...] = entries
    shape = obj.shape
    val = np.zeros(shape)
    grad = np.zeros(shape + (dim,))
    hess = np.zeros(shape + (dim, dim))
    for idx in np.ndindex(shape):
        e = obj[idx]
        if isinstance(e, Jet):
            val[idx] = e.value
            grad[idx] = e.grad
            hess[idx] = e.hess
        else:
            val[idx] = e
    return val, grad, hess
