"""Truncated power series with complex coefficients.

A :class:`TruncatedSeries` of order ``N`` stores ``c_0 .. c_N`` and stands for an
analytic germ at the origin known modulo ``z**(N+1)``.  Every operation here is
exact in that quotient ring: coefficients beyond index ``N`` are never read or
invented.

    >>> z = TruncatedSeries.variable(3)
    >>> (1 / (1 - z)).coeffs
    array([1.+0.j, 1.+0.j, 1.+0.j, 1.+0.j])

Transcendental operations (:func:`exp`, :func:`log`, :func:`pow_real`) use the
recurrences obtained from the differential equations they satisfy, e.g.
``(exp a)' = a' exp a``.  Logarithms and real powers take the principal branch
anchored at the constant term.
"""

from __future__ import annotations

import numbers

import numpy as np

DEFAULT_ORDER = 256
R_MAX = 0.85
DIV_TOL = 1e-14


class SeriesError(ValueError):
    """Base class for errors raised by series operations."""


class OrderMismatchError(SeriesError):
    pass


class NonInvertibleError(SeriesError, ZeroDivisionError):
    pass


class SeriesDomainError(SeriesError):
    pass


class EvaluationRadiusError(SeriesError):
    """Raised when a truncated series is evaluated too close to the unit circle."""


class TruncatedSeries:
    """Complex Taylor polynomial ``c_0 + c_1 z + ... + c_N z^N`` modulo ``z^(N+1)``.

    Instances are immutable; the coefficient array is read-only.
    """

    __slots__ = ("_c",)
    # make numpy scalars defer to our reflected operators
    __array_ufunc__ = None

    def __init__(self, coeffs):
        c = np.array(coeffs, dtype=complex).reshape(-1)
        if c.size == 0:
            raise SeriesError("a series needs at least one coefficient")
        if not np.all(np.isfinite(c)):
            raise SeriesError("series coefficients must be finite")
        c.flags.writeable = False
        self._c = c

    # construction helpers

    @classmethod
    def constant(cls, value, order):
        c = np.zeros(order + 1, dtype=complex)
        c[0] = value
        return cls(c)

    @classmethod
    def zeros(cls, order):
        return cls(np.zeros(order + 1, dtype=complex))

    @classmethod
    def one(cls, order):
        return cls.constant(1.0, order)

    @classmethod
    def variable(cls, order):
        """The series ``z`` (order must be at least 1 to hold it)."""
        c = np.zeros(order + 1, dtype=complex)
        if order >= 1:
            c[1] = 1.0
        return cls(c)

    @classmethod
    def from_polynomial(cls, coeffs, order):
        """Pad or truncate a coefficient list to the given order."""
        c = np.zeros(order + 1, dtype=complex)
        src = np.asarray(coeffs, dtype=complex).reshape(-1)[: order + 1]
        c[: src.size] = src
        return cls(c)

    # basic protocol

    @property
    def coeffs(self):
        return self._c

    @property
    def order(self):
        return self._c.size - 1

    def __len__(self):
        return self._c.size

    def __getitem__(self, n):
        return self._c[n]

    def __repr__(self):
        head = ", ".join(f"{c:.6g}" for c in self._c[:6])
        more = ", ..." if self._c.size > 6 else ""
        return f"TruncatedSeries([{head}{more}], order={self.order})"

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.order == other.order and np.array_equal(self._c, other._c)

    __hash__ = None

    def truncate(self, order):
        if order > self.order:
            raise OrderMismatchError(f"cannot raise order {self.order} to {order} by truncation")
        return TruncatedSeries(self._c[: order + 1])

    def shift_up(self):
        """Multiply by ``z``; the top coefficient falls off, order is kept."""
        c = np.zeros_like(self._c)
        c[1:] = self._c[:-1]
        return TruncatedSeries(c)

    def shift_down(self, tol=1e-12):
        """Divide by ``z``; requires ``c_0 = 0`` and lowers the order by one."""
        if abs(self._c[0]) > tol:
            raise SeriesDomainError(f"constant term {self._c[0]!r} is not zero; cannot divide by z")
        if self.order == 0:
            raise SeriesDomainError("order-0 series has no information left after dividing by z")
        return TruncatedSeries(self._c[1:])

    def max_abs_diff(self, other):
        """Largest coefficient difference over the common order."""
        n = min(self.order, other.order) + 1
        return float(np.max(np.abs(self._c[:n] - other._c[:n])))

    def __call__(self, z, r_max=R_MAX):
        return evaluate(self, z, r_max=r_max)

    # arithmetic

    def _coerce(self, other):
        if isinstance(other, TruncatedSeries):
            return other
        if isinstance(other, numbers.Number):
            return TruncatedSeries.constant(other, self.order)
        return NotImplemented

    def __neg__(self):
        return TruncatedSeries(-self._c)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        _check_orders(self, other)
        return TruncatedSeries(self._c + other._c)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        _check_orders(self, other)
        return TruncatedSeries(self._c - other._c)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        if isinstance(other, numbers.Number):
            return TruncatedSeries(self._c * other)
        if isinstance(other, TruncatedSeries):
            return mul(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, numbers.Number):
            return TruncatedSeries(self._c * other)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, numbers.Number):
            return TruncatedSeries(self._c / other)
        if isinstance(other, TruncatedSeries):
            return div(self, other)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, numbers.Number):
            return div(TruncatedSeries.constant(other, self.order), self)
        return NotImplemented

    def __pow__(self, beta):
        if not isinstance(beta, numbers.Real):
            return NotImplemented
        return pow_real(self, float(beta))


def _check_orders(a, b):
    if a.order != b.order:
        raise OrderMismatchError(f"order mismatch: {a.order} vs {b.order}")


def mul(a, b):
    """Cauchy product modulo ``z^(N+1)``.

    Accumulated in extended precision: products such as ``(1-z)^(alpha+1) f'``
    cancel terms of size ``n^alpha`` down to ``O(n^-2)``.
    """
    _check_orders(a, b)
    n = a.order + 1
    ext = np.clongdouble
    return TruncatedSeries(np.convolve(a.coeffs.astype(ext), b.coeffs.astype(ext))[:n].astype(complex))


def div(a, b):
    """Quotient ``a / b``; requires ``|b_0| > 1e-14``."""
    _check_orders(a, b)
    bc = b.coeffs
    if abs(bc[0]) <= DIV_TOL:
        raise NonInvertibleError(f"divisor has vanishing constant term {bc[0]!r}")
    ac = a.coeffs
    c = np.zeros_like(ac)
    inv_b0 = 1.0 / bc[0]
    c[0] = ac[0] * inv_b0
    for n in range(1, ac.size):
        c[n] = (ac[n] - np.dot(bc[1 : n + 1], c[n - 1 :: -1])) * inv_b0
    return TruncatedSeries(c)


def exp(a):
    ac = a.coeffs
    k = np.arange(ac.size)
    ka = k * ac
    b = np.zeros_like(ac)
    b[0] = np.exp(ac[0])
    for n in range(1, ac.size):
        b[n] = np.dot(ka[1 : n + 1], b[n - 1 :: -1]) / n
    return TruncatedSeries(b)


def log(a):
    """Principal logarithm; requires ``a_0 != 0``."""
    ac = a.coeffs
    if abs(ac[0]) <= DIV_TOL:
        raise SeriesDomainError("log of a series with vanishing constant term")
    L = np.zeros_like(ac)
    L[0] = np.log(ac[0])
    kL = np.zeros_like(ac)
    inv_a0 = 1.0 / ac[0]
    for n in range(1, ac.size):
        s = np.dot(kL[1:n], ac[n - 1 : 0 : -1]) if n > 1 else 0.0
        L[n] = (ac[n] - s / n) * inv_a0
        kL[n] = n * L[n]
    return TruncatedSeries(L)


def pow_real(a, beta):
    """``a ** beta`` for real ``beta``, principal branch at the constant term.

    Uses the recurrence from ``a * (a^beta)' = beta * a' * a^beta``.
    """
    ac = a.coeffs
    if abs(ac[0]) <= DIV_TOL:
        raise SeriesDomainError("real power of a series with vanishing constant term")
    beta = float(beta)
    # the weights beta*k - (n-k) grow with n; accumulate in extended precision
    x = ac.astype(np.clongdouble)
    b = np.zeros_like(x)
    b[0] = np.exp(beta * np.log(ac[0]))
    inv_a0 = 1 / x[0]
    for n in range(1, ac.size):
        k = np.arange(1, n + 1, dtype=np.longdouble)
        w = np.longdouble(beta) * k - (n - k)
        b[n] = np.dot(w * x[1 : n + 1], b[n - 1 :: -1]) * inv_a0 / n
    return TruncatedSeries(b.astype(complex))


def binomial_coeff(beta, m):
    """Generalized binomial coefficient ``prod_{j=1}^{m} (beta - j + 1) / j``."""
    if m < 0:
        raise SeriesDomainError(f"binomial_coeff needs m >= 0, got {m}")
    value = 1.0
    for j in range(1, m + 1):
        value *= (beta - j + 1) / j
    return value


def binomial_series(beta, order, c=1.0):
    """Coefficients of ``(1 + c z) ** beta`` up to ``z^order``."""
    # the running product is formed in extended precision; in double it drifts by ~n ulps
    j = np.arange(1, order + 1, dtype=np.longdouble)
    ratios = (np.longdouble(beta) - j + 1) / j
    binoms = np.concatenate(([1.0], np.cumprod(ratios).astype(float)))
    c = complex(c)
    if abs(abs(c) - 1) < 1e-15:
        powers = np.exp(1j * np.angle(c) * np.arange(order + 1))
        if c.imag == 0:
            powers = np.sign(c.real) ** np.arange(order + 1) + 0j
    else:
        powers = np.power(c, np.arange(order + 1))
    return TruncatedSeries(binoms * powers)


def hadamard(a, b):
    """Termwise (Hadamard) product."""
    _check_orders(a, b)
    return TruncatedSeries(a.coeffs * b.coeffs)


def differentiate(a):
    """Derivative; the order drops by one (order 0 differentiates to the zero constant)."""
    ac = a.coeffs
    if ac.size == 1:
        return TruncatedSeries([0.0])
    return TruncatedSeries(ac[1:] * np.arange(1, ac.size))


def integrate_from_zero(a):
    """Antiderivative vanishing at 0, truncated back to the input order."""
    ac = a.coeffs
    c = np.zeros_like(ac)
    c[1:] = ac[:-1] / np.arange(1, ac.size)
    return TruncatedSeries(c)


def euler(a):
    """``z a'(z)`` at the same order (coefficients ``n c_n``)."""
    ac = a.coeffs
    return TruncatedSeries(ac * np.arange(ac.size))


def within_radius(z, r_max):
    """True if every ``|z| <= r_max`` up to rounding in how grids are built."""
    z = np.asarray(z)
    return z.size == 0 or float(np.max(np.abs(z))) <= r_max * (1 + 1e-12)


def evaluate(a, z, r_max=R_MAX):
    """Horner evaluation, vectorized over ``z``.

    Raises :class:`EvaluationRadiusError` if any ``|z| > r_max``; beyond that
    radius the truncation tail of the germs handled here is not negligible.
    """
    z = np.asarray(z, dtype=complex)
    if not within_radius(z, r_max):
        raise EvaluationRadiusError(
            f"|z| = {np.max(np.abs(z)):.6g} exceeds r_max = {r_max}; raise the order or shrink r"
        )
    c = a.coeffs
    if z.size <= 64:
        powers = z[..., None] ** np.arange(c.size)
        out = powers @ c
        return out if out.ndim else complex(out)
    acc = np.full(z.shape, c[-1], dtype=complex)
    for coef in c[-2::-1]:
        acc = acc * z + coef
    return acc if acc.ndim else complex(acc)
