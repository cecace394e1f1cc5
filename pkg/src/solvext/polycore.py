"""Dense real polynomials and the classical families behind the extended models.

Everything downstream (deforming functions, eigenpolynomials, potentials) is
assembled from four ingredients implemented here: Hermite polynomials H_n,
generalized Laguerre polynomials L_n^(a) (negative parameters included), the
real polynomial equal to H_{2m} evaluated on the imaginary axis, and the
reflected Laguerre polynomial L_n^(a)(-eta).

Coefficients are double precision. Family constructors are capped at degree
``MAX_FAMILY_DEGREE``: coefficients grow factorially with the degree, and
beyond the cap a request is rejected with a clear error instead of silently
returning garbage digits.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from numpy.polynomial import polynomial as _npoly

# Degree cap for hermite/laguerre and everything composed from them.
# Double-precision coefficients are trustworthy well past the test lattices
# used in this package (families up to degree 20, products up to degree ~31).
MAX_FAMILY_DEGREE = 30


class Polynomial:
    """Immutable dense polynomial in one real variable.

    ``coeffs[k]`` holds the coefficient of eta**k. Trailing zero coefficients
    are stripped on construction, so the coefficient at index ``degree`` is
    nonzero unless the polynomial is zero. The zero polynomial has degree -1,
    which makes degree bookkeeping (e.g. deg(p*q) = deg p + deg q) fail loudly
    rather than silently when a zero operand sneaks in.
    """

    __slots__ = ("_coeffs", "_rev")

    def __init__(self, coeffs):
        arr = np.atleast_1d(np.asarray(coeffs, dtype=float))
        if arr.ndim != 1:
            raise ValueError("coefficients must be one-dimensional")
        if arr.size and not np.all(np.isfinite(arr)):
            raise ValueError("non-finite coefficient")
        nz = np.nonzero(arr)[0]
        arr = arr[: nz[-1] + 1].copy() if nz.size else np.empty(0)
        arr.setflags(write=False)
        self._coeffs = arr
        self._rev = tuple(arr.tolist())[::-1]  # for the scalar Horner fast path

    @property
    def coeffs(self) -> np.ndarray:
        """Read-only coefficient array, low order first (empty for zero)."""
        return self._coeffs

    @property
    def degree(self) -> int:
        return self._coeffs.size - 1

    def is_zero(self) -> bool:
        return self._coeffs.size == 0

    def __call__(self, t):
        """Evaluate at ``t`` (scalar or ndarray) by Horner's scheme."""
        if isinstance(t, float) or isinstance(t, (int, np.floating, np.integer)):
            t = float(t)
            if not math.isfinite(t):
                raise ValueError("polynomial argument must be finite")
            acc = 0.0
            for c in self._rev:
                acc = acc * t + c
            return acc
        t = np.asarray(t, dtype=float)
        if not np.all(np.isfinite(t)):
            raise ValueError("polynomial argument must be finite")
        if self.is_zero():
            out = np.zeros_like(t)
        else:
            out = _npoly.polyval(t, self._coeffs)
        return out if out.ndim else float(out)

    def deriv(self) -> "Polynomial":
        if self.degree < 1:
            return Polynomial([0.0])
        return Polynomial(_npoly.polyder(self._coeffs))

    def max_abs_coeff(self) -> float:
        return float(np.max(np.abs(self._coeffs))) if self._coeffs.size else 0.0

    def _as_array(self, other):
        if isinstance(other, Polynomial):
            return other._coeffs
        raise TypeError(f"expected Polynomial, got {type(other).__name__}")

    def __add__(self, other):
        a, b = self._coeffs, self._as_array(other)
        if not a.size:
            return Polynomial(b)
        if not b.size:
            return Polynomial(a)
        return Polynomial(_npoly.polyadd(a, b))

    def __sub__(self, other):
        a, b = self._coeffs, self._as_array(other)
        if not b.size:
            return Polynomial(a)
        if not a.size:
            return Polynomial(-b)
        return Polynomial(_npoly.polysub(a, b))

    def __neg__(self):
        return Polynomial(-self._coeffs) if self._coeffs.size else Polynomial([0.0])

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            if not self._coeffs.size:
                return Polynomial([0.0])
            return Polynomial(self._coeffs * float(other))
        a, b = self._coeffs, self._as_array(other)
        if not a.size or not b.size:
            return Polynomial([0.0])
        return Polynomial(_npoly.polymul(a, b))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return np.array_equal(self._coeffs, other._coeffs)

    def __hash__(self):
        return hash(self._coeffs.tobytes())

    def __repr__(self):
        return f"Polynomial({self._coeffs.tolist()})"


#: the monomial eta, handy for building residual polynomials
ETA = Polynomial([0.0, 1.0])


def poly_eval(p: Polynomial, t):
    """Evaluate ``p`` at ``t`` (Horner). Non-finite ``t`` is rejected."""
    return p(t)


def poly_diff(p: Polynomial) -> Polynomial:
    """Derivative d p / d eta; the degree drops by exactly 1 for nonconstant p."""
    return p.deriv()


def poly_mul(p: Polynomial, q: Polynomial) -> Polynomial:
    """Coefficient convolution; deg(pq) = deg p + deg q for nonzero operands."""
    return p * q


def relative_residual(residual: Polynomial, *operands: Polynomial) -> float:
    """Max-abs coefficient of ``residual`` over the largest operand's max-abs coefficient.

    This is the scale-free residual convention used throughout the package.
    A zero denominator with a zero numerator counts as a perfect 0.0.
    """
    num = residual.max_abs_coeff()
    den = max((op.max_abs_coeff() for op in operands), default=0.0)
    if den == 0.0:
        return 0.0 if num == 0.0 else math.inf
    return num / den


def _check_family_degree(n: int, what: str) -> None:
    if not isinstance(n, (int, np.integer)):
        raise TypeError(f"{what} index must be an integer")
    if n < 0:
        raise ValueError(f"{what} index must be >= 0, got {n}")
    if n > MAX_FAMILY_DEGREE:
        raise ValueError(
            f"{what} of degree {n} exceeds the double-precision certification "
            f"cap ({MAX_FAMILY_DEGREE}); coefficients would not be trustworthy"
        )


@lru_cache(maxsize=None)
def hermite(n: int) -> Polynomial:
    """Hermite polynomial H_n from H_{k+1} = 2*eta*H_k - 2k*H_{k-1}."""
    _check_family_degree(n, "Hermite polynomial")
    if n == 0:
        return Polynomial([1.0])
    hkm1 = np.array([1.0])
    hk = np.array([0.0, 2.0])
    for k in range(1, n):
        hkp1 = _npoly.polysub(_npoly.polymul([0.0, 2.0], hk), 2.0 * k * hkm1)
        hkm1, hk = hk, hkp1
    return Polynomial(hk)


@lru_cache(maxsize=None)
def laguerre(n: int, a: float) -> Polynomial:
    """Generalized Laguerre polynomial L_n^(a).

    Negative parameter values are supported on purpose: the deformed Morse
    construction needs a < -1. Coefficients are computed directly as
    (-1)^k binom(n+a, n-k) / k! with the binomial expanded as a product, not
    by the three-term recurrence: when n+a is a small nonnegative integer the
    low-order coefficients vanish exactly, and the recurrence reaches those
    zeros through catastrophic cancellation (~1e-9 relative junk at n=12,
    a=-10) while the product form keeps every coefficient good to ~n*eps.
    The recurrence is equivalent analytically and is exercised in the tests.
    """
    _check_family_degree(n, "Laguerre polynomial")
    a = float(a)
    coeffs = np.zeros(n + 1)
    z = n + a
    fact_k = 1.0
    for k in range(n + 1):
        if k:
            fact_k *= k
        m = n - k
        binom = 1.0
        for i in range(1, m + 1):
            binom *= (z - m + i) / i
        coeffs[k] = (-1.0) ** k * binom / fact_k
    return Polynomial(coeffs)


def compose_neg_square(p: Polynomial) -> Polynomial:
    """Return p(-eta**2) as a polynomial in eta (even powers only)."""
    if p.is_zero():
        return Polynomial([0.0])
    out = np.zeros(2 * p.degree + 1)
    for k, c in enumerate(p.coeffs):
        out[2 * k] = c * (-1.0) ** k
    return Polynomial(out)


def hermite_imag_even(m: int) -> Polynomial:
    """The real polynomial equal to H_{2m} evaluated at i*eta.

    Built through the Laguerre route (-1)^m 2^(2m) m! L_m^(-1/2)(-eta**2),
    which keeps everything real; odd-index coefficients are exactly zero, and
    the value has constant sign (-1)^m on the whole real line.
    """
    if not isinstance(m, (int, np.integer)) or m < 1:
        raise ValueError(f"m must be a positive integer, got {m}")
    _check_family_degree(2 * m, "imaginary-argument Hermite polynomial")
    base = compose_neg_square(laguerre(m, -0.5))
    return ((-1.0) ** m * 2.0 ** (2 * m) * math.factorial(m)) * base


def laguerre_reflect(n: int, a: float) -> Polynomial:
    """L_n^(a)(-eta): the Laguerre polynomial with its argument sign-flipped."""
    p = laguerre(n, a)
    c = p.coeffs.copy()
    c[1::2] *= -1.0
    return Polynomial(c)


def laguerre_identity_residuals(n: int, a: float):
    """Residual norms of the three Laguerre contiguous relations.

    Returns (r1, r2, r3), the relative coefficient residuals of

        r1:  d/deta L_n^(a)            = -L_{n-1}^(a+1)
        r2:  L_n^(a) - L_n^(a-1)       =  L_{n-1}^(a)
        r3:  eta L_{n-1}^(a+1) - a L_{n-1}^(a) = -n L_n^(a-1)

    all of which should vanish identically for recurrence-built polynomials.
    """
    if n < 1:
        raise ValueError("identities need n >= 1")
    a = float(a)
    ln_a = laguerre(n, a)
    ln_am1 = laguerre(n, a - 1.0)
    lnm1_a = laguerre(n - 1, a)
    lnm1_ap1 = laguerre(n - 1, a + 1.0)

    res1 = ln_a.deriv() + lnm1_ap1
    r1 = relative_residual(res1, ln_a, lnm1_ap1)

    res2 = ln_a - ln_am1 - lnm1_a
    r2 = relative_residual(res2, ln_a, ln_am1, lnm1_a)

    t1, t2, t3 = ETA * lnm1_ap1, a * lnm1_a, float(n) * ln_am1
    res3 = t1 - t2 + t3
    r3 = relative_residual(res3, t1, t2, t3)

    return r1, r2, r3
