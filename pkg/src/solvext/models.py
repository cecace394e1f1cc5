"""Closed-form construction of the two rationally extended models.

A model is a classical solvable potential (harmonic oscillator, or Morse in
the coordinate eta = exp(-x)) deformed by a nodeless polynomial xi(eta): the
potential picks up rational terms built from xi'/xi, while the spectrum and
the eigenfunctions stay in closed form. This module owns everything algebraic:

* admissibility of the deformation parameters (and a belt-and-suspenders
  numerical zero scan of xi over the physical domain),
* the deforming polynomial xi, its defining second-order ODE residual,
* prepotential, potential, closed-form energies and bound-state counting,
* eigenpolynomials (two independent constructions for Morse) and raw,
  unnormalized wavefunctions,
* the orthogonality weight in eta space (both candidate Morse weights are
  exposed; the x-space Gram matrix in ``spectral`` arbitrates).

All functions are pure and all returned objects immutable, so everything here
is safe for unsynchronized concurrent use.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Optional

import numpy as np

from .polycore import (
    ETA,
    MAX_FAMILY_DEGREE,
    Polynomial,
    hermite,
    hermite_imag_even,
    laguerre,
    laguerre_reflect,
    relative_residual,
)


class ModelFamily(enum.Enum):
    HARMONIC_RATIONAL = "harmonic-rational"
    MORSE_RATIONAL = "morse-rational"


# rejection reason tokens (machine readable, also used by the CLI)
REASON_ODD_ELL = "odd-ell"
REASON_KLH = "klh-violated"
REASON_XI_ZERO = "xi-zero-found"


class AdmissibilityError(ValueError):
    """A parameter set that does not yield a valid (nodeless) deformation."""

    def __init__(self, reason: str, message: str):
        super().__init__(message)
        self.reason = reason


# zero-scan settings: uniform on [-50, 50] for the harmonic line, log-spaced
# on (1e-6, 1e3) for the Morse half line, reject on sign change or on a
# suspiciously small minimum relative to the coefficient scale
_SCAN_POINTS = 4096
_NEAR_ZERO_RATIO = 1e-8


@dataclass(frozen=True)
class ModelSpec:
    """Validated parameters of one extended model.

    Construction performs full admissibility checking and raises
    ``AdmissibilityError`` (with a ``reason`` token) for bad parameters, so a
    ModelSpec instance is always a usable model.
    """

    family: ModelFamily
    ell: int
    alpha: Optional[float] = None

    def __post_init__(self):
        if not isinstance(self.family, ModelFamily):
            raise ValueError(f"unknown family: {self.family!r}")
        if not isinstance(self.ell, (int, np.integer)) or isinstance(self.ell, bool):
            raise ValueError("ell must be an integer")
        if self.ell < 0:
            raise ValueError("ell must be >= 0")
        object.__setattr__(self, "ell", int(self.ell))

        if self.family is ModelFamily.HARMONIC_RATIONAL:
            if self.alpha is not None:
                raise ValueError("alpha is not a harmonic-family parameter")
            if self.ell % 2 != 0:
                raise AdmissibilityError(
                    REASON_ODD_ELL,
                    f"ell={self.ell}: odd deformations have a node at the "
                    "origin and non-normalizable states; ell must be even",
                )
        else:
            if self.alpha is None:
                raise ValueError("the Morse family requires alpha")
            alpha = float(self.alpha)
            if not math.isfinite(alpha):
                raise ValueError("alpha must be finite")
            object.__setattr__(self, "alpha", alpha)
            if not _klh_admissible(self.ell, alpha):
                raise AdmissibilityError(
                    REASON_KLH,
                    f"(ell={self.ell}, alpha={alpha}) fails the "
                    "Kienast-Lawton-Hahn conditions: need -2k-1 < alpha < -2k "
                    "with -ell < alpha < -1, or even ell with alpha < -ell",
                )
        _scan_for_zeros(self)

    def is_morse(self) -> bool:
        return self.family is ModelFamily.MORSE_RATIONAL


def _klh_admissible(ell: int, alpha: float) -> bool:
    # condition (ii): even ell with alpha < -ell
    if ell % 2 == 0 and alpha < -ell:
        return True
    # condition (i): alpha in some open band (-2k-1, -2k), and -ell < alpha < -1
    u = -alpha
    in_band = u > 0 and u != math.floor(u) and math.floor(u) % 2 == 0
    return in_band and -ell < alpha < -1.0


def _scan_for_zeros(spec: ModelSpec) -> None:
    xi = _xi_polynomial(spec)
    if spec.is_morse():
        grid = np.logspace(-6.0, 3.0, _SCAN_POINTS)
    else:
        grid = np.linspace(-50.0, 50.0, _SCAN_POINTS)
    vals = xi(grid)
    scale = xi.max_abs_coeff()
    if np.any(vals[:-1] * vals[1:] <= 0.0) or np.min(np.abs(vals)) / scale < _NEAR_ZERO_RATIO:
        raise AdmissibilityError(
            REASON_XI_ZERO,
            f"deforming polynomial has a zero (or near-zero) on the physical "
            f"domain for {spec.family.value} ell={spec.ell} alpha={spec.alpha}",
        )


def validate_spec(family: ModelFamily, ell: int, alpha: Optional[float] = None) -> ModelSpec:
    """Construct a validated ModelSpec; raises AdmissibilityError with a reason."""
    return ModelSpec(family, ell, alpha)


@lru_cache(maxsize=None)
def _xi_polynomial(spec: ModelSpec) -> Polynomial:
    if spec.is_morse():
        return laguerre_reflect(spec.ell, spec.alpha)
    if spec.ell == 0:
        return Polynomial([1.0])
    return hermite_imag_even(spec.ell // 2)


@dataclass(frozen=True)
class DeformingFunction:
    """The nodeless polynomial xi plus the coefficient of its ODE's E-tilde term.

    For the harmonic family E-tilde is the constant ``etilde_const`` (= -2*ell);
    for Morse it is the linear function ``etilde_const * eta`` (= -ell * eta).
    """

    xi: Polynomial
    etilde_const: float


def deforming_function(spec: ModelSpec) -> DeformingFunction:
    xi = _xi_polynomial(spec)
    if spec.is_morse():
        return DeformingFunction(xi, -float(spec.ell))
    return DeformingFunction(xi, -2.0 * spec.ell)


def _ode_coefficients(spec: ModelSpec):
    """(c2, c1, etilde) of the deforming-function equation c2 xi'' + c1 xi' + etilde xi = 0."""
    if spec.is_morse():
        a = spec.alpha
        return (
            Polynomial([0.0, 0.0, 1.0]),        # eta^2
            Polynomial([0.0, a + 1.0, 1.0]),    # (alpha+1) eta + eta^2
            Polynomial([0.0, -float(spec.ell)]),
        )
    return (
        Polynomial([1.0]),
        Polynomial([0.0, 2.0]),
        Polynomial([-2.0 * spec.ell]),
    )


def xi_ode_residual(spec: ModelSpec) -> float:
    """Relative coefficient residual of the equation defining xi (should be ~0)."""
    c2, c1, et = _ode_coefficients(spec)
    xi = _xi_polynomial(spec)
    t1 = c2 * xi.deriv().deriv()
    t2 = c1 * xi.deriv()
    t3 = et * xi
    return relative_residual(t1 + t2 + t3, t1, t2, t3, xi)


def prepotential_w0(spec: ModelSpec, x):
    """Prepotential of the undeformed ground state.

    Harmonic: -x**2/2. Morse: -(alpha/2) ln(eta) - eta/2 with eta = exp(-x),
    computed as (alpha/2) x - exp(-x)/2 which is stable for all real x.
    """
    x = _finite(x)
    if spec.is_morse():
        return 0.5 * spec.alpha * x - 0.5 * np.exp(-x)
    return -0.5 * x * x


def potential(spec: ModelSpec, x):
    """The rationally extended potential V(x).

    The deformation enters only through xi'/xi, which is pole-free on the
    physical domain for any validated spec. Constant offsets are fixed so the
    ground-state energy is exactly 0.
    """
    x = _finite(x)
    xi = _xi_polynomial(spec)
    xip = xi.deriv()
    if spec.is_morse():
        a, ell = spec.alpha, spec.ell
        eta = np.exp(-x)
        r = xip(eta) / xi(eta)
        return (
            0.25 * eta * eta
            + 0.5 * (a - 2.0 * ell - 1.0) * eta
            + 0.25 * a * a
            + 2.0 * r * (eta * eta * (r + 1.0) + a * eta)
        )
    r = xip(x) / xi(x)
    return x * x - 1.0 + 2.0 * r * (r + 2.0 * x) - 2.0 * spec.ell


def _excited_bound_count(spec: ModelSpec) -> int:
    # Morse bound states: integers n >= 0 with n < -alpha/2 - ell - 1
    bound = -spec.alpha / 2.0 - spec.ell - 1.0
    return max(0, math.ceil(bound))


def continuum_threshold(spec: ModelSpec) -> Optional[float]:
    """alpha**2/4 for Morse (no discrete levels above it); None for harmonic."""
    return 0.25 * spec.alpha * spec.alpha if spec.is_morse() else None


def energy(spec: ModelSpec, level) -> float:
    """Closed-form energy of a level (``None`` labels the ground state)."""
    if level is None:
        return 0.0
    n = _check_excited_index(level)
    if spec.is_morse():
        if n >= _excited_bound_count(spec):
            raise ValueError(
                f"n={n} is not bound: Morse requires n < -alpha/2 - ell - 1 "
                f"= {-spec.alpha / 2.0 - spec.ell - 1.0}"
            )
        s = n + spec.ell
        return spec.alpha - 1.0 - (s + 2.0) * (s + spec.alpha)
    return 2.0 * (n + spec.ell + 1.0)


def bound_levels(spec: ModelSpec, nmax: Optional[int] = None):
    """Ordered level labels: ``None`` (ground) then excited indices 0, 1, ...

    The harmonic tower is infinite, so ``nmax`` is required there. For Morse
    the finite bound set is returned, optionally truncated at ``nmax``.
    """
    if spec.is_morse():
        count = _excited_bound_count(spec)
        if nmax is not None:
            count = min(count, nmax + 1)
    else:
        if nmax is None:
            raise ValueError("the harmonic family has infinitely many levels; pass nmax")
        count = nmax + 1
    return [None] + list(range(count))


@dataclass(frozen=True)
class Eigenstate:
    """One bound state: level label, closed-form energy, polynomial part.

    ``gamma`` and ``beta`` carry the Morse bookkeeping (``gamma = -(n+ell+2)``
    from the eta**gamma substitution in the construction, ``beta`` the Laguerre
    parameter of the eigenpolynomial); both are 0 for the ground state and for
    the harmonic family. The non-polynomial eta-space factor of an excited
    Morse state is eta**(gamma+1).
    """

    n: Optional[int]
    energy: float
    p: Polynomial
    gamma: float = 0.0
    beta: float = 0.0

    @property
    def is_ground(self) -> bool:
        return self.n is None

    @property
    def label(self) -> str:
        return "ground" if self.n is None else f"n={self.n}"


def eigenstate(spec: ModelSpec, level) -> Eigenstate:
    """Assemble the Eigenstate for a level label (``None`` or an excited index)."""
    if isinstance(level, Eigenstate):
        return level
    if level is None:
        return Eigenstate(None, 0.0, Polynomial([1.0]))
    n = _check_excited_index(level)
    e = energy(spec, n)
    p = p_polynomial(spec, n)
    if spec.is_morse():
        return Eigenstate(n, e, p, gamma=-(n + spec.ell + 2.0), beta=_beta(spec, n))
    return Eigenstate(n, e, p)


def _beta(spec: ModelSpec, n: int) -> float:
    return -spec.alpha - 2.0 * (n + spec.ell + 1.0)


def p_polynomial(spec: ModelSpec, n: int) -> Polynomial:
    """Eigenpolynomial of the n-th excited state, degree ell + n + 1.

    Harmonic: H_n xi' + H_{n+1} xi. Morse: the degree-(ell+n+1) polynomial
    factor left after pulling eta**(-n-ell-1) out of the eta-space
    eigenfunction, eta L_n^(beta) xi' - (ell L_n^(beta) + (n+1) L_{n+1}^(beta)) xi.
    """
    n = _check_excited_index(n)
    if spec.ell + n > MAX_FAMILY_DEGREE:
        raise ValueError(
            f"ell + n = {spec.ell + n} exceeds the double-precision "
            f"certification cap ({MAX_FAMILY_DEGREE})"
        )
    xi = _xi_polynomial(spec)
    xip = xi.deriv()
    if spec.is_morse():
        if n >= _excited_bound_count(spec):
            raise ValueError(f"n={n} is not in the Morse bound set")
        b = _beta(spec, n)
        ln = laguerre(n, b)
        lnp1 = laguerre(n + 1, b)
        return ETA * ln * xip - (float(spec.ell) * ln + (n + 1.0) * lnp1) * xi
    return hermite(n) * xip + hermite(n + 1) * xi


def p_polynomial_closed(spec: ModelSpec, n: int) -> Polynomial:
    """Morse eigenpolynomial in product form (independent of p_polynomial).

    -[(alpha+ell) L_{ell-1}^(alpha)(-eta) L_n^(beta)(eta)
      + (n+1) L_ell^(alpha)(-eta) L_{n+1}^(beta)(eta)],
    with L_{-1} identically zero at ell = 0.
    """
    if not spec.is_morse():
        raise ValueError("closed product form exists for the Morse family only")
    n = _check_excited_index(n)
    if n >= _excited_bound_count(spec):
        raise ValueError(f"n={n} is not in the Morse bound set")
    a, ell = spec.alpha, spec.ell
    b = _beta(spec, n)
    second = (n + 1.0) * laguerre_reflect(ell, a) * laguerre(n + 1, b)
    if ell == 0:
        return -1.0 * second
    first = (a + ell) * laguerre_reflect(ell - 1, a) * laguerre(n, b)
    return -1.0 * (first + second)


def construction_residuals(spec: ModelSpec, n: int):
    """Residuals (r1, r2) certifying the construction of the n-th excited state.

    r1 is the relative coefficient residual of the second-order equation the
    construction's auxiliary polynomial must satisfy (the Hermite equation for
    the harmonic family; the transformed equation for U = L_n^(beta) in the
    Morse family, multiplied through by eta to stay polynomial). r2 reassembles
    the eigenpolynomial from the underlying xi' F + xi G combination and
    compares it against ``p_polynomial``.
    """
    n = _check_excited_index(n)
    xi = _xi_polynomial(spec)
    xip = xi.deriv()
    p = p_polynomial(spec, n)

    if spec.is_morse():
        a, ell = spec.alpha, spec.ell
        gamma = -(n + ell + 2.0)
        e = energy(spec, n)
        b = _beta(spec, n)
        u = laguerre(n, b)
        up = u.deriv()
        upp = up.deriv()
        const = e - a + 1.0 + gamma * (gamma - a + 2.0)  # analytically zero
        t1 = Polynomial([0.0, 0.0, 1.0]) * upp
        t2 = Polynomial([0.0, 2.0 * gamma - a + 3.0, -1.0]) * up
        t3 = Polynomial([const, -(gamma + ell + 2.0)]) * u
        r1 = relative_residual(t1 + t2 + t3, t1, t2, t3, u)

        # xi' F + xi G with the common eta**(gamma+1) factor stripped
        g_part = Polynomial([a - 1.0 - gamma, 1.0]) * u - ETA * up
        assembled = ETA * xip * u + xi * g_part
    else:
        v = hermite(n)
        vp = v.deriv()
        vpp = vp.deriv()
        e = energy(spec, n)
        t1 = vpp
        t2 = Polynomial([0.0, -2.0]) * vp
        t3 = (e - 2.0 * spec.ell - 2.0) * v
        r1 = relative_residual(t1 + t2 + t3, t1, t2, t3, v)

        # F = V, G = 2 eta V - V' (c2 = 1, c1 = 2 eta)
        assembled = xip * v + xi * (Polynomial([0.0, 2.0]) * v - vp)

    r2 = relative_residual(assembled - p, assembled, p)
    return r1, r2


def wavefunction_raw(spec: ModelSpec, state, x):
    """Unnormalized bound-state wavefunction at x (scalar or array).

    ``state`` may be an Eigenstate or a level label. The Morse prefactor is
    evaluated as exp(-eta/2 - q*x) with q = -alpha/2 (+ gamma + 1 for excited
    states), which never overflows on either tail. The polynomial ratio is
    evaluated at a clipped argument deep in the tail where the prefactor has
    already underflowed to exactly 0, so extreme probe points return a clean
    0 instead of overflowing.
    """
    st = eigenstate(spec, state)
    x = _finite(x)
    xi = _xi_polynomial(spec)
    if spec.is_morse():
        eta = np.exp(-x)
        q = -0.5 * spec.alpha + (0.0 if st.is_ground else st.gamma + 1.0)
        pref = np.exp(-0.5 * eta - q * x)
        eta_safe = np.minimum(eta, 1e4)  # pref is exactly 0 beyond the clip
        return pref * st.p(eta_safe) / xi(eta_safe)
    pref = np.exp(-0.5 * x * x)
    x_safe = np.clip(x, -50.0, 50.0)  # pref is exactly 0 beyond the clip
    return pref * st.p(x_safe) / xi(x_safe)


class MorseWeights(NamedTuple):
    """The two candidate Morse orthogonality weights (eta space).

    ``paper`` is exp(-eta) eta**(-alpha) / xi**2; ``measure`` carries one less
    power of eta, exp(-eta) eta**(-alpha-1) / xi**2, as dictated by the
    change of measure dx = -d eta / eta. The x-space Gram matrix arbitrates;
    see ``spectral.gram_matrix``.
    """

    paper: object
    measure: object


def weight_function(spec: ModelSpec, eta):
    """Orthogonality weight in eta space.

    Harmonic: the scalar weight exp(-eta**2)/xi**2. Morse: a MorseWeights
    pair (both candidates), defined for eta > 0 only.
    """
    eta = _finite(eta)
    xi = _xi_polynomial(spec)
    if spec.is_morse():
        if np.any(np.asarray(eta) <= 0.0):
            raise ValueError("the Morse eta domain is (0, inf)")
        base = np.exp(-eta) / xi(eta) ** 2
        return MorseWeights(
            paper=base * eta ** (-spec.alpha),
            measure=base * eta ** (-spec.alpha - 1.0),
        )
    return np.exp(-eta * eta) / xi(eta) ** 2


def spec_summary(spec: ModelSpec) -> dict:
    """JSON-friendly echo of a spec (family tag, ell, alpha where present)."""
    out = {"family": spec.family.value, "ell": spec.ell}
    if spec.is_morse():
        out["alpha"] = spec.alpha
    return out


def _check_excited_index(n) -> int:
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise ValueError(f"excited level index must be an integer, got {n!r}")
    if n < 0:
        raise ValueError("excited level index must be >= 0")
    return int(n)


def _finite(x):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("argument must be finite")
    return arr if arr.ndim else float(x)
