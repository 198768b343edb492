"""Lattice geometry and global numerical policy for the torus C/(Z + tau*Z).

Everything downstream (theta products, q-series, contour quadrature) reads its
modular parameter and resolution settings from a single immutable
:class:`TorusParams`, so a computation is reproducible from that object alone.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

TWO_PI = 2.0 * math.pi
TWO_PI_I = 2j * math.pi

#: increment of the 1-periodic zeta function across the tau period, exactly -2*pi*i
DELTA_Z = -TWO_PI_I

#: hard guard radius around lattice points for pointwise evaluation
POLE_GUARD = 1e-8


class PoleProximityError(ValueError):
    """Evaluation point or contour node too close to a pole."""


class ContourError(ValueError):
    """Quadrature contour invalid: outside declared strips or hugging a pole."""


class QuadratureError(RuntimeError):
    """A quadrature self-check (node halving / Richardson step) failed."""


def nome(tau: complex) -> complex:
    """q = exp(2*pi*i*tau).  Requires Im(tau) > 0 so that |q| < 1."""
    tau = complex(tau)
    if not tau.imag > 0:
        raise ValueError(f"Im(tau) must be positive, got tau={tau}")
    return cmath.exp(TWO_PI_I * tau)


@dataclass(frozen=True)
class LatticePoint:
    """Lattice element n + m*tau; m counts steps in the imaginary direction."""

    m: int
    n: int

    def embed(self, tau: complex) -> complex:
        return self.n + self.m * tau


@dataclass(frozen=True)
class TorusParams:
    """Fixed modular parameter plus the numerical policy shared by all evaluators.

    ``quad_points`` is the trapezoid node count per unit period, ``series_tol``
    the q-series truncation threshold, and ``ring_radius`` the radius used when
    extracting Taylor/Laurent data in the second argument of the two-variable
    kernel generator (must stay inside the pole-free annulus 0 < |y| < min(1, Im tau)).
    """

    tau: complex = 1j
    quad_points: int = 256
    series_tol: float = 1e-16
    ring_radius: float = 0.0  # 0 means "use the default 0.4*min(1, Im tau)"
    q: complex = field(init=False)
    delta_z: complex = field(init=False, default=DELTA_Z)

    def __post_init__(self) -> None:
        tau = complex(self.tau)
        if tau.imag < 0.5:
            raise ValueError(
                f"Im(tau) >= 0.5 required (got {tau.imag}); smaller values make the "
                "q-series too slow for the default truncation policy"
            )
        if self.quad_points < 8:
            raise ValueError("quad_points must be at least 8")
        if not self.series_tol > 0:
            raise ValueError("series_tol must be positive")
        object.__setattr__(self, "tau", tau)
        object.__setattr__(self, "q", nome(tau))
        if self.ring_radius == 0.0:
            object.__setattr__(self, "ring_radius", 0.4 * min(1.0, tau.imag))
        if not 0.0 < self.ring_radius < min(1.0, tau.imag):
            raise ValueError(
                f"ring_radius must lie in (0, min(1, Im tau)) = (0, {min(1.0, tau.imag)})"
            )

    @property
    def im_tau(self) -> float:
        return self.tau.imag


def lattice_distance(x, params: TorusParams):
    """Euclidean distance from x to the nearest point of Z + tau*Z.

    Accepts a scalar or an ndarray; the candidate search covers the 3x3 block
    of lattice points around the rounded cell coordinates, which is exact for
    any tau in the upper half plane.
    """
    xa = np.asarray(x, dtype=complex)
    tau = params.tau
    m0 = np.rint(xa.imag / tau.imag)
    best = np.full(xa.shape, np.inf)
    for dm in (-1.0, 0.0, 1.0):
        m = m0 + dm
        n0 = np.rint(xa.real - m * tau.real)
        for dn in (-1.0, 0.0, 1.0):
            best = np.minimum(best, np.abs(xa - ((n0 + dn) + m * tau)))
    if xa.shape:
        return best
    return float(best)


def reduce_real_period(x):
    """Shift x by an integer so that Re(x) lands in [0, 1); Im(x) is untouched."""
    xa = np.asarray(x, dtype=complex)
    out = xa - np.floor(xa.real)
    if xa.shape:
        return out
    return complex(out)


def reduce_to_cell(x, params: TorusParams):
    """Split x = x0 + s + m*tau with Re(x0) in [-1/2, 1/2), |Im(x0)| <= Im(tau)/2.

    Returns (x0, m, s) with m, s as float arrays of integers.  This is the
    reduction used by the theta product and the q-series evaluators; callers
    reassemble quasi-periodicity factors from (m, s).
    """
    xa = np.asarray(x, dtype=complex)
    tau = params.tau
    m = np.rint(xa.imag / tau.imag)
    x1 = xa - m * tau
    s = np.rint(x1.real)
    return x1 - s, m, s


def require_off_lattice(x, params: TorusParams, guard: float = POLE_GUARD, what: str = "x"):
    """Raise PoleProximityError when any entry of x is within ``guard`` of the lattice."""
    d = lattice_distance(x, params)
    if np.any(np.asarray(d) < guard):
        raise PoleProximityError(
            f"{what} is within {guard} of a lattice point (min distance {np.min(d):.3e})"
        )
