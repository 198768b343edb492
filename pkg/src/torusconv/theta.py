"""Odd Jacobi theta function, the two-variable kernel generator F, and its g-kernels.

The theta convention is pinned by the product

    theta(x) = q^(1/8) * (z^(1/2) - z^(-1/2)) * prod_{n>=1} (1-q^n)(1-q^n z)(1-q^n z^-1),

with z = exp(2*pi*i*x) and q = exp(2*pi*i*tau).  It is odd, vanishes exactly on
the lattice, and satisfies theta(x+1) = -theta(x) and
theta(x+tau) = -q^(-1/2) z^(-1) theta(x).  The generator

    F(x, y) = theta'(0) theta(x+y) / (theta(x) theta(y))

is 1-periodic and picks up exp(-2*pi*i*y) under x -> x + tau; its Laurent
coefficients in y (simple pole 1/y first) are the kernels g^(n)(x), extracted
here by trapezoid quadrature on a circle |y| = ring_radius.
"""

from __future__ import annotations

import math
import warnings
from functools import cached_property

import numpy as np

from .torus import (
    POLE_GUARD,
    TWO_PI_I,
    PoleProximityError,
    TorusParams,
    reduce_to_cell,
    require_off_lattice,
)

# exp() overflows beyond ~709; the reduction prefactor has magnitude exp(pi*Im(tau)*m^2)
_OVERFLOW_EXPONENT = 690.0


def _as_array(x):
    xa = np.asarray(x, dtype=complex)
    return xa, xa.shape == ()


def _restore(val: np.ndarray, scalar: bool):
    return complex(val) if scalar else val


class ThetaEvaluator:
    """Evaluator bound to one TorusParams; immutable and safe to share."""

    def __init__(self, params: TorusParams, truncation_order: int | None = None,
                 kernel_max: int = 16):
        self.params = params
        q = params.q
        if truncation_order is None:
            # need |q|^(N + 1/2) below series_tol for arguments reduced to |Im x| <= Im(tau)/2
            truncation_order = max(4, int(math.ceil(math.log(params.series_tol) / math.log(abs(q)))) + 2)
        self.truncation_order = truncation_order
        self.kernel_max = kernel_max
        self._qn = q ** np.arange(1, truncation_order + 1)
        self._euler = complex(np.prod(1.0 - self._qn))  # prod (1 - q^n)
        self._q8 = q ** 0.125

    # -- theta itself ---------------------------------------------------------

    def _theta_raw(self, x0: np.ndarray) -> np.ndarray:
        # valid for |Im x0| <= Im(tau)/2 at the configured truncation
        z = np.exp(TWO_PI_I * x0)
        half = np.exp(1j * math.pi * x0)
        val = self._q8 * (half - 1.0 / half)
        for qn in self._qn:
            val = val * (1.0 - qn * z) * (1.0 - qn / z)
        return val * self._euler

    def theta(self, x):
        xa, scalar = _as_array(x)
        x0, m, s = reduce_to_cell(xa, self.params)
        if xa.size and math.pi * self.params.im_tau * float(np.max(m * m)) > _OVERFLOW_EXPONENT:
            warnings.warn(
                "theta argument far outside the validated strip; quasi-periodicity "
                "prefactor is at the edge of double-precision range",
                RuntimeWarning,
            )
        sign = 1.0 - 2.0 * (np.mod(m + s, 2.0))
        pref = sign * np.exp(-1j * math.pi * self.params.tau * m * m) * np.exp(-TWO_PI_I * m * x0)
        return _restore(pref * self._theta_raw(x0), scalar)

    @cached_property
    def _theta_prime_zero(self) -> complex:
        # only the sine-type factor survives differentiation at 0
        return TWO_PI_I * self._q8 * self._euler ** 3

    def theta_prime_zero(self) -> complex:
        return self._theta_prime_zero

    # -- the kernel generator -------------------------------------------------

    def eisenstein_kronecker(self, x, y):
        """F(x, y) = theta'(0) theta(x+y) / (theta(x) theta(y)); x, y off the lattice."""
        xa, xs = _as_array(x)
        ya, ys = _as_array(y)
        require_off_lattice(xa, self.params, what="x")
        require_off_lattice(ya, self.params, what="y")
        val = self._theta_prime_zero * self.theta(xa + ya) / (self.theta(xa) * self.theta(ya))
        return _restore(np.asarray(val), xs and ys)

    @cached_property
    def _ring(self) -> np.ndarray:
        n = self.params.quad_points
        return self.params.ring_radius * np.exp(TWO_PI_I * np.arange(n) / n)

    def g_table(self, n_max: int, x):
        """All kernels g^(0..n_max) at x from a single ring of F samples.

        Returns an array of shape (n_max+1,) + shape(x); for scalar x a vector.
        The n-th row is (1/2*pi*i) * contour_integral F(x, y) y^(-n) dy, i.e. the
        coefficient of y^(n-1) in F(x, .).
        """
        if not 0 <= n_max <= self.kernel_max:
            raise ValueError(f"kernel order must be in [0, {self.kernel_max}], got {n_max}")
        if self.params.ring_radius >= min(1.0, self.params.im_tau):
            raise ValueError("ring_radius must stay inside the pole-free annulus")
        xa, scalar = _as_array(x)
        require_off_lattice(xa, self.params, what="x")
        y = self._ring
        fv = self.eisenstein_kronecker(xa[..., None], y[(None,) * max(xa.ndim, 1)])
        fv = np.asarray(fv).reshape(xa.shape + (y.size,))
        powers = y[None, :] ** (1 - np.arange(n_max + 1))[:, None]  # (n_max+1, N)
        table = fv @ powers.T / y.size  # shape(x) + (n_max+1,)
        table = np.moveaxis(table, -1, 0)
        if scalar:
            return table.reshape(n_max + 1)
        return table

    def g_kernel(self, n: int, x):
        """Kernel g^(n)(x); g^(0) = 1, g^(1) = Z, higher orders follow the generator."""
        table = self.g_table(n, x)
        val = table[n]
        return complex(val) if np.asarray(x).shape == () else val
