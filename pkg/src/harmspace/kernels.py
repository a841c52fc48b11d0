"""Poisson-type kernels on the upper half-space and the harmonic test fields.

Everything is expressed through two integer-coefficient polynomial
families, so kernel values are exact up to floating point:

* R_m(tau, D), the numerator of the m-th tau-derivative of the Poisson
  kernel written with D = |x - y|^2 and tau = t + s,
      d^m/dtau^m P = c_n R_m(tau, D) (D + tau^2)^(-(n+1)/2 - m),
  built from R_0 = tau and
      R_{m+1} = dR_m/dtau (D + tau^2) - (n + 1 + 2m) tau R_m.

* P_l(u), the profile of the harmonic test field
      f_{w,l}(z) = |z - wbar|^(-(n-1+l)) P_l(u),  u = (t+s)/|z - wbar|,
  built from P_0 = 1 and P_{l+1} = (1 - u^2) P_l' - (n - 1 + l) u P_l.
  Repeated d/dt of f_{w,0} walks down this ladder, so the family is
  harmonic whenever n >= 2.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np


def poisson_constant(n: int) -> float:
    """Normalizer making the Poisson kernel integrate to 1 over R^n."""
    return math.gamma((n + 1) / 2) / math.pi ** ((n + 1) / 2)


def poisson(n: int, x, t):
    """Poisson kernel P(x, t) = c_n t / (|x|^2 + t^2)^((n+1)/2), t > 0.

    x has shape (..., n); t broadcasts against the leading shape.
    """
    x = np.atleast_2d(np.asarray(x, dtype=float))
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise ValueError("Poisson kernel needs t > 0")
    sq = np.sum(x * x, axis=-1)
    out = poisson_from_sq(n, sq, t)
    return out if out.shape else float(out)


def poisson_from_sq(n: int, sq, t):
    """Poisson kernel from |x|^2; the vectorization workhorse."""
    sq = np.asarray(sq, dtype=float)
    t = np.asarray(t, dtype=float)
    return poisson_constant(n) * t * (sq + t * t) ** (-(n + 1) / 2)


@lru_cache(maxsize=None)
def poisson_deriv_poly(m: int, n: int) -> tuple:
    """Integer coefficients of R_m as ((a, b, coeff), ...) for tau^a D^b."""
    if m < 0:
        raise ValueError("derivative order must be >= 0")
    coeffs = {(1, 0): 1}  # R_0 = tau
    for k in range(m):
        nxt: dict = {}
        for (a, b), c in coeffs.items():
            if a > 0:
                # dR/dtau * (D + tau^2)
                _add(nxt, (a - 1, b + 1), a * c)
                _add(nxt, (a + 1, b), a * c)
            _add(nxt, (a + 1, b), -(n + 1 + 2 * k) * c)
        coeffs = nxt
    return tuple(sorted((a, b, c) for (a, b), c in coeffs.items() if c != 0))


def _add(d, key, val):
    d[key] = d.get(key, 0) + val


def _eval_poly(terms, tau, D):
    acc = 0.0
    for a, b, c in terms:
        acc = acc + c * tau**a * D**b
    return acc


def bergman_from_sq(l: int, n: int, sq, tau):
    """Weighted Bergman kernel Q_l from D = |x-y|^2 and tau = t + s.

    Q_l = ((-2)^(l+1) / l!) c_n R_{l+1}(tau, D) (D + tau^2)^(-(n+1)/2 - l - 1).
    """
    sq = np.asarray(sq, dtype=float)
    tau = np.asarray(tau, dtype=float)
    terms = poisson_deriv_poly(l + 1, n)
    scale = (-2.0) ** (l + 1) / math.factorial(l) * poisson_constant(n)
    return scale * _eval_poly(terms, tau, sq) * (sq + tau * tau) ** (-(n + 1) / 2 - (l + 1))


def bergman_q(l: int, n: int, z, w):
    """Q_l(z, w) for half-space points z = (x, t), w = (y, s).

    Symmetric in z, w; the reflection wbar = (y, -s) never lies in the
    domain, so the kernel is smooth on (half-space)^2.
    """
    z = np.asarray(z, dtype=float)
    w = np.asarray(w, dtype=float)
    if z.shape[-1] != w.shape[-1]:
        raise ValueError("points must share a dimension")
    if np.any(z[..., -1] <= 0) or np.any(w[..., -1] <= 0):
        raise ValueError("points must lie in the open half-space")
    diff = z[..., :-1] - w[..., :-1]
    sq = np.sum(diff * diff, axis=-1)
    out = bergman_from_sq(l, n, sq, z[..., -1] + w[..., -1])
    return out if np.ndim(out) else float(out)


def reflected_distance_sq(z, w):
    """|z - wbar|^2 = |x - y|^2 + (t + s)^2."""
    z = np.asarray(z, dtype=float)
    w = np.asarray(w, dtype=float)
    diff = z[..., :-1] - w[..., :-1]
    return np.sum(diff * diff, axis=-1) + (z[..., -1] + w[..., -1]) ** 2


@lru_cache(maxsize=None)
def deriv_polynomial(l: int, n: int) -> tuple:
    """Coefficients of P_l, ascending powers of u.  Integers."""
    if l < 0:
        raise ValueError("order must be >= 0")
    p = [1]
    for k in range(l):
        # (1 - u^2) p' - (n - 1 + k) u p
        dp = [i * p[i] for i in range(1, len(p))]
        nxt = [0] * (len(p) + 1)
        for i, c in enumerate(dp):
            nxt[i] += c
            nxt[i + 2] -= c
        for i, c in enumerate(p):
            nxt[i + 1] -= (n - 1 + k) * c
        while len(nxt) > 1 and nxt[-1] == 0:
            nxt.pop()
        p = nxt
    return tuple(p)


def deriv_polynomial_eval(l: int, n: int, u):
    u = np.asarray(u, dtype=float)
    acc = np.zeros_like(u)
    for c in reversed(deriv_polynomial(l, n)):
        acc = acc * u + c
    return acc


def test_fn_from_sq(l: int, n: int, sq, tau):
    """f_{w,l} from D = |x - y|^2 and tau = t + s.  Needs n >= 2."""
    if n < 2:
        raise ValueError("test fields are degenerate for n = 1")
    sq = np.asarray(sq, dtype=float)
    tau = np.asarray(tau, dtype=float)
    rho = np.sqrt(sq + tau * tau)
    u = tau / rho
    return rho ** (-(n - 1 + l)) * deriv_polynomial_eval(l, n, u)


def test_fn(l: int, n: int, w, z):
    """Harmonic test field f_{w,l}(z), w = (y, s) fixed, z = (x, t)."""
    z = np.asarray(z, dtype=float)
    w = np.asarray(w, dtype=float)
    diff = z[..., :-1] - w[..., :-1]
    sq = np.sum(diff * diff, axis=-1)
    out = test_fn_from_sq(l, n, sq, z[..., -1] + w[..., -1])
    return out if np.ndim(out) else float(out)


def profile_roots(l: int, n: int) -> np.ndarray:
    """Real roots of P_l inside (0, 1)."""
    coeff = list(deriv_polynomial(l, n))
    if len(coeff) == 1:
        return np.array([])
    r = np.roots(list(reversed(coeff)))
    r = r[np.abs(r.imag) < 1e-12].real
    return np.sort(r[(r > 0) & (r < 1)])


def default_delta(l: int, n: int, eps: float = 0.05) -> float:
    """Threshold separating |P_l(u)| from its zeros on the u-range of Q_w.

    Half the minimum of |P_l| over a coarse grid of (0, 1] that excludes
    eps-neighbourhoods of the roots.  Inside the reference box Q_w the
    variable u stays in a compact subinterval of (0, 1], so |P_l| > delta
    on a definite fraction of the box.
    """
    grid = np.linspace(0.01, 1.0, 400)
    for r in profile_roots(l, n):
        grid = grid[np.abs(grid - r) > eps]
    if grid.size == 0:
        raise ValueError("no admissible grid points; widen the grid")
    vals = np.abs(deriv_polynomial_eval(l, n, grid))
    return 0.5 * float(vals.min())


def profile_excursion(l: int, n: int, delta: float, z, w):
    """Indicator of |P_l(u)| > delta at z (u built from the w-reflection)."""
    z = np.asarray(z, dtype=float)
    w = np.asarray(w, dtype=float)
    rho = np.sqrt(reflected_distance_sq(z, w))
    u = (z[..., -1] + w[..., -1]) / rho
    n_sp = z.shape[-1] - 1
    return np.abs(deriv_polynomial_eval(l, n_sp if n is None else n, u)) > delta


def polynomial_tables_json(l_max: int, n: int) -> dict:
    """Exact integer tables for external checking."""
    return {
        "n": n,
        "poisson_derivative_numerators": {
            str(m): [[a, b, c] for a, b, c in poisson_deriv_poly(m, n)]
            for m in range(l_max + 2)
        },
        "test_profile_coefficients": {
            str(l): list(deriv_polynomial(l, n)) for l in range(l_max + 1)
        },
    }
