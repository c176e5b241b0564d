"""Polynomial families: Touchard polynomials, the U_k coefficients of the
lower incomplete gamma function at infinity, the derivative families E_m and
F_{d,m}, and their chi_3 combination G_m.

Naming conventions for the formal variables: Touchard polynomials are in
``x``, U_k in ``m``, E/F in ``l`` and everything after the substitution
``m -> pi n^2 / q`` in ``n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .exact import (
    GaussianRational,
    I,
    NPoly,
    PiPoly,
    binom,
    falling_factorial,
    stirling2,
)

MAX_INDEX = 64

__all__ = [
    "MAX_INDEX",
    "FamilyRequest",
    "build",
    "touchard",
    "u_poly",
    "e_poly",
    "e_poly_product_form",
    "f_poly",
    "g_poly",
    "nu_poly",
    "substitute_m",
    "derivative_oracle",
]


def _check_index(i: int, cap: int | None = None):
    cap = MAX_INDEX if cap is None else cap
    if i > cap:
        raise ValueError(f"index {i} exceeds the configured cap {cap}")


@lru_cache(maxsize=None)
def touchard(n: int) -> NPoly:
    if n < 0:
        raise ValueError("touchard requires n >= 0")
    return NPoly("x", [stirling2(n, j) for j in range(n + 1)])


def _touchard_neg(n: int) -> NPoly:
    """T_n(-m) as a polynomial in m."""
    return NPoly("m", [(-1) ** j * stirling2(n, j) for j in range(n + 1)])


@lru_cache(maxsize=None)
def u_poly(k: int, a) -> NPoly:
    """U_k(a, m) = -i^k sum_{j<k} C(k-1, j) a^j T_{k-1-j}(-m), as a polynomial in m."""
    if k < 1:
        raise ValueError("u_poly requires k >= 1")
    _check_index(k)
    a = GaussianRational.coerce(a)
    acc = NPoly("m", [])
    aj = GaussianRational(1)
    for j in range(k):
        acc = acc + _touchard_neg(k - 1 - j).scale(aj * binom(k - 1, j))
        aj = aj * a
    return acc.scale(-(I ** k))


@lru_cache(maxsize=None)
def e_poly(m: int) -> NPoly:
    """E_m(l) = e^l d^m/dtau^m e^{-l/tau} at tau = 1.

    Closed form with Lah-number coefficients (-1)^{m+k} m!/k! C(m-1, k-1).
    """
    if m < 0:
        raise ValueError("e_poly requires m >= 0")
    _check_index(m)
    if m == 0:
        return NPoly("l", [1])
    coeffs = [0] * (m + 1)
    for k in range(1, m + 1):
        coeffs[k] = Fraction((-1) ** (m + k) * math.factorial(m) * binom(m - 1, k - 1),
                             math.factorial(k))
    return NPoly("l", coeffs)


def e_poly_product_form(m: int) -> NPoly:
    """The E_m closed form with the product m! k! in the coefficient.

    Kept for comparison only: it disagrees with the derivative definition
    from m = 2 on (see :func:`e_poly`).
    """
    if m < 0:
        raise ValueError("e_poly_product_form requires m >= 0")
    if m == 0:
        return NPoly("l", [1])
    coeffs = [0] * (m + 1)
    for k in range(1, m + 1):
        coeffs[k] = (-1) ** (m + k) * math.factorial(m) * math.factorial(k) * binom(m - 1, k - 1)
    return NPoly("l", coeffs)


@lru_cache(maxsize=None)
def f_poly(d: int, m: int) -> NPoly:
    """F_{d,m}(l) = sum_k (-1)^k C(m,k) (d+1/2)^{falling m-k} l^k."""
    if d not in (0, 1):
        raise ValueError("d must be 0 or 1")
    if m < 0:
        raise ValueError("f_poly requires m >= 0")
    _check_index(m)
    half = Fraction(2 * d + 1, 2)
    coeffs = [
        falling_factorial(half, m - k) * ((-1) ** k * binom(m, k)) for k in range(m + 1)
    ]
    return NPoly("l", coeffs)


def substitute_m(p: NPoly, q: int, extra_n_power: int = 0) -> NPoly:
    """Replace the variable of ``p`` by pi n^2 / q and multiply by n^extra_n_power."""
    if q < 1:
        raise ValueError("q must be positive")
    if extra_n_power < 0:
        raise ValueError("extra_n_power must be nonnegative")
    scale = PiPoly.monomial(1, Fraction(1, q))
    return p.compose_scaled(scale, 2, "n").shift(extra_n_power)


@lru_cache(maxsize=None)
def g_poly(m: int) -> NPoly:
    """G_m(n) = n E_m(pi n^2/3) - n F_{1,m}(pi n^2/3)."""
    if m < 1:
        raise ValueError("g_poly requires m >= 1")
    _check_index(m)
    return substitute_m(e_poly(m), 3, 1) - substitute_m(f_poly(1, m), 3, 1)


@lru_cache(maxsize=None)
def nu_poly(k: int, a=Fraction(3, 4), q: int = 3) -> NPoly:
    """n U_k(a, pi n^2 / q) as a polynomial in n."""
    return substitute_m(u_poly(k, a), q, 1)


def derivative_oracle(kind: str, d: int | None, m: int, cap: int | None = None) -> NPoly:
    """E_m or F_{d,m} by m-fold formal differentiation in tau, then tau = 1.

    The expression is carried as a Laurent polynomial p(tau, l) times
    exp(-l/tau) (kind "E") or tau^{d+1/2} exp(-l tau) (kind "F"); the
    exponential factor cancels the leading e^l after specialisation.
    """
    if m < 0:
        raise ValueError("m must be nonnegative")
    _check_index(m, cap)
    if kind == "E":
        c = None
    elif kind == "F":
        if d not in (0, 1):
            raise ValueError("d must be 0 or 1")
        c = Fraction(2 * d + 1, 2)
    else:
        raise ValueError(f"unknown kind {kind!r}")

    p: dict[tuple[int, int], Fraction] = {(0, 0): Fraction(1)}
    for _ in range(m):
        nxt: dict[tuple[int, int], Fraction] = {}

        def add(key, val):
            v = nxt.get(key, 0) + val
            if v:
                nxt[key] = v
            else:
                nxt.pop(key, None)

        for (a, b), coef in p.items():
            if kind == "E":
                # d/dtau tau^a l^b e^{-l/tau} = a tau^{a-1} l^b + tau^{a-2} l^{b+1}
                if a:
                    add((a - 1, b), a * coef)
                add((a - 2, b + 1), coef)
            else:
                # d/dtau tau^{a+c} l^b e^{-l tau} = (a+c) tau^{a-1} l^b - tau^a l^{b+1}
                add((a - 1, b), (a + c) * coef)
                add((a, b + 1), -coef)
        p = nxt

    deg = max((b for _, b in p), default=0)
    coeffs = [Fraction(0)] * (deg + 1)
    for (_, b), coef in p.items():
        coeffs[b] += coef
    return NPoly("l", coeffs)


@dataclass(frozen=True)
class FamilyRequest:
    """Which family member to build; validated on construction."""

    family: str
    index: int
    a: GaussianRational = GaussianRational(Fraction(3, 4))
    d: int = 1
    q: int = 3
    cap: int = MAX_INDEX

    def __post_init__(self):
        if self.family not in ("touchard", "U", "E", "F", "G"):
            raise ValueError(f"unknown family {self.family!r}")
        if self.d not in (0, 1):
            raise ValueError("d must be 0 or 1")
        if self.q < 1:
            raise ValueError("q must be >= 1")
        if not 0 <= self.index <= self.cap:
            raise ValueError(f"index must lie in [0, {self.cap}]")
        object.__setattr__(self, "a", GaussianRational.coerce(self.a))


def build(req: FamilyRequest) -> NPoly:
    if req.family == "touchard":
        return touchard(req.index)
    if req.family == "U":
        return u_poly(req.index, req.a)
    if req.family == "E":
        return e_poly(req.index)
    if req.family == "F":
        return f_poly(req.d, req.index)
    return g_poly(req.index)
