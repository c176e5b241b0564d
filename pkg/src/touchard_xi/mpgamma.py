"""Complete and incomplete gamma functions at configurable binary precision.

All functions take a target precision ``prec`` in bits and choose their own
working precision (reported in :class:`EvalReport`).  Error estimates are
heuristic tail bounds, not rigorous enclosures.

mpmath supplies the floating-point carrier (``mpf``/``mpc``); the series
themselves are implemented here.
"""

from __future__ import annotations

import math
import re
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

import mpmath

from .errors import DomainError, PoleError
from .exact import GaussianRational
from .families import touchard, u_poly

__all__ = [
    "EvalReport",
    "to_mpc",
    "parse_complex",
    "gamma_complex",
    "log_gamma",
    "lower_gamma",
    "upper_gamma",
    "asympt_gamma",
    "asympt_gamma_u",
]

LOG2E = 1.4426950408889634


@dataclass(frozen=True)
class EvalReport:
    value: Any
    terms_used: int
    est_error: Any
    working_prec: int


_TERM_SPLIT = re.compile(r"(?<![eE])(?=[+-])")


def _real_text(text: str):
    if "/" in text:
        num, den = text.split("/")
        return mpmath.mpf(num or "1") / int(den)
    return mpmath.mpf(text)


def parse_complex(text: str):
    """Parse ``"0.3+2i"``, ``"1/2"``, ``"1+i/3"``, ``"-i"`` at the current precision."""
    t = text.replace(" ", "").replace("j", "i").replace("*", "")
    if not t:
        raise ValueError("empty complex literal")
    re_part = mpmath.mpf(0)
    im_part = mpmath.mpf(0)
    try:
        for term in filter(None, _TERM_SPLIT.split(t)):
            sign = -1 if term[0] == "-" else 1
            body = term.lstrip("+-")
            if "i" in body:
                if body.count("i") != 1:
                    raise ValueError
                body = body.replace("i", "")
                if body.startswith("/"):
                    body = "1" + body
                im_part += sign * _real_text(body or "1")
            else:
                re_part += sign * _real_text(body)
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"cannot parse complex number {text!r}") from None
    return mpmath.mpc(re_part, im_part)


def to_mpc(x):
    """Coerce ints, Fractions, Gaussian rationals, strings and mpmath numbers."""
    if isinstance(x, GaussianRational):
        return x.to_mpc()
    if isinstance(x, Fraction):
        return mpmath.mpc(mpmath.mpf(x.numerator) / x.denominator)
    if isinstance(x, str):
        return parse_complex(x)
    return mpmath.mpc(x)


def _mag(x) -> float:
    """log2 magnitude bound; -inf for zero."""
    return mpmath.mag(x)


# Stirling coefficients B_{2j} / (2j (2j-1)), exact, shared -----------------

_BERN_LOCK = threading.Lock()
_STIRLING: list[Fraction] = []


def _stirling_coeff(j: int) -> Fraction:
    """B_{2j} / (2j(2j-1)) for j >= 1."""
    if j <= len(_STIRLING):
        return _STIRLING[j - 1]
    with _BERN_LOCK:
        while len(_STIRLING) < j:
            i = len(_STIRLING) + 1
            p, q = mpmath.bernfrac(2 * i)
            _STIRLING.append(Fraction(int(p), int(q) * 2 * i * (2 * i - 1)))
    return _STIRLING[j - 1]


def _loggamma_shifted(z):
    """log Gamma(z) for Re z > 0 at the current precision (principal branch)."""
    wp = mpmath.mp.prec
    x0 = max(10, wp // 8)
    r = max(0, math.ceil(x0 - float(z.real)))
    shift = mpmath.mpc(0)
    if r:
        prod = mpmath.mpc(1)
        argsum = 0.0
        for j in range(r):
            zj = z + j
            prod *= zj
            argsum += math.atan2(float(zj.imag), float(zj.real))
        lp = mpmath.log(prod)
        k = round((argsum - float(lp.imag)) / (2 * math.pi))
        shift = lp + mpmath.mpc(0, 2 * k) * mpmath.pi
    w = z + r
    s = (w - mpmath.mpf(0.5)) * mpmath.log(w) - w + mpmath.log(2 * mpmath.pi) / 2
    inv = 1 / w
    inv2 = inv * inv
    pw = inv
    eps = -(wp + 4)
    j = 0
    while True:
        j += 1
        c = _stirling_coeff(j)
        term = pw * (mpmath.mpf(c.numerator) / c.denominator)
        s += term
        if _mag(term) < eps:
            break
        pw *= inv2
    return s - shift


def _check_pole(z):
    if z.imag == 0 and z.real <= 0 and z.real == int(z.real):
        raise PoleError(f"Gamma has a pole at {z.real}")


def _gamma(z):
    """Gamma(z) at the current precision."""
    _check_pole(z)
    if z.real < 0.5:
        return mpmath.pi / (mpmath.sinpi(z) * _gamma(1 - z))
    return mpmath.exp(_loggamma_shifted(z))


def _gamma_guard(z) -> int:
    return 32 + 2 * max(1, int(abs(complex(z))) + 1).bit_length()


def gamma_complex(z, prec: int = 256):
    """Gamma(z) via the shifted Stirling series (reflection for Re z < 1/2)."""
    with mpmath.workprec(prec + 32):
        z = to_mpc(z)
    _check_pole(z)
    with mpmath.workprec(prec + _gamma_guard(z)):
        return _gamma(z)


def log_gamma(z, prec: int = 256):
    """Principal-branch log Gamma(z) for Re z > 0."""
    with mpmath.workprec(prec + 32):
        z = to_mpc(z)
    if z.real <= 0:
        raise DomainError("log_gamma is implemented for Re z > 0")
    with mpmath.workprec(prec + _gamma_guard(z)):
        return _loggamma_shifted(z)


# incomplete gamma -------------------------------------------------------------


def _check_args(w, m):
    if w.real <= 0:
        raise DomainError(f"incomplete gamma requires Re(w) > 0, got {w}")
    if m.real <= 0:
        raise DomainError(f"incomplete gamma requires Re(m) > 0, got {m}")


def _series_stable(w, m):
    """sum_{k>=0} m^k / (w (w+1) ... (w+k)), all denominators nonvanishing."""
    wp = mpmath.mp.prec
    am = float(abs(m))
    rew = float(w.real)
    term = 1 / w
    s = term
    top = _mag(term)
    k = 0
    while True:
        k += 1
        term = term * m / (w + k)
        s += term
        tm = _mag(term)
        top = max(top, tm, _mag(s))
        r = am / (rew + k + 1)
        if r < 0.5 and tm + math.log2(r / (1 - r)) < top - (wp + 16):
            return s, k + 1, top, tm + math.log2(r / (1 - r))


def _series_kummer(w, m):
    """sum_{k>=0} (-m)^k / (k! (w+k)); alternating, cancels like e^{|m|}."""
    wp = mpmath.mp.prec
    am = float(abs(m))
    c = mpmath.mpc(1)
    s = c / w
    top = _mag(s)
    k = 0
    while True:
        c = c * (-m) / (k + 1)
        k += 1
        term = c / (w + k)
        s += term
        tm = _mag(term)
        top = max(top, tm, _mag(s))
        r = am / (k + 1)
        if r < 0.5 and tm + math.log2(r / (1 - r)) < top - (wp + 16):
            return s, k + 1, top, tm + math.log2(r / (1 - r))


def _lower(w, m, prec: int, algo: str) -> EvalReport:
    """Lower incomplete gamma with guard bits raised until cancellation is absorbed."""
    am = float(abs(m))
    if algo == "stable":
        guard = 32 + math.ceil(LOG2E * (am - float(m.real)))
        series = _series_stable
    elif algo == "kummer":
        guard = 64 + math.ceil(LOG2E * am)
        series = _series_kummer
    else:
        raise ValueError(f"unknown algorithm {algo!r}")
    while True:
        wp = prec + guard
        with mpmath.workprec(wp):
            s, terms, top, tail = series(w, m)
            lost = top - _mag(s) if s else top + wp
            if lost <= guard - 24:
                if algo == "stable":
                    pref = mpmath.exp(w * mpmath.log(m) - m)
                else:
                    pref = mpmath.exp(w * mpmath.log(m))
                value = pref * s
                err = abs(pref) * (mpmath.ldexp(1, int(tail) + 1) + mpmath.ldexp(terms, int(top) - wp))
                return EvalReport(value, terms, err, wp)
        guard = int(lost) + 48


def lower_gamma(w, m, prec: int = 256, algo: str = "stable") -> EvalReport:
    """gamma(w, m) = int_0^m t^{w-1} e^{-t} dt.

    ``algo="stable"`` sums m^w e^{-m} sum_k m^k / (w)_{k+1}; ``"kummer"``
    sums the alternating series m^w sum_k (-m)^k / (k! (w+k)) at raised
    precision.  ``m`` may be complex with Re(m) > 0 (principal branch of m^w).
    """
    with mpmath.workprec(prec + 32):
        w, m = to_mpc(w), to_mpc(m)
    _check_args(w, m)
    return _lower(w, m, prec, algo)


def _upper_guard(w, m) -> int:
    rew, imw = float(w.real), float(w.imag)
    am = float(abs(m))
    argm = math.atan2(float(m.imag), float(m.real))
    log2_big = max(0.0, math.lgamma(rew) * LOG2E) + max(0.0, rew * math.log2(am + 1))
    log2_small = (rew - 1) * math.log2(am) - LOG2E * (float(m.real) + argm * imw)
    return 32 + max(0, math.ceil(log2_big - log2_small))


def _upper(w, m, prec: int, gamma_cache: dict | None = None) -> EvalReport:
    """Gamma(w) - gamma(w, m) with enough guard bits for the cancellation."""
    guard = _upper_guard(w, m)
    while True:
        wp = prec + guard
        cached = gamma_cache.get("value") if gamma_cache is not None else None
        if cached is not None and gamma_cache["prec"] >= wp:
            G = cached
        else:
            with mpmath.workprec(wp + _gamma_guard(w)):
                G = _gamma(w)
            if gamma_cache is not None:
                gamma_cache.update(value=G, prec=wp)
        lo = _lower(w, m, wp, "stable")
        with mpmath.workprec(wp):
            value = G - lo.value
            lost = max(_mag(G), _mag(lo.value)) - _mag(value) if value else wp
        if lost <= guard - 24:
            err = lo.est_error + mpmath.ldexp(abs(G), -wp)
            return EvalReport(value, lo.terms_used, err, wp)
        guard = int(lost) + 48


def upper_gamma(w, m, prec: int = 256) -> EvalReport:
    """Gamma(w, m) = Gamma(w) - gamma(w, m)."""
    with mpmath.workprec(prec + 32):
        w, m = to_mpc(w), to_mpc(m)
    _check_args(w, m)
    return _upper(w, m, prec)


# asymptotic expansions at w -> infinity ---------------------------------------


def asympt_gamma(w, m, L: int, prec: int = 256):
    """m^w e^{-m} sum_{l=1}^{L} (-1)^{l-1} T_{l-1}(-m) / w^l."""
    if L < 1:
        raise ValueError("L must be >= 1")
    with mpmath.workprec(prec + 32):
        w, m = to_mpc(w), to_mpc(m)
        s = mpmath.mpc(0)
        wl = mpmath.mpc(1)
        for l in range(1, L + 1):
            wl *= w
            s += (-1) ** (l - 1) * touchard(l - 1).evaluate(-m) / wl
        return mpmath.exp(w * mpmath.log(m) - m) * s


def asympt_gamma_u(a, b, m, K: int, prec: int = 256):
    """m^{a+ib} e^{-m} sum_{k=1}^{K} U_k(a, m) / b^k, with exact rational ``a``."""
    if K < 1:
        raise ValueError("K must be >= 1")
    a_exact = GaussianRational.coerce(a)
    with mpmath.workprec(prec + 32):
        b, m = to_mpc(b), to_mpc(m)
        s = mpmath.mpc(0)
        bk = mpmath.mpc(1)
        for k in range(1, K + 1):
            bk *= b
            s += u_poly(k, a_exact).evaluate(m) / bk
        w = a_exact.to_mpc() + mpmath.mpc(0, 1) * b
        return mpmath.exp(w * mpmath.log(m) - m) * s
