"""Theta functions, completed Dirichlet L-functions and identity residuals.

Conventions: for a primitive character chi mod q with parity delta,

    theta_chi(tau) = sum_{n in Z} chi(n) n^delta exp(-pi n^2 tau / q)
    xi_chi(s)      = (pi/q)^{-(s+delta)/2} Gamma((s+delta)/2) L_chi(s)

and xi_chi(s) = omega xi_{conj chi}(1 - s) with omega the normalised Gauss sum.
"""

from __future__ import annotations

import math
from fractions import Fraction

import mpmath

from .characters import DirichletCharacter, chi3, conjugate, gauss_omega
from .errors import DomainError, NotPrimitive
from .exact import NPoly
from .families import e_poly, f_poly, g_poly, u_poly
from .mpgamma import EvalReport, _gamma, _gamma_guard, _lower, _upper, log_gamma, to_mpc

__all__ = [
    "tail_cutoff",
    "theta_chi",
    "theta_fe_residual",
    "xi_lavrik",
    "xi3_critical",
    "xi_direct",
    "gamma_factor",
    "pair_residual",
    "g_residual",
    "identity_residual",
    "IDENTITY_KINDS",
]

LN2 = math.log(2)


def tail_cutoff(q: int, re_tau: float, prec: int) -> int:
    """Smallest N with exp(-pi N^2 Re(tau) / q) comfortably below 2^-(prec+16)."""
    return math.ceil(math.sqrt((prec + 16) * LN2 * q / (math.pi * re_tau))) + 1


def _require_primitive(chi: DirichletCharacter):
    if chi.q <= 1 or not chi.primitive:
        raise NotPrimitive(f"need a primitive character with q > 1, got {chi!r}")


def _theta(chi: DirichletCharacter, tau, wp: int) -> tuple:
    N = tail_cutoff(chi.q, float(tau.real), wp)
    c = -mpmath.pi * tau / chi.q
    s = mpmath.mpc(0)
    for n in range(1, N + 1):
        if chi.exponent(n) is None:
            continue
        term = chi.value(n) * mpmath.exp(c * n * n)
        if chi.delta:
            term *= n
        s += term
    # chi(-n) (-n)^delta = chi(n) n^delta, so the two-sided sum doubles
    s *= 2
    if chi.q == 1:
        s += 1
    return s, N


def theta_chi(chi: DirichletCharacter, tau, prec: int = 256) -> EvalReport:
    with mpmath.workprec(prec + 32):
        tau = to_mpc(tau)
    if tau.real <= 0:
        raise DomainError("theta requires Re(tau) > 0")
    wp = prec + 24
    with mpmath.workprec(wp):
        value, N = _theta(chi, tau, wp)
        err = mpmath.ldexp(N, -wp)
    return EvalReport(value, N, err, wp)


def theta_fe_residual(chi: DirichletCharacter, tau, prec: int = 256):
    """|theta_chi(1/tau) - omega tau^(delta+1/2) theta_{conj chi}(tau)|."""
    with mpmath.workprec(prec + 32):
        tau = to_mpc(tau)
        inv = 1 / tau
    if tau.real <= 0 or inv.real <= 0:
        raise DomainError("theta_fe_residual requires Re(tau) > 0")
    wp = prec + 24
    omega = gauss_omega(chi, wp)
    with mpmath.workprec(wp):
        left, _ = _theta(chi, inv, wp)
        right, _ = _theta(conjugate(chi), tau, wp)
        right *= omega * mpmath.power(tau, chi.delta + mpmath.mpf(0.5))
        return abs(left - right)


# completed L-functions ------------------------------------------------------


def _hurwitz_tail(chi: DirichletCharacter, s, N: int):
    """sum_{n > N} chi(n) n^{-s} through Hurwitz zeta values."""
    q = chi.q
    total = mpmath.mpc(0)
    for a in range(1, q + 1):
        if chi.exponent(N + a) is None:
            continue
        total += chi.value(N + a) * mpmath.zeta(s, mpmath.mpf(N + a) / q)
    return total * mpmath.power(q, -s)


def _lavrik_half(chi, s, w, tau_eff, variant, wp, N, gamma_cache):
    """sum_n chi(n) (pi/q)^{-w} G(w, pi n^2 tau_eff / q) n^{-s} for one side.

    ``G`` is the upper or lower incomplete gamma function.  The lower series
    converges only conditionally; past the Gaussian cutoff the incomplete
    gamma equals Gamma(w) to working precision, so the tail is summed
    exactly with Hurwitz zeta values.
    """
    base = mpmath.pi * tau_eff / chi.q
    total = mpmath.mpc(0)
    terms = 0
    for n in range(1, N + 1):
        if chi.exponent(n) is None:
            continue
        m = base * n * n
        if variant == "upper":
            rep = _upper(w, m, wp, gamma_cache)
        else:
            rep = _lower(w, m, wp, "stable")
        terms += rep.terms_used
        total += chi.value(n) * rep.value * mpmath.power(n, -s)
    if variant == "lower":
        if gamma_cache.get("value") is None or gamma_cache["prec"] < wp:
            with mpmath.workprec(wp + _gamma_guard(w)):
                gamma_cache.update(value=_gamma(w), prec=wp)
        total += gamma_cache["value"] * _hurwitz_tail(chi, s, N)
    return total * mpmath.power(mpmath.pi / chi.q, -w), terms


def _strip_check(s, delta):
    if (s.real + delta) <= 0 or (1 - s.real + delta) <= 0:
        raise DomainError(f"s = {s} lies outside the strip where both gamma arguments have Re > 0")


def xi_lavrik(chi: DirichletCharacter, s, tau=1, variant: str = "upper", prec: int = 256) -> EvalReport:
    """xi_chi(s) by the incomplete-gamma representation with free parameter tau.

    ``variant="upper"`` uses upper incomplete gamma values (rapidly
    convergent); ``variant="lower"`` uses lower incomplete gamma values with
    a Hurwitz-zeta tail.  The result does not depend on tau.
    """
    if variant not in ("upper", "lower"):
        raise ValueError(f"variant must be 'upper' or 'lower', got {variant!r}")
    _require_primitive(chi)
    with mpmath.workprec(prec + 32):
        s, tau = to_mpc(s), to_mpc(tau)
        inv = 1 / tau
    if tau.real <= 0:
        raise DomainError("tau must have positive real part")
    delta = chi.delta
    _strip_check(s, delta)
    wp = prec + 32 + math.ceil(1.15 * abs(float(s.imag)))
    omega = gauss_omega(chi, wp)
    with mpmath.workprec(wp):
        w1 = (s + delta) / 2
        w2 = (1 - s + delta) / 2
        N1 = tail_cutoff(chi.q, float(tau.real), wp)
        N2 = tail_cutoff(chi.q, float(inv.real), wp)
        first, t1 = _lavrik_half(chi, s, w1, tau, variant, wp, N1, {})
        second, t2 = _lavrik_half(conjugate(chi), 1 - s, w2, inv, variant, wp, N2, {})
        value = first + omega * second
        err = mpmath.ldexp(max(1, abs(value)), 16 - wp)
    return EvalReport(value, t1 + t2, err, wp)


def xi3_critical(t, prec: int = 256) -> EvalReport:
    """xi_3(1/2 + i t) as the sum of its two conjugate lower-gamma halves."""
    chi = chi3()
    with mpmath.workprec(prec + 32):
        t = to_mpc(t).real
    wp = prec + 32 + math.ceil(1.15 * abs(float(t)))
    with mpmath.workprec(wp):
        half = mpmath.mpf(0.5)
        N = tail_cutoff(3, 1.0, wp)
        plus_s = mpmath.mpc(half, t)
        minus_s = mpmath.mpc(half, -t)
        w_plus = mpmath.mpc(mpmath.mpf(0.75), t / 2)
        w_minus = mpmath.mpc(mpmath.mpf(0.75), -t / 2)
        one = mpmath.mpc(1)
        a, ta = _lavrik_half(chi, plus_s, w_plus, one, "lower", wp, N, {})
        b, tb = _lavrik_half(chi, minus_s, w_minus, one, "lower", wp, N, {})
        value = a + b
        err = mpmath.ldexp(max(1, abs(value)), 16 - wp)
    return EvalReport(value, ta + tb, err, wp)


def gamma_factor(chi: DirichletCharacter, s, prec: int = 256):
    """(pi/q)^{-(s+delta)/2} Gamma((s+delta)/2), evaluated through log Gamma."""
    with mpmath.workprec(prec + 32):
        s = to_mpc(s)
        w = (s + chi.delta) / 2
    if w.real <= 0:
        raise DomainError("gamma_factor is implemented for Re(s) > -delta")
    wp = prec + 32
    lg = log_gamma(w, wp)
    with mpmath.workprec(wp):
        return mpmath.exp(lg - w * mpmath.log(mpmath.pi / chi.q))


def xi_direct(chi: DirichletCharacter, s, prec: int = 256):
    """g_chi(s) L_chi(s) with L from Hurwitz zeta values (independent oracle)."""
    _require_primitive(chi)
    with mpmath.workprec(prec + 32):
        s = to_mpc(s)
    wp = prec + 32 + math.ceil(1.15 * abs(float(s.imag)))
    g = gamma_factor(chi, s, wp)
    with mpmath.workprec(wp):
        L = _hurwitz_tail(chi, s, 0)
        return g * L


# numeric residuals of the exact identities -------------------------------------

IDENTITY_KINDS = ("key", "U", "G", "EF")


def _coeff_floats(p: NPoly) -> list[float]:
    with mpmath.workprec(64):
        return [float(abs(c)) for c in p.specialize_pi()]


def _log2_bound(coeffs: list[float], x: float) -> float:
    total = sum(c * x ** j for j, c in enumerate(coeffs))
    return math.log2(total) if total > 0 else -math.inf


def _n_range(q: int, degree: int, coeffs_p, coeffs_q, delta: int, prec: int) -> tuple[int, float]:
    """Last n needed and the largest term magnitude (log2) over the sum."""
    log2e = 1 / LN2
    top = -math.inf
    N0 = tail_cutoff(q, 1.0, prec)
    n = 0
    while True:
        n += 1
        x = math.pi * n * n / q
        b = max(_log2_bound(coeffs_p, x), _log2_bound(coeffs_q, x))
        b += delta * math.log2(n) - x * log2e
        top = max(top, b)
        if n >= N0 and x > degree and b < -(prec + 40):
            return n, top


def pair_residual(P: NPoly, Q: NPoly, chi: DirichletCharacter, prec: int = 256):
    """|sum_n (chi(n) P(x_n) - omega conj(chi)(n) Q(x_n)) n^delta e^{-x_n}|, x_n = pi n^2/q."""
    _require_primitive(chi)
    cp, cq = _coeff_floats(P), _coeff_floats(Q)
    N, top = _n_range(chi.q, max(P.degree, Q.degree, 0), cp, cq, chi.delta, prec)
    wp = prec + 32 + max(0, math.ceil(top))
    omega = gauss_omega(chi, wp)
    conj = conjugate(chi)
    with mpmath.workprec(wp):
        pi = +mpmath.pi
        total = mpmath.mpc(0)
        for n in range(1, N + 1):
            if chi.exponent(n) is None:
                continue
            x = pi * n * n / chi.q
            term = chi.value(n) * P.evaluate(x, pi) - omega * conj.value(n) * Q.evaluate(x, pi)
            if chi.delta:
                term *= n
            total += term * mpmath.exp(-x)
        return abs(total)


def g_residual(G: NPoly, prec: int = 256):
    """|sum_n chi_3(n) G(n) e^{-pi n^2/3}| for a polynomial G in n."""
    chi = chi3()
    c = _coeff_floats(G)
    log2e = 1 / LN2
    top = -math.inf
    N0 = tail_cutoff(3, 1.0, prec)
    n = 0
    while True:
        n += 1
        x = math.pi * n * n / 3
        b = _log2_bound(c, n) - x * log2e
        top = max(top, b)
        if n >= N0 and n * n > G.degree and b < -(prec + 40):
            break
    wp = prec + 32 + max(0, math.ceil(top))
    with mpmath.workprec(wp):
        pi = +mpmath.pi
        total = mpmath.mpc(0)
        for k in range(1, n + 1):
            if chi.exponent(k) is None:
                continue
            total += chi.value(k) * G.evaluate(k, pi) * mpmath.exp(-pi * k * k / 3)
        return abs(total)


def _is_chi3(chi: DirichletCharacter) -> bool:
    return chi.q == 3 and chi == chi3()


def identity_residual(kind: str, index: int, chi: DirichletCharacter, prec: int = 256):
    """Numeric residual of one of the exact identities; zero up to rounding.

    ``key``: the pair <U_2k, -U_2k> at a = delta/2 + 1/4, halved so that for
    chi_3 it is exactly the single sum of n U_2k(3/4, pi n^2/3) e^{-pi n^2/3}.
    ``U``: the pair <U_k, -(-1)^k U_k> at the same a.
    ``G``: the chi_3 sum of G_m(n) e^{-pi n^2/3}; needs chi_3.
    ``EF``: the pair <E_m, F_{delta,m}>.
    """
    if kind not in IDENTITY_KINDS:
        raise ValueError(f"kind must be one of {IDENTITY_KINDS}, got {kind!r}")
    a = Fraction(2 * chi.delta + 1, 4)
    if kind == "key":
        if index < 1:
            raise ValueError("key index must be >= 1")
        u = u_poly(2 * index, a)
        return pair_residual(u, -u, chi, prec) / 2
    if kind == "U":
        if index < 1:
            raise ValueError("U index must be >= 1")
        u = u_poly(index, a)
        return pair_residual(u, u.scale(-((-1) ** index)), chi, prec)
    if kind == "G":
        if not _is_chi3(chi):
            raise ValueError("the G identities are specific to chi_3")
        return g_residual(g_poly(index), prec)
    if index < 0:
        raise ValueError("EF index must be >= 0")
    return pair_residual(e_poly(index), f_poly(chi.delta, index), chi, prec)
