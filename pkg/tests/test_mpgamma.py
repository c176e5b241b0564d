import threading
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from touchard_xi import mpgamma
from touchard_xi.errors import DomainError, PoleError
from touchard_xi.mpgamma import (
    asympt_gamma,
    asympt_gamma_u,
    gamma_complex,
    log_gamma,
    lower_gamma,
    parse_complex,
    upper_gamma,
)

P = 256


def rel_err(a, b, prec=P + 64):
    with mpmath.workprec(prec):
        return abs(a - b) / abs(b)


def ref_lower(w, m, prec=P + 64):
    with mpmath.workprec(prec):
        return mpmath.gammainc(mpmath.mpc(w), 0, mpmath.mpc(m))


def ref_upper(w, m, prec=P + 64):
    with mpmath.workprec(prec):
        return mpmath.gammainc(mpmath.mpc(w), mpmath.mpc(m))


# complete gamma -------------------------------------------------------------------


def test_gamma_one():
    with mpmath.workprec(P):
        assert abs(gamma_complex(1, P) - 1) < mpmath.ldexp(1, 16 - P)


def test_gamma_three_quarters_against_golden(numeric_golden):
    ref = numeric_golden["gamma_3_4"].value
    assert rel_err(gamma_complex(Fraction(3, 4), P), ref) < mpmath.ldexp(1, 16 - P)


def test_gamma_vertical_growth():
    # |Gamma(a + i T)| ~ sqrt(2 pi) T^{a - 1/2} e^{-pi T / 2}; t = 40 so T = 20
    T = 20
    with mpmath.workprec(P):
        g = abs(gamma_complex(mpmath.mpc(0.75, T), P))
        approx = mpmath.sqrt(2 * mpmath.pi) * mpmath.mpf(T) ** 0.25 * mpmath.exp(-mpmath.pi * T / 2)
        assert abs(g / approx - 1) < 0.02


@pytest.mark.parametrize("z", ["1/2", "0.3+50i", "-3.5+2i", "100.5-300i", "1e-5", "-0.5", "7"])
def test_gamma_against_mpmath(z):
    with mpmath.workprec(P + 64):
        zz = parse_complex(z)
        ref = mpmath.gamma(zz)
    assert rel_err(gamma_complex(z, P), ref) < mpmath.ldexp(1, 16 - P)


def test_gamma_factorials():
    import math

    with mpmath.workprec(P):
        for n in range(1, 30):
            assert gamma_complex(n, P) == pytest.approx(math.factorial(n - 1), rel=1e-60)


@pytest.mark.parametrize("z", [0, -1, -7])
def test_gamma_poles(z):
    with pytest.raises(PoleError):
        gamma_complex(z, P)


@given(st.floats(0.05, 60), st.floats(-80, 80))
def test_log_gamma_principal_branch(x, y):
    z = mpmath.mpc(x, y)
    with mpmath.workprec(P + 64):
        ref = mpmath.loggamma(z)
    with mpmath.workprec(P + 64):
        assert abs(log_gamma(z, P) - ref) < mpmath.ldexp(1, 20 - P) * max(1, abs(ref))


def test_log_gamma_domain():
    with pytest.raises(DomainError):
        log_gamma(-1.5, P)


@given(st.floats(0.05, 30), st.floats(-40, 40))
def test_recurrence(x, y):
    z = mpmath.mpc(x, y)
    with mpmath.workprec(P):
        assert rel_err(gamma_complex(z + 1, P), z * gamma_complex(z, P)) < mpmath.ldexp(1, 20 - P)


def test_stirling_cache_concurrent_initialisation(monkeypatch):
    monkeypatch.setattr(mpgamma, "_STIRLING", [])
    results = []

    def work():
        results.append(tuple(mpgamma._stirling_coeff(j) for j in range(1, 60)))

    threads = [threading.Thread(target=work) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert len(set(results)) == 1
    assert results[0][0] == Fraction(1, 12)
    assert len(mpgamma._STIRLING) == 59


# incomplete gamma ------------------------------------------------------------------


def test_lower_gamma_closed_form():
    r = lower_gamma(1, 1, P)
    with mpmath.workprec(P):
        assert rel_err(r.value, 1 - mpmath.exp(-1)) < mpmath.ldexp(1, 16 - P)
    assert r.terms_used > 0 and r.working_prec >= P


def test_lower_gamma_large_m_tends_to_gamma():
    with mpmath.workprec(P):
        g = gamma_complex(Fraction(3, 4), P)
        assert abs(lower_gamma(Fraction(3, 4), 50, P).value - g) < mpmath.ldexp(1, -40)


def test_lower_gamma_small_m():
    with mpmath.workprec(P):
        assert abs(lower_gamma(Fraction(3, 4), mpmath.ldexp(1, -60), P).value) < mpmath.ldexp(1, -40)


@pytest.mark.parametrize("algo", ["stable", "kummer"])
@pytest.mark.parametrize("w,m", [(1, 1), ("0.75", 50), ("0.75+20i", 900), ("0.25-40i", "3.3"), (15, "0.5")])
def test_lower_gamma_against_mpmath(algo, w, m):
    r = lower_gamma(w, m, P, algo)
    with mpmath.workprec(P + 64):
        ref = ref_lower(parse_complex(str(w)), parse_complex(str(m)))
        err = abs(r.value - ref)
        assert err / abs(ref) < mpmath.ldexp(1, 16 - P)
        # the reported truncation bound is not wildly optimistic
        assert err <= r.est_error + mpmath.ldexp(abs(ref), 16 - P)


def test_upper_gamma_closed_form_and_tail():
    with mpmath.workprec(P):
        assert rel_err(upper_gamma(1, 1, P).value, mpmath.exp(-1)) < mpmath.ldexp(1, 16 - P)
        assert abs(upper_gamma(Fraction(3, 4), 30, P).value) < mpmath.mpf("1e-12")


@pytest.mark.parametrize("w,m", [("0.75", 30), ("0.75+20i", 900), ("0.25-40i", "3.3"), (15, "0.5"), ("2+5i", "1+2i")])
def test_upper_gamma_against_mpmath(w, m):
    with mpmath.workprec(P + 64):
        ref = ref_upper(parse_complex(str(w)), parse_complex(str(m)))
    assert rel_err(upper_gamma(w, m, P).value, ref) < mpmath.ldexp(1, 16 - P)


@given(st.floats(0.01, 20), st.floats(-30, 30), st.floats(0.001, 100))
def test_complement_identity(rew, imw, m):
    w = mpmath.mpc(rew, imw)
    lo = lower_gamma(w, m, P).value
    up = upper_gamma(w, m, P).value
    g = gamma_complex(w, P)
    with mpmath.workprec(P + 32):
        # each summand is rounded relative to itself, so the scale is the largest one
        scale = max(abs(lo), abs(up), abs(g))
        assert abs(lo + up - g) <= mpmath.ldexp(scale, 12 - P)


@given(st.floats(0.01, 20), st.floats(-30, 30), st.floats(0.001, 100))
def test_stable_and_kummer_agree(rew, imw, m):
    w = mpmath.mpc(rew, imw)
    a = lower_gamma(w, m, P, "stable").value
    b = lower_gamma(w, m, P, "kummer").value
    with mpmath.workprec(P + 32):
        assert abs(a - b) <= mpmath.ldexp(abs(b), 16 - P)


def test_kummer_uses_extra_guard_bits():
    assert lower_gamma(1, 500, 128, "kummer").working_prec >= 128 + 64 + 700
    assert lower_gamma(1, 500, 128, "stable").working_prec < 128 + 100


@pytest.mark.parametrize("bad", [(0, 1), (-1, 1), ("-0.5+3i", 2), (1, 0), (1, -2)])
def test_incomplete_gamma_domain(bad):
    w, m = bad
    with pytest.raises(DomainError):
        lower_gamma(w, m, 64)
    with pytest.raises(DomainError):
        upper_gamma(w, m, 64)


def test_unknown_algorithm():
    with pytest.raises(ValueError):
        lower_gamma(1, 1, 64, "bogus")


# asymptotic forms ----------------------------------------------------------------------


def test_asymptotic_partial_sums_improve_while_l_small():
    w = mpmath.mpc(0.75, 200)
    ref = lower_gamma(w, 2, P).value
    with mpmath.workprec(P):
        errs = [abs(asympt_gamma(w, 2, L, P) - ref) for L in range(1, 8)]
    assert all(a > b for a, b in zip(errs, errs[1:]))


def test_asymptotic_first_term_large_real_w():
    w = 2 ** 20
    ref = lower_gamma(w, 1, P).value
    with mpmath.workprec(P):
        assert abs(asympt_gamma(w, 1, 1, P) / ref - 1) < mpmath.ldexp(1, -18)


def test_u_form_matches_l_form():
    # with w = a + i b the two expansions share their leading behaviour
    a, b, m = Fraction(3, 4), 300, mpmath.mpf(1)
    ref = lower_gamma(mpmath.mpc(0.75, b), m, P).value
    with mpmath.workprec(P):
        e_u = abs(asympt_gamma_u(a, b, m, 6, P) - ref)
        e_l = abs(asympt_gamma(mpmath.mpc(0.75, b), m, 6, P) - ref)
        assert e_u < mpmath.mpf(b) ** -6 * abs(ref) * 100
        assert e_l < mpmath.mpf(b) ** -6 * abs(ref) * 100


def test_u_form_error_order():
    a, m = Fraction(3, 4), None
    with mpmath.workprec(P):
        m = mpmath.pi / 3
    for K in (2, 4):
        errs = []
        for b in (64, 128):
            w = mpmath.mpc(0.75, b)
            ref = lower_gamma(w, m, P).value
            with mpmath.workprec(P):
                pref = abs(mpmath.exp(w * mpmath.log(m) - m))
                errs.append(abs(asympt_gamma_u(a, b, m, K, P) - ref) / pref)
        ratio = float(mpmath.log(errs[0] / errs[1], 2))
        assert K <= ratio <= K + 2


def test_asymptotic_argument_checks():
    with pytest.raises(ValueError):
        asympt_gamma(10, 1, 0)
    with pytest.raises(ValueError):
        asympt_gamma_u(Fraction(3, 4), 10, 1, 0)


@pytest.mark.parametrize("text,expected", [
    ("0.3+2i", (0.3, 2.0)), ("1/2", (0.5, 0.0)), ("-i", (0.0, -1.0)),
    ("1+i/3", (1.0, 1 / 3)), ("2.5e-3-4i", (0.0025, -4.0)), ("-2j", (0.0, -2.0)),
])
def test_parse_complex(text, expected):
    z = parse_complex(text)
    assert complex(z) == pytest.approx(complex(*expected))


def test_parse_complex_is_exact_at_working_precision():
    with mpmath.workprec(300):
        z = parse_complex("0.3")
        assert abs(z.real - mpmath.mpf(3) / 10) < mpmath.ldexp(1, -298)


@pytest.mark.parametrize("text", ["", "abc", "1+ii", "1/0"])
def test_parse_complex_rejects(text):
    with pytest.raises(ValueError):
        parse_complex(text)
