import math

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from touchard_xi.characters import (
    BUILTIN_NAMES,
    builtin,
    chi3,
    chi4,
    conjugate,
    dump_character,
    from_table,
    gauss_omega,
    is_primitive,
    load_character,
    parse_character,
    resolve_character,
)
from touchard_xi.errors import BadDomain, NotMultiplicative, NotPrimitive
from touchard_xi.exact import GaussianRational


def test_chi3_values():
    c = chi3()
    assert [c.value_exact(n) for n in range(7)] == [0, 1, -1, 0, 1, -1, 0]
    assert c.delta == 1 and c.is_real() and c.primitive


def test_chi4_values():
    c = chi4()
    assert [c.value_exact(n) for n in range(5)] == [0, 1, 0, -1, 0]
    assert c.delta == 1


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_builtins_are_primitive_with_unit_omega(name):
    c = builtin(name)
    assert is_primitive(c)
    omega = gauss_omega(c, 256)
    with mpmath.workprec(256):
        assert abs(abs(omega) - 1) < mpmath.ldexp(1, -232)


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_builtins_are_multiplicative_and_periodic(name):
    c = builtin(name)
    with mpmath.workprec(128):
        for a in range(1, 3 * c.q):
            assert abs(c.value(a + c.q) - c.value(a)) < mpmath.ldexp(1, -120)
            for b in range(1, 2 * c.q):
                assert abs(c.value(a * b) - c.value(a) * c.value(b)) < mpmath.ldexp(1, -120)


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_value_sum_vanishes_exactly(name):
    c = builtin(name)
    assert c.value_sum_vanishes()
    with mpmath.workprec(128):
        assert abs(mpmath.fsum(c.value(n) for n in range(c.q))) < mpmath.ldexp(1, -120)


def test_principal_sum_does_not_vanish():
    p = from_table(5, 1, {1: 0, 2: 0, 3: 0, 4: 0})
    assert p.is_principal() and not p.value_sum_vanishes()


def test_parities():
    assert builtin("chi5").delta == 1
    assert builtin("chi7").delta == 0
    assert builtin("chi5_real").delta == 0


def test_gauss_omega_chi3_is_one():
    omega = gauss_omega(chi3(), 256)
    with mpmath.workprec(256):
        assert abs(omega - 1) < mpmath.ldexp(1, -232)


def test_imprimitive_characters():
    induced = from_table(6, 2, {1: 0, 5: 1})  # chi3 lifted to modulus 6
    assert not induced.primitive
    principal = from_table(3, 2, {1: 0, 2: 0})
    assert not principal.primitive
    with pytest.raises(NotPrimitive):
        gauss_omega(induced)
    with pytest.raises(NotPrimitive):
        gauss_omega(principal)


def test_validation_errors():
    with pytest.raises(BadDomain):
        from_table(4, 2, {1: 0, 2: 1, 3: 1})
    with pytest.raises(BadDomain):
        from_table(5, 4, {1: 0, 2: 1})
    with pytest.raises(BadDomain):
        from_table(5, 4, {1: 0, 2: 1, 7: 2, 3: 3, 4: 2})
    with pytest.raises(NotMultiplicative):
        from_table(5, 4, {1: 0, 2: 1, 3: 1, 4: 2})
    with pytest.raises(NotMultiplicative):
        from_table(3, 2, {1: 1, 2: 0})
    with pytest.raises(BadDomain):
        from_table(0, 1, {})


def test_value_exact_rejects_non_gaussian_values():
    c = builtin("chi7")
    with pytest.raises(ValueError):
        c.value_exact(3)
    assert builtin("chi5").value_exact(2) == GaussianRational(0, 1)


def test_conjugate():
    c = builtin("chi5")
    cc = conjugate(c)
    with mpmath.workprec(64):
        for n in range(10):
            assert abs(cc.value(n) - mpmath.conj(c.value(n))) < 1e-15
    assert conjugate(cc) == c
    assert conjugate(chi3()) == chi3()


def test_equality_across_orders():
    a = from_table(3, 2, {1: 0, 2: 1})
    b = from_table(3, 4, {1: 0, 2: 2})
    assert a == b and hash(a) == hash(b)


def test_file_roundtrip(tmp_path):
    c = builtin("chi7")
    path = tmp_path / "cubic.chr"
    path.write_text("# cubic character\n" + dump_character(c))
    loaded = load_character(path)
    assert loaded == c and loaded.name == "cubic"
    assert resolve_character(str(path)) == c
    assert resolve_character("chi4") == chi4()
    with pytest.raises(KeyError):
        resolve_character("no-such-character")
    with pytest.raises(ValueError):
        parse_character("order = 2\n1 = 0\n")
    with pytest.raises(ValueError):
        parse_character("modulus = 3\norder = 2\nbogus line\n")


def _units(q):
    return [a for a in range(1, q) if math.gcd(a, q) == 1]


@given(st.sampled_from([5, 7, 11, 13]), st.data())
def test_characters_from_generator_are_multiplicative(p, data):
    # cyclic unit group: pick a generator and a target exponent
    g = next(x for x in range(2, p) if len({pow(x, k, p) for k in range(p - 1)}) == p - 1)
    j = data.draw(st.integers(0, p - 2))
    exps = {pow(g, k, p): (j * k) % (p - 1) for k in range(p - 1)}
    c = from_table(p, p - 1, exps)
    assert c.primitive == (j != 0)
    assert c.value_sum_vanishes() == (j != 0)
    if c.primitive:
        with mpmath.workprec(128):
            assert abs(abs(gauss_omega(c, 128)) - 1) < mpmath.ldexp(1, -100)
