import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from touchard_xi.golden import format_record, hexfloat, parse_hexfloat, read_golden, write_golden


@given(st.integers(-(2 ** 600), 2 ** 600), st.integers(-2000, 2000))
def test_hexfloat_round_trip(man, exp):
    with mpmath.workprec(700):
        x = mpmath.ldexp(man, exp)
    y = parse_hexfloat(hexfloat(x))
    assert y == x
    assert hexfloat(y) == hexfloat(x)


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_hexfloat_matches_python_floats(f):
    assert float(parse_hexfloat(hexfloat(f))) == f


def test_hexfloat_examples():
    assert hexfloat(0) == "0x0p0"
    assert hexfloat(1) == "0x1p0"
    assert hexfloat(-0.75) == "-0x3p-2"
    assert parse_hexfloat("0x0p0") == 0


def test_parse_is_independent_of_working_precision():
    with mpmath.workprec(10):
        x = parse_hexfloat("0x" + "f" * 100 + "p-400")
    assert x._mpf_[1].bit_length() == 400


@pytest.mark.parametrize("bad", ["1.5", "0x1", "zz", "0xgp1"])
def test_parse_hexfloat_rejects(bad):
    with pytest.raises(ValueError):
        parse_hexfloat(bad)


def test_special_values_are_rejected():
    with pytest.raises(ValueError):
        hexfloat(mpmath.inf)
    with pytest.raises(ValueError):
        hexfloat(mpmath.nan)


def test_record_file_round_trip(tmp_path):
    with mpmath.workprec(300):
        values = [("pi", 300, +mpmath.pi), ("z", 300, mpmath.mpc(1, -mpmath.e)), ("zero", 300, 0)]
    path = tmp_path / "g.txt"
    write_golden(path, values)
    got = read_golden(path)
    assert set(got) == {"pi", "z", "zero"}
    with mpmath.workprec(300):
        assert got["pi"].value == +mpmath.pi
        assert got["z"].value.imag == -mpmath.e
    assert got["zero"].value == 0


def test_reader_skips_comments_and_rejects_bad_lines(tmp_path):
    path = tmp_path / "g.txt"
    path.write_text("# comment\n\nx 53 0x1p0 0x0p0\n")
    assert read_golden(path)["x"].value == 1
    path.write_text("x 53 0x1p0\n")
    with pytest.raises(ValueError):
        read_golden(path)
    with pytest.raises(ValueError):
        format_record("a b", 53, 1)


def test_committed_golden_values(numeric_golden):
    # independent checks of the generator output
    with mpmath.workprec(576):
        assert abs(numeric_golden["gamma_3_4"].value - mpmath.gamma(mpmath.mpf(3) / 4)) < mpmath.ldexp(1, -500)
    assert float(numeric_golden["theta_chi3_tau1"].value.real) == pytest.approx(0.6411815579297277, rel=1e-15)
    assert float(numeric_golden["xi_chi3_s1_2"].value.real) == pytest.approx(0.5692300384422751, rel=1e-15)
    assert all(r.prec == 512 for r in numeric_golden.values())
