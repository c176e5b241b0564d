"""Exact arithmetic: Gaussian rationals, polynomials in a formal pi, and
univariate polynomials over those, plus the integer combinatorics used to
build the polynomial families.

Everything here is immutable.  Polynomials are kept in canonical form
(no trailing zero coefficients) so that ``==`` is a structural comparison.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator

import mpmath

from .errors import VariableMismatch

__all__ = [
    "GaussianRational",
    "PiPoly",
    "NPoly",
    "I",
    "ZERO",
    "ONE",
    "binom",
    "falling_factorial",
    "stirling2",
    "poly_arith",
]


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str, float)):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to Fraction")


class GaussianRational:
    """Exact complex number ``re + i*im`` with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", _frac(re))
        object.__setattr__(self, "im", _frac(im))

    @classmethod
    def _make(cls, re: Fraction, im: Fraction) -> "GaussianRational":
        obj = object.__new__(cls)
        object.__setattr__(obj, "re", re)
        object.__setattr__(obj, "im", im)
        return obj

    @classmethod
    def coerce(cls, x) -> "GaussianRational":
        if isinstance(x, cls):
            return x
        if isinstance(x, complex):
            return cls(Fraction(x.real), Fraction(x.imag))
        return cls._make(_frac(x), Fraction(0))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    def __reduce__(self):
        return (GaussianRational, (self.re, self.im))

    # arithmetic ---------------------------------------------------------

    def __add__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational._make(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational._make(-self.re, -self.im)

    def __sub__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational._make(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        if not o.im:
            return GaussianRational._make(self.re * o.re, self.im * o.re)
        if not self.im:
            return GaussianRational._make(self.re * o.re, self.re * o.im)
        return GaussianRational._make(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def conjugate(self) -> "GaussianRational":
        return GaussianRational._make(self.re, -self.im)

    def inverse(self) -> "GaussianRational":
        n = self.norm()
        if not n:
            raise ZeroDivisionError("inverse of zero")
        return GaussianRational._make(self.re / n, -self.im / n)

    def __truediv__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        if not o.im:
            if not o.re:
                raise ZeroDivisionError("division by zero")
            return GaussianRational._make(self.re / o.re, self.im / o.re)
        return self * o.inverse()

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result, base = ONE, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # comparison ---------------------------------------------------------

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def is_zero(self) -> bool:
        return not self

    def is_real(self) -> bool:
        return not self.im

    def __eq__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash(self.re) if not self.im else hash((self.re, self.im))

    # conversion ---------------------------------------------------------

    def to_mpc(self):
        """Value as an mpmath number at the current working precision."""
        re = mpmath.mpf(self.re.numerator) / self.re.denominator
        if not self.im:
            return mpmath.mpc(re)
        im = mpmath.mpf(self.im.numerator) / self.im.denominator
        return mpmath.mpc(re, im)

    def __repr__(self):
        return f"GaussianRational({str(self.re)!r}, {str(self.im)!r})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return "i" if self.im == 1 else "-i" if self.im == -1 else f"{self.im}*i"
        sign = "+" if self.im > 0 else "-"
        im = abs(self.im)
        im_s = "i" if im == 1 else f"{im}*i"
        return f"({self.re}{sign}{im_s})"


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)


def _trim(seq: Iterable) -> tuple:
    coeffs = list(seq)
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    return tuple(coeffs)


class PiPoly:
    """Polynomial in the formal symbol pi with Gaussian-rational coefficients.

    ``coeffs[e]`` is the coefficient of ``pi**e``.  The zero polynomial has
    an empty coefficient tuple.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        object.__setattr__(
            self, "coeffs", _trim(GaussianRational.coerce(c) for c in coeffs)
        )

    @classmethod
    def _make(cls, coeffs: tuple) -> "PiPoly":
        obj = object.__new__(cls)
        object.__setattr__(obj, "coeffs", coeffs)
        return obj

    @classmethod
    def coerce(cls, x) -> "PiPoly":
        if isinstance(x, cls):
            return x
        c = GaussianRational.coerce(x)
        return cls._make((c,) if c else ())

    @classmethod
    def monomial(cls, e: int, c=1) -> "PiPoly":
        c = GaussianRational.coerce(c)
        if not c:
            return cls._make(())
        return cls._make((ZERO,) * e + (c,))

    def __setattr__(self, name, value):
        raise AttributeError("PiPoly is immutable")

    def __reduce__(self):
        return (PiPoly, (self.coeffs,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __bool__(self):
        return bool(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def coeff(self, e: int) -> GaussianRational:
        return self.coeffs[e] if 0 <= e < len(self.coeffs) else ZERO

    def __add__(self, other):
        try:
            o = PiPoly.coerce(other)
        except TypeError:
            return NotImplemented
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for j, c in enumerate(b):
            out[j] = out[j] + c
        return PiPoly._make(_trim(out))

    __radd__ = __add__

    def __neg__(self):
        return PiPoly._make(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        try:
            o = PiPoly.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, PiPoly):
            if not self.coeffs or not other.coeffs:
                return PiPoly._make(())
            out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, a in enumerate(self.coeffs):
                if not a:
                    continue
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] = out[i + j] + a * b
            return PiPoly._make(_trim(out))
        try:
            c = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        if not c:
            return PiPoly._make(())
        return PiPoly._make(tuple(a * c for a in self.coeffs))

    __rmul__ = __mul__

    def __eq__(self, other):
        try:
            o = PiPoly.coerce(other)
        except TypeError:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self):
        return hash(("PiPoly", self.coeffs))

    def evaluate(self, pi=None):
        """Numeric value with ``pi`` substituted (defaults to mpmath's pi)."""
        if pi is None:
            pi = +mpmath.pi
        acc = mpmath.mpc(0)
        for c in reversed(self.coeffs):
            acc = acc * pi + c.to_mpc()
        return acc

    def __repr__(self):
        return f"PiPoly({[str(c) for c in self.coeffs]})"

    def __str__(self):
        parts = []
        for e in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[e]
            if c:
                parts.append(_format_term(c, e, "", 0))
        return _join_terms(parts)


def _format_term(c: GaussianRational, pi_power: int, var: str, power: int) -> str:
    factors = []
    if pi_power:
        factors.append("pi" if pi_power == 1 else f"pi^{pi_power}")
    if power:
        factors.append(var if power == 1 else f"{var}^{power}")
    if not factors:
        return str(c)
    if c == 1:
        return "*".join(factors)
    if c == -1:
        return "-" + "*".join(factors)
    return "*".join([str(c)] + factors)


def _join_terms(parts: list[str]) -> str:
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


class NPoly:
    """Univariate polynomial in ``var`` with :class:`PiPoly` coefficients."""

    __slots__ = ("var", "coeffs")

    def __init__(self, var: str, coeffs: Iterable = ()):
        object.__setattr__(self, "var", var)
        object.__setattr__(self, "coeffs", _trim(PiPoly.coerce(c) for c in coeffs))

    @classmethod
    def _make(cls, var: str, coeffs: tuple) -> "NPoly":
        obj = object.__new__(cls)
        object.__setattr__(obj, "var", var)
        object.__setattr__(obj, "coeffs", coeffs)
        return obj

    @classmethod
    def constant(cls, var: str, c) -> "NPoly":
        return cls(var, [c])

    @classmethod
    def monomial(cls, var: str, power: int, c=1, pi_power: int = 0) -> "NPoly":
        p = PiPoly.monomial(pi_power, c)
        if not p:
            return cls._make(var, ())
        return cls._make(var, (PiPoly._make(()),) * power + (p,))

    @classmethod
    def from_monomials(cls, var: str, terms: dict) -> "NPoly":
        """Build from ``{(var_power, pi_power): coefficient}``."""
        if not terms:
            return cls._make(var, ())
        deg = max(j for j, _ in terms)
        rows: list[dict] = [dict() for _ in range(deg + 1)]
        for (j, e), c in terms.items():
            rows[j][e] = rows[j].get(e, ZERO) + GaussianRational.coerce(c)
        coeffs = []
        for row in rows:
            if not row:
                coeffs.append(PiPoly._make(()))
                continue
            top = max(row)
            coeffs.append(PiPoly([row.get(e, ZERO) for e in range(top + 1)]))
        return cls(var, coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("NPoly is immutable")

    def __reduce__(self):
        return (NPoly, (self.var, self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __bool__(self):
        return bool(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, j: int) -> PiPoly:
        return self.coeffs[j] if 0 <= j < len(self.coeffs) else PiPoly._make(())

    def monomials(self) -> dict:
        """Nonzero coefficients keyed by ``(var_power, pi_power)``."""
        out = {}
        for j, p in enumerate(self.coeffs):
            for e, c in enumerate(p.coeffs):
                if c:
                    out[(j, e)] = c
        return out

    def terms(self) -> Iterator[tuple[int, int, GaussianRational]]:
        for (j, e), c in sorted(self.monomials().items(), reverse=True):
            yield j, e, c

    def with_var(self, var: str) -> "NPoly":
        return NPoly._make(var, self.coeffs)

    def _check(self, other: "NPoly"):
        if self.var != other.var and self.coeffs and other.coeffs:
            raise VariableMismatch(
                f"polynomials in different variables: {self.var!r} vs {other.var!r}"
            )

    def _lift(self, other) -> "NPoly":
        if isinstance(other, NPoly):
            self._check(other)
            return other
        return NPoly._make(self.var, (PiPoly.coerce(other),) if other else ())

    def __add__(self, other):
        try:
            o = self._lift(other)
        except TypeError:
            return NotImplemented
        var = self.var if self.coeffs else o.var
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for j, c in enumerate(b):
            out[j] = out[j] + c
        return NPoly._make(var, _trim(out))

    __radd__ = __add__

    def __neg__(self):
        return NPoly._make(self.var, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        try:
            o = self._lift(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, NPoly):
            self._check(other)
            if not self.coeffs or not other.coeffs:
                return NPoly._make(self.var, ())
            out = [PiPoly._make(())] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, a in enumerate(self.coeffs):
                if not a:
                    continue
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] = out[i + j] + a * b
            return NPoly._make(self.var, _trim(out))
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, c) -> "NPoly":
        """Multiply by a constant (GaussianRational, PiPoly, int or Fraction)."""
        if not isinstance(c, PiPoly):
            try:
                c = GaussianRational.coerce(c)
            except TypeError:
                return NotImplemented
        return NPoly._make(self.var, _trim(a * c for a in self.coeffs))

    def shift(self, k: int) -> "NPoly":
        """Multiply by ``var**k``."""
        if not self.coeffs or k == 0:
            return self
        return NPoly._make(self.var, (PiPoly._make(()),) * k + self.coeffs)

    def compose_scaled(self, c: PiPoly, power: int, var: str) -> "NPoly":
        """Substitute ``self.var -> c * var**power``."""
        out: dict = {}
        cj = PiPoly.coerce(1)
        for j, p in enumerate(self.coeffs):
            if p:
                out[j * power] = p * cj
            cj = cj * c
        deg = max(out) if out else -1
        zero = PiPoly._make(())
        return NPoly._make(var, _trim(out.get(j, zero) for j in range(deg + 1)))

    def __eq__(self, other):
        if isinstance(other, NPoly):
            if not self.coeffs and not other.coeffs:
                return True
            return self.var == other.var and self.coeffs == other.coeffs
        try:
            return self == self._lift(other)
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash(("NPoly", self.var if self.coeffs else "", self.coeffs))

    def only_powers_of_parity(self, parity: int) -> bool:
        return all(not p or j % 2 == parity for j, p in enumerate(self.coeffs))

    # evaluation ---------------------------------------------------------

    def eval_exact(self, x) -> PiPoly:
        """Exact value at a Gaussian-rational (or PiPoly) argument, as a PiPoly."""
        if not isinstance(x, PiPoly):
            x = PiPoly.coerce(x)
        acc = PiPoly._make(())
        for p in reversed(self.coeffs):
            acc = acc * x + p
        return acc

    def specialize_pi(self, pi=None) -> list:
        """Numeric coefficient list with ``pi`` substituted."""
        if pi is None:
            pi = +mpmath.pi
        return [p.evaluate(pi) for p in self.coeffs]

    def evaluate(self, x, pi=None):
        """Numeric value at ``x`` (Horner on the pi-specialised coefficients)."""
        acc = mpmath.mpc(0)
        for c in reversed(self.specialize_pi(pi)):
            acc = acc * x + c
        return acc

    def __repr__(self):
        return f"NPoly({self.var!r}, {str(self)!r})"

    def __str__(self):
        return _join_terms([_format_term(c, e, self.var, j) for j, e, c in self.terms()])


# combinatorics ----------------------------------------------------------------


def binom(n: int, k: int) -> int:
    if n < 0:
        raise ValueError("binom requires n >= 0")
    if k < 0 or k > n:
        return 0
    return _binom(n, k)


@lru_cache(maxsize=None)
def _binom(n: int, k: int) -> int:
    from math import comb

    return comb(n, k)


def falling_factorial(x, j: int) -> GaussianRational:
    """``x (x-1) ... (x-j+1)``; the empty product (j = 0) is 1."""
    if j < 0:
        raise ValueError("falling_factorial requires j >= 0")
    x = GaussianRational.coerce(x)
    out = ONE
    for i in range(j):
        out = out * (x - i)
    return out


@lru_cache(maxsize=None)
def stirling2(l: int, j: int) -> int:
    """Stirling number of the second kind by the triangular recurrence."""
    if l < 0 or j < 0:
        raise ValueError("stirling2 requires nonnegative arguments")
    if l == 0 or j == 0:
        return 1 if l == j else 0
    if j > l:
        return 0
    # iterate rows to avoid deep recursion for large l
    row = [1]  # S(0, .)
    for n in range(1, l + 1):
        new = [0] * (min(n, j) + 1)
        for k in range(1, len(new)):
            prev_k = row[k] if k < len(row) else 0
            new[k] = k * prev_k + row[k - 1]
        row = new
    return row[j]


def poly_arith(a: NPoly, b, op: str) -> NPoly:
    """Ring operation ``op`` in {"add", "mul", "scale"} on NPoly operands."""
    if op == "add":
        if isinstance(b, NPoly):
            a._check(b)
        return a + b
    if op == "mul":
        if isinstance(b, NPoly):
            return a * b
        return a.scale(b)
    if op == "scale":
        return a.scale(b)
    raise ValueError(f"unknown op {op!r}")
