"""Dirichlet characters stored as exact root-of-unity exponents.

chi(n) = exp(2 pi i * exps[n mod q] / order) on units, 0 elsewhere.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Mapping

import mpmath

from .errors import BadDomain, NotMultiplicative, NotPrimitive
from .exact import GaussianRational

__all__ = [
    "DirichletCharacter",
    "chi3",
    "chi4",
    "from_table",
    "conjugate",
    "is_primitive",
    "gauss_omega",
    "builtin",
    "load_character",
    "parse_character",
    "resolve_character",
    "BUILTIN_NAMES",
]


def _units(q: int) -> list[int]:
    return [a for a in range(q) if math.gcd(a, q) == 1]


class DirichletCharacter:
    __slots__ = ("q", "order", "exps", "delta", "primitive", "name")

    def __init__(self, q: int, order: int, exps: Mapping[int, int], name: str | None = None):
        # validation lives in from_table(); this only normalises and freezes
        items = tuple(sorted((a % q, e % order) for a, e in exps.items()))
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "exps", dict(items))
        object.__setattr__(self, "name", name)
        minus_one = self.exps.get((q - 1) % q, 0)
        object.__setattr__(self, "delta", 0 if minus_one == 0 else 1)
        object.__setattr__(self, "primitive", _is_primitive(q, order, self.exps))

    def __setattr__(self, name, value):
        raise AttributeError("DirichletCharacter is immutable")

    def __eq__(self, other):
        if not isinstance(other, DirichletCharacter):
            return NotImplemented
        # compare values, not the chosen order of the root of unity
        lcm = self.order * other.order // math.gcd(self.order, other.order)
        return self.q == other.q and set(self.exps) == set(other.exps) and all(
            self.exps[a] * (lcm // self.order) % lcm == other.exps[a] * (lcm // other.order) % lcm
            for a in self.exps
        )

    def __hash__(self):
        return hash((self.q, frozenset(self.exps)))

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"<DirichletCharacter{label} q={self.q} order={self.order} delta={self.delta}>"

    def exponent(self, n: int) -> int | None:
        """Exponent of chi(n), or None when gcd(n, q) > 1."""
        return self.exps.get(n % self.q)

    def value(self, n: int):
        """Numeric chi(n) at the current mpmath precision."""
        e = self.exponent(n)
        if e is None:
            return mpmath.mpc(0)
        if e == 0:
            return mpmath.mpc(1)
        return mpmath.expjpi(mpmath.mpf(2 * e) / self.order)

    def value_exact(self, n: int) -> GaussianRational:
        """Exact chi(n); only available when the values lie in Q(i)."""
        e = self.exponent(n)
        if e is None:
            return GaussianRational(0)
        k, r = divmod(4 * e, self.order)
        if r:
            raise ValueError(f"chi({n}) is not in Q(i) (order {self.order})")
        return (GaussianRational(1), GaussianRational(0, 1),
                GaussianRational(-1), GaussianRational(0, -1))[k % 4]

    def is_principal(self) -> bool:
        return all(e == 0 for e in self.exps.values())

    def is_real(self) -> bool:
        return all(2 * e % self.order == 0 for e in self.exps.values())

    def value_sum_vanishes(self) -> bool:
        """Exact test of sum_{n mod q} chi(n) == 0 via reduction mod Phi_order."""
        counts = [0] * self.order
        for e in self.exps.values():
            counts[e] += 1
        return _is_zero_mod_cyclotomic(counts, self.order)


def _cyclotomic(n: int) -> list[int]:
    """Integer coefficients (low to high) of the n-th cyclotomic polynomial."""
    num = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            num = _polydiv_exact(num, _cyclotomic(d))
    return num


def _polydiv_exact(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1] // den[-1]
        out[i] = c
        for j, dj in enumerate(den):
            num[i + j] -= c * dj
    return out


def _is_zero_mod_cyclotomic(coeffs: list[int], n: int) -> bool:
    phi = _cyclotomic(n)
    rem = list(coeffs)
    deg = len(phi) - 1
    for i in range(len(rem) - 1, deg - 1, -1):
        c = rem[i]
        if c:
            for j, pj in enumerate(phi):
                rem[i - deg + j] -= c * pj
    return not any(rem[:deg])


def _divisors(q: int) -> list[int]:
    return [d for d in range(1, q + 1) if q % d == 0]


def _is_primitive(q: int, order: int, exps: Mapping[int, int]) -> bool:
    for d in _divisors(q):
        if d == q:
            continue
        # induced from modulus d iff trivial on units congruent to 1 mod d
        if all(exps[a] == 0 for a in exps if a % d == 1 % d):
            return False
    return True


def from_table(q: int, order: int, exps: Mapping[int, int], name: str | None = None) -> DirichletCharacter:
    """Validated character from a residue -> exponent table."""
    if q < 1:
        raise BadDomain("modulus must be >= 1")
    if order < 1:
        raise BadDomain("order must be >= 1")
    table = {}
    for a, e in exps.items():
        r = a % q
        if math.gcd(r, q) != 1:
            raise BadDomain(f"exponent given for residue {a}, which is not coprime to {q}")
        if r in table and table[r] != e % order:
            raise BadDomain(f"conflicting exponents for residue {r}")
        table[r] = e % order
    missing = [a for a in _units(q) if a not in table]
    if missing:
        raise BadDomain(f"no exponent for units {missing}")
    if table[1 % q] != 0:
        raise NotMultiplicative("chi(1) must be 1")
    for a in table:
        for b in table:
            if table[a * b % q] != (table[a] + table[b]) % order:
                raise NotMultiplicative(
                    f"chi({a}) chi({b}) != chi({a * b % q}) modulo {q}"
                )
    return DirichletCharacter(q, order, table, name)


def chi3() -> DirichletCharacter:
    return from_table(3, 2, {1: 0, 2: 1}, "chi3")


def chi4() -> DirichletCharacter:
    return from_table(4, 2, {1: 0, 3: 1}, "chi4")


_BUILTINS = {
    "chi3": chi3,
    "chi4": chi4,
    # quartic, odd: chi(2) = i
    "chi5": lambda: from_table(5, 4, {1: 0, 2: 1, 4: 2, 3: 3}, "chi5"),
    # cubic, even: chi(3) = exp(2 pi i / 3)
    "chi7": lambda: from_table(7, 3, {1: 0, 3: 1, 2: 2, 6: 0, 4: 1, 5: 2}, "chi7"),
    # real, even
    "chi5_real": lambda: from_table(5, 2, {1: 0, 4: 0, 2: 1, 3: 1}, "chi5_real"),
}
BUILTIN_NAMES = tuple(_BUILTINS)


def builtin(name: str) -> DirichletCharacter:
    try:
        return _BUILTINS[name]()
    except KeyError:
        raise KeyError(f"unknown character {name!r}; built-ins: {', '.join(_BUILTINS)}") from None


def conjugate(chi: DirichletCharacter) -> DirichletCharacter:
    name = None
    if chi.name:
        name = chi.name if chi.is_real() else f"conj({chi.name})"
    return DirichletCharacter(chi.q, chi.order, {a: -e for a, e in chi.exps.items()}, name)


def is_primitive(chi: DirichletCharacter) -> bool:
    return chi.primitive


def gauss_omega(chi: DirichletCharacter, prec: int = 256):
    """omega = sum_{k=1}^q chi(k) e^{2 pi i k/q} / (i^delta sqrt(q))."""
    if chi.q <= 1 or not chi.primitive:
        raise NotPrimitive(f"gauss_omega needs a primitive character with q > 1: {chi!r}")
    with mpmath.workprec(prec + 20):
        total = mpmath.mpc(0)
        for k in range(1, chi.q + 1):
            e = chi.exponent(k)
            if e is None:
                continue
            # chi(k) e^{2 pi i k/q} = exp(2 pi i (e/order + k/q))
            total += mpmath.expjpi(mpmath.mpf(2 * (e * chi.q + k * chi.order)) / (chi.order * chi.q))
        denom = mpmath.sqrt(chi.q) * (mpmath.mpc(0, 1) if chi.delta else 1)
        omega = total / denom
    with mpmath.workprec(prec):
        return +omega


# character files -----------------------------------------------------------


def parse_character(text: str, name: str | None = None) -> DirichletCharacter:
    """Parse ``key = value`` lines: ``modulus``, ``order`` and residue = exponent.

    Blank lines and ``#`` comments are ignored.
    """
    q = order = None
    exps: dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'key = value'")
        key, val = (s.strip() for s in line.split("=", 1))
        if key == "modulus":
            q = int(val)
        elif key == "order":
            order = int(val)
        else:
            try:
                exps[int(key)] = int(val)
            except ValueError:
                raise ValueError(f"line {lineno}: unknown key {key!r}") from None
    if q is None or order is None:
        raise ValueError("character file needs 'modulus' and 'order'")
    return from_table(q, order, exps, name)


def load_character(path) -> DirichletCharacter:
    path = Path(path)
    return parse_character(path.read_text(), path.stem)


def dump_character(chi: DirichletCharacter) -> str:
    lines = [f"modulus = {chi.q}", f"order = {chi.order}"]
    lines += [f"{a} = {e}" for a, e in sorted(chi.exps.items())]
    return "\n".join(lines) + "\n"


def resolve_character(name_or_path: str) -> DirichletCharacter:
    """A built-in name or a path to a character file."""
    if name_or_path in _BUILTINS:
        return builtin(name_or_path)
    p = Path(name_or_path)
    if p.exists():
        return load_character(p)
    raise KeyError(f"{name_or_path!r} is neither a built-in character nor a file")
