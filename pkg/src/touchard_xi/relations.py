"""Exact linear algebra over Q(i) on the polynomial families.

Polynomials are vectorised over the monomials n^j pi^e that actually occur,
then reduced by plain Gaussian elimination (first nonzero pivot; exact
arithmetic needs no numeric pivoting).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Sequence

from .errors import MembershipFailure
from .exact import ZERO, GaussianRational, NPoly
from .families import e_poly, f_poly, g_poly, nu_poly, u_poly

log = logging.getLogger(__name__)

__all__ = [
    "LinearRelation",
    "SpanReport",
    "solve_in_basis",
    "span_dimension",
    "pair_span_dimension",
    "key_discovery_strong",
    "key_discovery_general",
    "invert_relations",
    "g_basis",
]


@dataclass(frozen=True)
class LinearRelation:
    """``target = sum(coefficients[i] * basis[i])``."""

    target_label: str
    basis_labels: tuple[str, ...]
    coefficients: tuple[GaussianRational, ...]

    def combine(self, basis: Sequence):
        acc = None
        for c, b in zip(self.coefficients, basis):
            term = _scale(b, c)
            acc = term if acc is None else _add(acc, term)
        return acc

    def holds_for(self, target, basis: Sequence) -> bool:
        return _sub(target, self.combine(basis)) == _zero_like(target)

    def nonzero_terms(self):
        return [(lab, c) for lab, c in zip(self.basis_labels, self.coefficients) if c]

    def __str__(self):
        text = ""
        for lab, c in self.nonzero_terms():
            if not text:
                text = f"{c}*{lab}"
            elif c.is_real() and c.re < 0:
                text += f" - {-c}*{lab}"
            else:
                text += f" + {c}*{lab}"
        return f"{self.target_label} = {text or '0'}"


@dataclass(frozen=True)
class SpanReport:
    generator_labels: tuple[str, ...]
    dimension: int
    pivot_indices: tuple[int, ...]


# polynomials and pairs of polynomials are both handled ---------------------


def _scale(p, c):
    if isinstance(p, tuple):
        return tuple(x.scale(c) for x in p)
    return p.scale(c)


def _add(p, q):
    if isinstance(p, tuple):
        return tuple(a + b for a, b in zip(p, q))
    return p + q


def _sub(p, q):
    if isinstance(p, tuple):
        return tuple(a - b for a, b in zip(p, q))
    return p - q


def _zero_like(p):
    if isinstance(p, tuple):
        return tuple(NPoly(x.var) for x in p)
    return NPoly(p.var)


def _vector(p) -> dict[Hashable, GaussianRational]:
    if isinstance(p, tuple):
        out = {}
        for slot, x in enumerate(p):
            for key, c in x.monomials().items():
                out[(slot,) + key] = c
        return out
    return p.monomials()


def _row_reduce(columns: list[dict], rhs: dict | None = None):
    """Reduce the matrix whose columns are sparse monomial vectors.

    Returns (rows, pivots, keys) where ``rows`` is the reduced matrix with an
    optional augmented last column and ``pivots`` lists (row, column) pairs.
    """
    keys = set()
    for col in columns:
        keys.update(col)
    if rhs is not None:
        keys.update(rhs)
    keys = sorted(keys)
    ncols = len(columns)
    rows = []
    for key in keys:
        row = [col.get(key, ZERO) for col in columns]
        if rhs is not None:
            row.append(rhs.get(key, ZERO))
        rows.append(row)

    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append((r, c))
        r += 1
    return rows, pivots, keys


def _solve(target, basis: Sequence):
    cols = [_vector(b) for b in basis]
    rows, pivots, _ = _row_reduce(cols, _vector(target))
    coeffs = [ZERO] * len(basis)
    for r, c in pivots:
        coeffs[c] = rows[r][-1]
    rank = len(pivots)
    consistent = all(not row[-1] for row in rows[rank:])
    return coeffs, consistent


def solve_in_basis(target, basis: Sequence) -> list[GaussianRational] | None:
    """Coefficients c with sum c_i basis_i == target, or None if target is
    outside the span.  Free coordinates (dependent basis) are set to zero.
    """
    if not basis:
        return [] if target == _zero_like(target) else None
    coeffs, consistent = _solve(target, basis)
    return coeffs if consistent else None


def span_dimension(generators: Sequence, labels: Sequence[str] | None = None) -> SpanReport:
    if not generators:
        raise ValueError("span_dimension needs at least one generator")
    labels = tuple(labels) if labels is not None else tuple(f"p{i}" for i in range(len(generators)))
    _, pivots, _ = _row_reduce([_vector(g) for g in generators])
    return SpanReport(labels, len(pivots), tuple(c for _, c in pivots))


def _require(target, basis, target_label, basis_labels) -> LinearRelation:
    coeffs, consistent = _solve(target, basis)
    rel = LinearRelation(target_label, tuple(basis_labels), tuple(coeffs))
    if not consistent:
        residual = _sub(target, rel.combine(basis))
        log.error("membership failure: %s not in span of %s; residual %s",
                  target_label, list(basis_labels), residual)
        raise MembershipFailure(
            f"{target_label} is not in the span of {', '.join(basis_labels)}; "
            f"residual: {residual if not isinstance(residual, tuple) else tuple(map(str, residual))}",
            residual,
        )
    return rel


def g_basis(k: int, parity: str) -> tuple[list[NPoly], list[str]]:
    """{G_1, G_3, ..., G_{2k-1}} (odd) or {G_2, ..., G_{2k}} (even)."""
    if parity == "odd":
        idx = [2 * j - 1 for j in range(1, k + 1)]
    elif parity == "even":
        idx = [2 * j for j in range(1, k + 1)]
    else:
        raise ValueError("basis must be 'odd' or 'even'")
    return [g_poly(i) for i in idx], [f"G_{i}" for i in idx]


def key_discovery_strong(k: int, basis: str = "odd") -> LinearRelation:
    """n U_{2k}(3/4, pi n^2/3) written in a G-basis of the span of G_1..G_{2k}."""
    if k < 1:
        raise ValueError("k must be >= 1")
    polys, labels = g_basis(k, basis)
    return _require(nu_poly(2 * k), polys, f"nU_{2 * k}", labels)


def invert_relations(max_m: int) -> list[LinearRelation]:
    """G_m for m = 1..max_m in the basis nU_2, nU_4, ..., nU_{2 ceil(m/2)}."""
    if max_m < 1:
        raise ValueError("max_m must be >= 1")
    out = []
    for m in range(1, max_m + 1):
        top = (m + 1) // 2
        basis = [nu_poly(2 * j) for j in range(1, top + 1)]
        labels = [f"nU_{2 * j}" for j in range(1, top + 1)]
        out.append(_require(g_poly(m), basis, f"G_{m}", labels))
    return out


def ef_pairs(d: int, m: int) -> tuple[list[tuple[NPoly, NPoly]], list[str]]:
    pairs = [(e_poly(j), f_poly(d, j)) for j in range(m + 1)]
    return pairs, [f"<E_{j},F_{d},{j}>" for j in range(m + 1)]


def pair_span_dimension(d: int, m: int) -> SpanReport:
    pairs, labels = ef_pairs(d, m)
    return span_dimension(pairs, labels)


def u_pair(d: int, k: int) -> tuple[NPoly, NPoly]:
    """<U_k(d/2 + 1/4, l), -(-1)^k U_k(d/2 + 1/4, l)>."""
    u = u_poly(k, Fraction(2 * d + 1, 4)).with_var("l")
    return (u, u.scale(-((-1) ** k)))


def key_discovery_general(d: int, k: int) -> LinearRelation:
    """Coefficients c_0..c_k with sum c_j <E_j, F_{d,j}> equal to the U-pair."""
    if d not in (0, 1):
        raise ValueError("d must be 0 or 1")
    if k < 1:
        raise ValueError("k must be >= 1")
    pairs, labels = ef_pairs(d, k)
    a = Fraction(2 * d + 1, 4)
    return _require(u_pair(d, k), pairs, f"<U_{k}({a},l),-(-1)^{k}U_{k}({a},l)>", labels)
