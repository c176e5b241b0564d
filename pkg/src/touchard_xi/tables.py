"""Deterministic serialisation of the polynomial and relation tables.

Tables:
  1  U_{2k}(3/4, pi n^2/3), k = 1..rows
  2  G_m(n), m = 1..rows
  3  n U_{2k} in the odd basis G_1, G_3, ..., G_{2k-1}
  4  n U_{2k} in the even basis G_2, G_4, ..., G_{2k}
  5  G_m in the basis n U_2, n U_4, ...

``max_index`` is the number of rows.  Output depends only on the arguments,
so repeated runs are byte-identical.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction

from .exact import GaussianRational, NPoly
from .families import MAX_INDEX, g_poly, substitute_m, u_poly
from .relations import LinearRelation, invert_relations, key_discovery_strong

__all__ = ["TABLE_IDS", "table_rows", "emit_tables", "FORMATS"]

TABLE_IDS = (1, 2, 3, 4, 5)
FORMATS = ("csv", "json", "tex")
# table 1 at row r needs U_{2r}
_ROW_CAP = {1: MAX_INDEX // 2, 2: MAX_INDEX, 3: MAX_INDEX // 2, 4: MAX_INDEX // 2, 5: MAX_INDEX}


def table_rows(which: int, max_index: int) -> list:
    """(label, NPoly) pairs for tables 1-2, LinearRelation objects for 3-5."""
    if which not in TABLE_IDS:
        raise ValueError(f"table must be one of {TABLE_IDS}")
    if not 1 <= max_index <= _ROW_CAP[which]:
        raise ValueError(f"table {which} supports 1..{_ROW_CAP[which]} rows")
    if which == 1:
        return [(f"U_{2 * k}", substitute_m(u_poly(2 * k, Fraction(3, 4)), 3))
                for k in range(1, max_index + 1)]
    if which == 2:
        return [(f"G_{m}", g_poly(m)) for m in range(1, max_index + 1)]
    if which == 3:
        return [key_discovery_strong(k, "odd") for k in range(1, max_index + 1)]
    if which == 4:
        return [key_discovery_strong(k, "even") for k in range(1, max_index + 1)]
    return invert_relations(max_index)


def _coeff_text(c: GaussianRational) -> str:
    return str(c).strip("()")


def _tex_rational(x: Fraction) -> str:
    if x.denominator == 1:
        return str(abs(x.numerator))
    return f"\\frac{{{abs(x.numerator)}}}{{{x.denominator}}}"


def _tex_coeff(c: GaussianRational) -> tuple[str, str]:
    """(sign, body) for a coefficient; complex values are parenthesised."""
    if c.im:
        return "+", f"\\left({_coeff_text(c).replace('*i', 'i')}\\right)"
    sign = "-" if c.re < 0 else "+"
    return sign, _tex_rational(c.re)


def _tex_monomial(c: GaussianRational, pi_power: int, var: str, power: int) -> tuple[str, str]:
    sign, body = _tex_coeff(c)
    factors = []
    if pi_power:
        factors.append("\\pi " if pi_power == 1 else f"\\pi^{{{pi_power}}}")
    if power:
        factors.append(var if power == 1 else f"{var}^{{{power}}}")
    if factors and body == "1":
        body = ""
    return sign, body + "".join(factors) if factors else body


def _tex_join(items: list[tuple[str, str]]) -> str:
    if not items:
        return "0"
    first_sign, first = items[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in items[1:]:
        out += f" {sign} {body}"
    return out


def _tex_label(label: str) -> str:
    head, _, idx = label.rpartition("_")
    return f"{head}_{{{idx}}}"


def _poly_tex(p: NPoly) -> str:
    return _tex_join([_tex_monomial(c, e, p.var, j) for j, e, c in p.terms()])


def _relation_tex(rel: LinearRelation) -> str:
    items = []
    for lab, c in rel.nonzero_terms():
        sign, body = _tex_coeff(c)
        items.append((sign, (body + " " if body != "1" else "") + _tex_label(lab)))
    return f"{_tex_label(rel.target_label)} = {_tex_join(items)}"


def emit_tables(which: int, max_index: int, fmt: str = "csv") -> str:
    """Serialise a table as CSV, JSON or a TeX tabular fragment."""
    if fmt not in FORMATS:
        raise ValueError(f"format must be one of {FORMATS}")
    rows = table_rows(which, max_index)
    poly_table = which in (1, 2)

    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if poly_table:
            w.writerow(["label", "n_power", "pi_power", "coefficient"])
            for label, p in rows:
                for j, e, c in p.terms():
                    w.writerow([label, j, e, _coeff_text(c)])
        else:
            w.writerow(["target", "basis", "coefficient"])
            for rel in rows:
                for lab, c in rel.nonzero_terms():
                    w.writerow([rel.target_label, lab, _coeff_text(c)])
        return buf.getvalue()

    if fmt == "json":
        if poly_table:
            body = [
                {
                    "label": label,
                    "polynomial": str(p),
                    "terms": [
                        {"n_power": j, "pi_power": e, "coefficient": _coeff_text(c)}
                        for j, e, c in p.terms()
                    ],
                }
                for label, p in rows
            ]
        else:
            body = [
                {
                    "target": rel.target_label,
                    "relation": str(rel),
                    "terms": [{"basis": lab, "coefficient": _coeff_text(c)}
                              for lab, c in rel.nonzero_terms()],
                }
                for rel in rows
            ]
        return json.dumps({"table": which, "rows": body}, indent=2) + "\n"

    lines = ["\\begin{tabular}{rl}"]
    if poly_table:
        for label, p in rows:
            lines.append(f"${_tex_label(label)}$ & ${_poly_tex(p)}$\\\\")
    else:
        for rel in rows:
            lines.append(f"& ${_relation_tex(rel)}$\\\\")
    lines.append("\\end{tabular}")
    return "\n".join(lines) + "\n"
