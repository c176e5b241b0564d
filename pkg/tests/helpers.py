"""Comparison helpers shared by the table tests and the acceptance suite."""

from fractions import Fraction

from touchard_xi.exact import NPoly


def poly_from_rows(rows) -> NPoly:
    return NPoly.from_monomials("n", {(j, e): Fraction(c) for j, e, c in rows})


def relation_map(rel) -> dict:
    """{basis subscript: coefficient} for a LinearRelation."""
    out = {}
    for label, c in rel.nonzero_terms():
        assert c.is_real()
        out[int(label.rsplit("_", 1)[1])] = c.re
    return out


def reference_map(rows) -> dict:
    return {int(i): Fraction(c) for i, c in rows}


# acceptance results, printed by the terminal summary hook in conftest.py
ACCEPTANCE: dict = {}


def record_criterion(number: int, part: str, passed: bool, detail: str) -> str:
    ACCEPTANCE.setdefault(number, []).append((part, passed, detail))
    line = f"{'PASS' if passed else 'FAIL'} criterion {number} [{part}]: {detail}"
    print(line)
    return line


def acceptance_lines() -> list[str]:
    lines = []
    for number in sorted(ACCEPTANCE):
        parts = ACCEPTANCE[number]
        ok = all(p for _, p, _ in parts)
        detail = "; ".join(f"{name}: {'ok' if p else 'FAILED'} ({d})" for name, p, d in parts)
        lines.append(f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}")
    return lines
