"""Bit-exact text encoding of binary floating values.

A value ``man * 2**exp`` is written ``[-]0x<hex man>p<exp>``; zero is
``0x0p0``.  Golden records are one per line: ``label prec re im``.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import mpmath

__all__ = ["hexfloat", "parse_hexfloat", "GoldenRecord", "read_golden", "write_golden", "format_record"]


def hexfloat(x) -> str:
    """Exact hexadecimal literal for an mpf (or anything mpmath converts)."""
    x = mpmath.mpf(x) if not isinstance(x, mpmath.mpf) else x
    sign, man, exp, _ = x._mpf_
    if not man:
        if exp:
            raise ValueError(f"cannot encode special value {x}")
        return "0x0p0"
    return f"{'-' if sign else ''}0x{man:x}p{exp}"


def parse_hexfloat(text: str):
    """Inverse of :func:`hexfloat`; exact regardless of working precision."""
    t = text.strip()
    neg = t.startswith("-")
    t = t.lstrip("+-")
    if not t.lower().startswith("0x") or "p" not in t:
        raise ValueError(f"not a hexadecimal float literal: {text!r}")
    man_text, exp_text = t[2:].split("p")
    man = int(man_text, 16)
    exp = int(exp_text)
    prec = max(man.bit_length(), 1)
    with mpmath.workprec(prec):
        v = mpmath.mpf((man, exp))
        return -v if neg else v


@dataclass(frozen=True)
class GoldenRecord:
    label: str
    prec: int
    re: object
    im: object

    @property
    def value(self):
        with mpmath.workprec(self.prec + 64):
            return mpmath.mpc(self.re, self.im)


def format_record(label: str, prec: int, value) -> str:
    if " " in label:
        raise ValueError("labels must not contain spaces")
    with mpmath.workprec(prec):
        z = mpmath.mpc(value)
        re, im = +z.real, +z.imag
    return f"{label} {prec} {hexfloat(re)} {hexfloat(im)}"


def write_golden(path, records) -> None:
    """``records`` is an iterable of (label, prec, value)."""
    lines = [format_record(*r) for r in records]
    Path(path).write_text("\n".join(lines) + "\n")


def read_golden(path) -> dict[str, GoldenRecord]:
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 4:
            raise ValueError(f"{path}:{lineno}: expected 'label prec re im'")
        label, prec, re, im = parts
        out[label] = GoldenRecord(label, int(prec), parse_hexfloat(re), parse_hexfloat(im))
    return out
