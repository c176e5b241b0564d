"""Experiment drivers: truncation and weighted-acceleration studies, growth
scans, asymptotic-order scans and the combined verification sweep.

All drivers iterate their grids in sorted order and return plain records,
so output is deterministic.  Numeric columns are mpmath values; use
:func:`records_to_csv` / :func:`records_to_json` to serialise.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
from dataclasses import asdict, dataclass, field, fields
from fractions import Fraction
from typing import Callable, Sequence

import mpmath

from .characters import DirichletCharacter, builtin, chi3, conjugate, gauss_omega, resolve_character
from .errors import DomainError, MembershipFailure
from .exact import NPoly
from .families import g_poly, nu_poly, u_poly
from .golden import hexfloat
from .lfunctions import g_residual, identity_residual, theta_fe_residual, xi_lavrik
from .mpgamma import _lower, asympt_gamma_u, to_mpc
from .relations import key_discovery_general, key_discovery_strong, solve_in_basis

log = logging.getLogger(__name__)

__all__ = [
    "WeightFamily",
    "parse_weights",
    "StudyConfig",
    "StudyRecord",
    "GrowthRecord",
    "OrderRecord",
    "Check",
    "VerifyReport",
    "truncation_study",
    "weighted_study",
    "growth_scan",
    "asymptotic_order_scan",
    "verify_all",
    "envelope",
    "records_to_csv",
    "records_to_json",
    "corrupted_g_family",
]

GROWTH_ENVELOPE_CONSTANT = 10


# weights --------------------------------------------------------------------


@dataclass(frozen=True)
class WeightFamily:
    """nu_n(N) acts on the n-sums, kappa_k(K) on the asymptotic k-sums.

    none:         nu = 1,                    kappa = 1
    riesz(p):     nu = (1 - (n/N)^2)^p,      kappa = 1
    gaussian(c):  nu = exp(-c (n/N)^2),      kappa = 1
    cesaro:       nu = 1,                    kappa = 1 - (k-1)/K
    """

    name: str = "none"
    param: Fraction | None = None

    def __post_init__(self):
        if self.name not in ("none", "riesz", "gaussian", "cesaro"):
            raise ValueError(f"unknown weight family {self.name!r}")
        if self.name in ("riesz", "gaussian") and self.param is None:
            raise ValueError(f"{self.name} needs a parameter")
        if self.name in ("none", "cesaro") and self.param is not None:
            raise ValueError(f"{self.name} takes no parameter")
        if self.name == "riesz" and self.param < 0:
            raise ValueError("riesz exponent must be >= 0")
        if self.name == "gaussian" and self.param <= 0:
            raise ValueError("gaussian scale must be > 0")

    def nu(self, n: int, N: int):
        if self.name == "riesz":
            if self.param == 0:
                return mpmath.mpf(1)
            p = mpmath.mpf(self.param.numerator) / self.param.denominator
            return (1 - mpmath.mpf(n * n) / (N * N)) ** p
        if self.name == "gaussian":
            c = mpmath.mpf(self.param.numerator) / self.param.denominator
            return mpmath.exp(-c * mpmath.mpf(n * n) / (N * N))
        return mpmath.mpf(1)

    def kappa(self, k: int, K: int):
        if self.name == "cesaro":
            return 1 - mpmath.mpf(k - 1) / K
        return mpmath.mpf(1)

    def __str__(self):
        return self.name if self.param is None else f"{self.name}:{self.param}"


def parse_weights(text: str) -> WeightFamily:
    """``none``, ``cesaro``, ``riesz:P`` or ``gaussian:C`` (P, C rational)."""
    name, _, param = text.partition(":")
    if param:
        try:
            value = Fraction(param)
        except ValueError:
            raise ValueError(f"bad weight parameter {param!r}") from None
        return WeightFamily(name, value)
    if name in ("riesz", "gaussian"):
        raise ValueError(f"{name} needs a parameter, e.g. {name}:1")
    return WeightFamily(name)


# configuration ---------------------------------------------------------------


@dataclass(frozen=True)
class StudyConfig:
    t_values: tuple
    N_values: tuple = (5, 10, 20)
    K_values: tuple = (1, 2, 3)
    prec: int = 256
    weights: WeightFamily = WeightFamily()
    character: str = "chi3"
    output_format: str = "csv"

    def __post_init__(self):
        object.__setattr__(self, "t_values", tuple(self.t_values))
        object.__setattr__(self, "N_values", tuple(sorted(set(self.N_values))))
        object.__setattr__(self, "K_values", tuple(sorted(set(self.K_values))))
        if isinstance(self.weights, str):
            object.__setattr__(self, "weights", parse_weights(self.weights))
        if not self.t_values:
            raise ValueError("t_values must not be empty")
        for t in self.t_values:
            if not math.isfinite(float(t)):
                raise ValueError("t values must be finite")
        if not self.N_values or min(self.N_values) < 1:
            raise ValueError("N values must be >= 1")
        if not self.K_values or min(self.K_values) < 1:
            raise ValueError("K values must be >= 1")
        if self.prec < 16:
            raise ValueError("prec must be at least 16 bits")
        if self.output_format not in ("csv", "json"):
            raise ValueError("output_format must be csv or json")

    def chi(self) -> DirichletCharacter:
        return resolve_character(self.character)


# records and serialisation -----------------------------------------------------


@dataclass
class StudyRecord:
    t: object
    N: int
    K: int
    weights: str
    xi_ref: object
    xi_N: object
    xi_NK: object
    err_tail: object
    err_asymptotic: object
    abs_xi_NK: object
    abs_xi: object
    triangle_ok: bool
    optimal_K: int
    inner_residuals: list = field(default_factory=list)


@dataclass
class GrowthRecord:
    t: object
    abs_xi: object
    envelope: object
    ratio: object
    within_envelope: bool


@dataclass
class OrderRecord:
    K: int
    t: object
    error_t: object
    error_2t: object
    log2_ratio: float
    in_range: bool
    empirical_constant: object


def _fmt_value(x, prec: int, hexa: bool):
    if isinstance(x, bool) or isinstance(x, (int, str)) or x is None:
        return x
    if isinstance(x, float):
        return repr(x)
    if isinstance(x, list):
        return ";".join(str(_fmt_value(v, prec, hexa)) for v in x)
    if isinstance(x, Fraction):
        return str(x)
    with mpmath.workprec(prec):
        if isinstance(x, mpmath.mpc):
            if hexa:
                return f"{hexfloat(+x.real)} {hexfloat(+x.imag)}"
            digits = max(5, int(prec * 0.30103))
            return f"{mpmath.nstr(x.real, digits)} {mpmath.nstr(x.imag, digits)}"
        if hexa:
            return hexfloat(+x)
        return mpmath.nstr(x, max(5, int(prec * 0.30103)))


def _flatten(record, prec: int, hexa: bool) -> dict:
    out = {}
    for f in fields(record):
        v = getattr(record, f.name)
        if isinstance(v, mpmath.mpc):
            re, im = _fmt_value(v, prec, hexa).split(" ")
            out[f"{f.name}_re"] = re
            out[f"{f.name}_im"] = im
        else:
            out[f.name] = _fmt_value(v, prec, hexa)
    return out


def records_to_csv(records: Sequence, prec: int = 53, hexfloat_output: bool = False) -> str:
    """One header row, fixed column order (dataclass field order)."""
    buf = io.StringIO()
    rows = [_flatten(r, prec, hexfloat_output) for r in records]
    if not rows:
        return ""
    w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def records_to_json(records: Sequence, prec: int = 53, hexfloat_output: bool = False) -> str:
    rows = [_flatten(r, prec, hexfloat_output) for r in records]
    return json.dumps(rows, indent=2) + "\n"


# truncation and weighted studies ------------------------------------------------


def _is_chi3(chi: DirichletCharacter) -> bool:
    return chi.q == 3 and chi == chi3()


class _StudyPoint:
    """Per-t quantities shared by every (N, K) cell of a study."""

    def __init__(self, chi: DirichletCharacter, t, Nmax: int, Kmax: int, prec: int):
        self.chi = chi
        self.conj = conjugate(chi)
        self.real_case = _is_chi3(chi)
        delta = chi.delta
        self.wp = prec + 32 + math.ceil(1.15 * abs(float(t)))
        self.omega = mpmath.mpc(1) if self.real_case else gauss_omega(chi, self.wp)
        a = Fraction(2 * delta + 1, 4)
        with mpmath.workprec(self.wp):
            self.t = mpmath.mpf(t)
            s = mpmath.mpc(0.5, self.t)
            w1 = (s + delta) / 2
            w2 = (1 - s + delta) / 2
            q = chi.q
            scale1 = mpmath.power(mpmath.pi / q, -w1)
            scale2 = mpmath.power(mpmath.pi / q, -w2)
            # lower-gamma summands of the truncated representation
            self.gamma_terms = {}
            # U-polynomial summands n^delta e^{-m} U_k(a, m), one list per k
            self.u_terms = {}
            pi = +mpmath.pi
            kmax = 2 * Kmax
            us = [u_poly(k, a) for k in range(1, kmax + 1)]
            for n in range(1, Nmax + 1):
                if chi.exponent(n) is None:
                    continue
                m = pi * n * n / q
                g1 = _lower(mpmath.mpc(w1), mpmath.mpc(m), self.wp, "stable").value
                g2 = _lower(mpmath.mpc(w2), mpmath.mpc(m), self.wp, "stable").value
                first = chi.value(n) * scale1 * g1 * mpmath.power(n, -s)
                second = self.omega * self.conj.value(n) * scale2 * g2 * mpmath.power(n, -(1 - s))
                self.gamma_terms[n] = first + second
                base = mpmath.exp(-m) * (n if delta else 1)
                self.u_terms[n] = [u.evaluate(m, pi) * base for u in us]

    def xi_N(self, N: int, weights: WeightFamily):
        with mpmath.workprec(self.wp):
            return mpmath.fsum(weights.nu(n, N) * v for n, v in self.gamma_terms.items() if n <= N)

    def inner_sums(self, N: int, K: int, weights: WeightFamily) -> list:
        """Weighted inner n-sums, one per asymptotic index.

        chi_3: sum_n nu_n chi(n) n U_{2k}(3/4, m_n) e^{-m_n}, k = 1..K.
        General: sum_n nu_n (chi(n) + (-1)^k omega conj(chi)(n)) n^delta U_k e^{-m_n}, k = 1..2K.
        """
        out = []
        with mpmath.workprec(self.wp):
            ks = range(2, 2 * K + 1, 2) if self.real_case else range(1, 2 * K + 1)
            for k in ks:
                acc = mpmath.mpc(0)
                for n, us in self.u_terms.items():
                    if n > N:
                        continue
                    if self.real_case:
                        c = self.chi.value(n)
                    else:
                        c = self.chi.value(n) + (-1) ** k * self.omega * self.conj.value(n)
                    acc += weights.nu(n, N) * c * us[k - 1]
                out.append((k, acc))
        return out

    def xi_NK(self, N: int, K: int, weights: WeightFamily):
        inner = self.inner_sums(N, K, weights)
        with mpmath.workprec(self.wp):
            total = mpmath.mpc(0)
            for k, v in inner:
                if self.real_case:
                    j = k // 2
                    total += weights.kappa(j, K) * mpmath.ldexp(1, k + 1) / self.t ** k * v
                else:
                    j = (k + 1) // 2
                    total += weights.kappa(j, K) * mpmath.ldexp(1, k) / self.t ** k * v
        return total, inner


def _reference_xi(chi: DirichletCharacter, t, prec: int):
    """xi_chi(1/2 + i t) at four times the study precision (upper-gamma representation)."""
    with mpmath.workprec(4 * prec + 32):
        s = mpmath.mpc(mpmath.mpf(0.5), mpmath.mpf(t))
    return xi_lavrik(chi, s, 1, "upper", 4 * prec).value


def _study(cfg: StudyConfig, weights: WeightFamily) -> list[StudyRecord]:
    chi = cfg.chi()
    if chi.q <= 1 or not chi.primitive:
        raise DomainError("studies need a primitive character with q > 1")
    for t in cfg.t_values:
        if float(t) == 0:
            raise DomainError("the asymptotic expansion in 1/t needs t != 0")
    records = []
    Nmax, Kmax = max(cfg.N_values), max(cfg.K_values)
    slack_exp = 20 - cfg.prec
    for t in sorted(cfg.t_values, key=float):
        ref = _reference_xi(chi, t, cfg.prec)
        pt = _StudyPoint(chi, t, Nmax, Kmax, cfg.prec)
        with mpmath.workprec(pt.wp):
            ref = +ref
            for N in cfg.N_values:
                xiN = pt.xi_N(N, weights)
                cells = []
                for K in cfg.K_values:
                    xiNK, inner = pt.xi_NK(N, K, weights)
                    cells.append((K, xiNK, inner))
                best_K = min(cells, key=lambda c: abs(xiN - c[1]))[0]
                for K, xiNK, inner in cells:
                    e1, e2, e3 = abs(ref - xiN), abs(xiN - xiNK), abs(xiNK)
                    ok = abs(ref) <= e1 + e2 + e3 + mpmath.ldexp(1, slack_exp)
                    records.append(StudyRecord(
                        t=mpmath.mpf(t), N=N, K=K, weights=str(weights),
                        xi_ref=ref, xi_N=xiN, xi_NK=xiNK,
                        err_tail=e1, err_asymptotic=e2, abs_xi_NK=e3, abs_xi=abs(ref),
                        triangle_ok=bool(ok), optimal_K=best_K,
                        inner_residuals=[abs(v) for _, v in inner],
                    ))
    return records


def truncation_study(cfg: StudyConfig) -> list[StudyRecord]:
    """Unweighted truncations xi_N, xi_{N,K} and the three-term error split."""
    return _study(cfg, WeightFamily())


def weighted_study(cfg: StudyConfig) -> list[StudyRecord]:
    """The same grid with the configured linear weights nu_n(N), kappa_k(K)."""
    if cfg.weights.name == "none":
        raise ValueError("weighted_study needs a weight family other than 'none'")
    return _study(cfg, cfg.weights)


# growth and asymptotic order ------------------------------------------------------


def envelope(t, prec: int = 53):
    """t^{1/4} exp(-pi t / 4)."""
    with mpmath.workprec(prec + 16):
        t = mpmath.mpf(t)
        return mpmath.root(t, 4) * mpmath.exp(-mpmath.pi * t / 4)


def growth_scan(t_grid: Sequence, prec: int = 128) -> list[GrowthRecord]:
    """|xi_3(1/2 + i t)| against the envelope; t = 0 gets no ratio."""
    chi = chi3()
    out = []
    for t in sorted(t_grid, key=float):
        if float(t) < 0:
            raise DomainError("growth_scan expects t >= 0")
        with mpmath.workprec(prec + 32):
            s = mpmath.mpc(mpmath.mpf(0.5), mpmath.mpf(t))
        val = abs(xi_lavrik(chi, s, 1, "upper", prec).value)
        env = envelope(t, prec)
        with mpmath.workprec(prec + 16):
            ratio = val / env if env else None
        within = ratio is None or ratio < GROWTH_ENVELOPE_CONSTANT
        out.append(GrowthRecord(mpmath.mpf(t), val, env, ratio, bool(within)))
    return out


def asymptotic_order_scan(
    K_values: Sequence[int] = (2, 4),
    t_values: Sequence = (64, 128, 256, 512),
    a=Fraction(3, 4),
    m=None,
    prec: int = 256,
) -> list[OrderRecord]:
    """log2(error(b = t/2) / error(b = t)) for the U-form asymptotic of gamma(a + i b, m).

    The error is measured relative to the prefactor |m^{a+ib} e^{-m}|, so a
    term of order b^{-(K+1)} gives a ratio near K + 1.  ``empirical_constant``
    is error(b = t) * t^(K+1), the measured size of the O-constant.
    Default m = pi/3.
    """
    out = []
    for K in sorted(K_values):
        for t in sorted(t_values, key=float):
            errs = []
            for b in (mpmath.mpf(t) / 2, mpmath.mpf(t)):
                with mpmath.workprec(prec + 32):
                    mm = mpmath.pi / 3 if m is None else to_mpc(m)
                    w = to_mpc(a) + mpmath.mpc(0, 1) * b
                    exact = _lower(mpmath.mpc(w), mpmath.mpc(mm), prec, "stable").value
                    approx = asympt_gamma_u(a, b, mm, K, prec)
                    pref = abs(mpmath.exp(w * mpmath.log(mm) - mm))
                    errs.append(abs(exact - approx) / pref)
            with mpmath.workprec(prec):
                r = float(mpmath.log(errs[0] / errs[1], 2))
                const = errs[1] * mpmath.mpf(t) ** (K + 1)
            out.append(OrderRecord(K, mpmath.mpf(t), errs[0], errs[1], r, K <= r <= K + 2, const))
    return out


# verification sweep ------------------------------------------------------------------


@dataclass
class Check:
    name: str
    passed: bool
    residual: object = None
    detail: str = ""


@dataclass
class VerifyReport:
    checks: list

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]

    def summary(self) -> str:
        return f"{sum(c.passed for c in self.checks)}/{len(self.checks)} checks passed"


def corrupted_g_family(index: int = 3, delta=Fraction(1, 1000)) -> Callable[[int], NPoly]:
    """g_poly with one coefficient of G_index perturbed (negative control)."""

    def family(m: int) -> NPoly:
        p = g_poly(m)
        if m != index:
            return p
        return p + NPoly.monomial("n", 1, delta)

    return family


def _exact_check(name: str, fn) -> Check:
    try:
        rel = fn()
    except MembershipFailure as exc:
        return Check(name, False, exc.residual, str(exc))
    return Check(name, True, 0, str(rel))


def verify_all(
    max_k: int = 10,
    max_m: int = 12,
    prec: int = 256,
    g_family: Callable[[int], NPoly] = g_poly,
    ef_character: str = "chi4",
    ef_max_m: int = 8,
) -> VerifyReport:
    """Exact memberships plus numeric residuals; failures are data, not errors."""
    if max_k < 1 or max_m < 1:
        raise ValueError("caps must be >= 1")
    checks = []
    tol = mpmath.ldexp(1, 32 - prec)

    for k in range(1, max_k + 1):
        for basis in ("odd", "even"):
            checks.append(_exact_check(f"exact key k={k} basis={basis}",
                                       lambda k=k, b=basis: key_discovery_strong(k, b)))
    for d in (0, 1):
        for k in range(1, max_k + 1):
            checks.append(_exact_check(f"exact general d={d} k={k}",
                                       lambda d=d, k=k: key_discovery_general(d, k)))
    for m in range(1, max_m + 1):
        top = (m + 1) // 2
        basis = [nu_poly(2 * j) for j in range(1, top + 1)]
        coeffs = solve_in_basis(g_family(m), basis)
        checks.append(Check(f"exact G_{m} in nU span", coeffs is not None, 0 if coeffs else None,
                            "" if coeffs else "not in the span of nU_2..nU_" + str(2 * top)))

    c3 = chi3()
    for m in range(1, max_m + 1):
        r = g_residual(g_family(m), prec)
        checks.append(Check(f"numeric G m={m} chi3", bool(r < tol), r))
    for k in range(1, max_k + 1):
        r = identity_residual("key", k, c3, prec)
        checks.append(Check(f"numeric key k={k} chi3", bool(r < tol), r))
    chi = resolve_character(ef_character)
    for m in range(0, min(max_m, ef_max_m) + 1):
        r = identity_residual("EF", m, chi, prec)
        checks.append(Check(f"numeric EF m={m} {ef_character}", bool(r < tol), r))
    for name in ("chi3", "chi4"):
        for tau in ("1", "2", "1/2", "1+i/2"):
            r = theta_fe_residual(builtin(name), tau, prec)
            checks.append(Check(f"theta FE {name} tau={tau}", bool(r < mpmath.ldexp(1, 24 - prec)), r))
    for c in checks:
        if not c.passed:
            log.warning("verification failure: %s (residual %s)", c.name, c.residual)
    return VerifyReport(checks)
