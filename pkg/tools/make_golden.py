"""Regenerate tests/golden/numeric.txt from independent reference computations.

The references deliberately avoid the package's own evaluators:
Gamma(3/4) by numerical quadrature, theta by a plain long sum, and xi by
g(s) L(s) with L from a Hurwitz-zeta decomposition, all at 512 bits.
"""

from pathlib import Path

import mpmath

from touchard_xi.golden import write_golden

PREC = 512
OUT = Path(__file__).resolve().parents[1] / "tests" / "golden" / "numeric.txt"


def gamma_three_quarters():
    with mpmath.workprec(PREC + 64):
        # t = u^4 removes the endpoint singularity: 4 * int_0^inf u^2 exp(-u^4) du
        return 4 * mpmath.quad(lambda u: u * u * mpmath.exp(-u ** 4), [0, 1, 2, 4, mpmath.inf])


def theta_chi3_at_one():
    with mpmath.workprec(PREC + 64):
        chi = {1: 1, 2: -1}
        return 2 * mpmath.fsum(chi.get(n % 3, 0) * n * mpmath.exp(-mpmath.pi * n * n / 3) for n in range(1, 80))


def xi_chi3(s):
    with mpmath.workprec(PREC + 64):
        s = mpmath.mpc(s)
        L = 3 ** (-s) * (mpmath.zeta(s, mpmath.mpf(1) / 3) - mpmath.zeta(s, mpmath.mpf(2) / 3))
        w = (s + 1) / 2
        return (mpmath.pi / 3) ** (-w) * mpmath.gamma(w) * L


def main():
    with mpmath.workprec(PREC + 64):
        records = [
            ("gamma_3_4", PREC, gamma_three_quarters()),
            ("theta_chi3_tau1", PREC, theta_chi3_at_one()),
            ("xi_chi3_s1_2", PREC, xi_chi3(mpmath.mpf(1) / 2)),
            ("xi_chi3_s1_2_10i", PREC, xi_chi3(mpmath.mpc(mpmath.mpf(1) / 2, 10))),
        ]
    write_golden(OUT, records)
    print(f"wrote {len(records)} records to {OUT}")


if __name__ == "__main__":
    main()
