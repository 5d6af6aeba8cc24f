"""Truncated power series as the exact backbone.

Everything downstream rests on coefficient arithmetic: convolution,
reciprocal, tail sums.  This script shows the identities those routines
satisfy bit for bit, and the one probe whose decay regime flips with the
exponent.
"""

import numpy as np

from renewallab import (
    TruncatedSeries,
    convolution_power_probe,
    convolve,
    kaluza_check,
    partial_sums,
    reciprocal,
    tail_sums,
)


def main():
    print("== reciprocal inverts convolution on the stored prefix ==")
    rng = np.random.default_rng(5)
    d = TruncatedSeries(np.r_[1.0, rng.normal(size=40) * 0.3])
    c = reciprocal(d)
    unit = convolve(d, c)
    print(f"  (D * 1/D) head: {unit.coeffs[:3]}")
    print(f"  largest defect beyond c_0: {np.abs(unit.coeffs[1:]).max():.2e}")

    print()
    print("== renewal identity: partial sums of 1/D give the return rates ==")
    # dyadic return law: survival d_n = 2^-n, so D(z) has coefficients 2^-n
    d = TruncatedSeries(0.5 ** np.arange(30))
    e = partial_sums(reciprocal(d))
    print(f"  e_0..e_5 = {e.coeffs[:6]}")
    print("  constant 1/2 from the first step on, as the dyadic law demands")

    print()
    print("== tail sums fold an analytic remainder in exactly once ==")
    p = 0.5 ** np.arange(1, 21)
    d_seq = tail_sums(p, analytic_tail=float(0.5 ** 20))
    print(f"  d_0 = {float(d_seq.coeffs[0])!r} (total mass)")
    print(f"  d_5 = {float(d_seq.coeffs[5])!r} vs 2^-5 = {0.5 ** 5!r}")

    print()
    print("== log-convexity test separates the two families ==")
    power = 1.0 / np.arange(1, 200, dtype=float) ** 3
    geo = 0.5 ** np.arange(1, 200)
    print(f"  n^-3 prefix is Kaluza:      {kaluza_check(power / power.sum())}")
    print(f"  2^-n prefix is Kaluza:      {kaluza_check(geo)}")

    print()
    print("== convolution power probe: three decay regimes ==")
    for gamma in (1.5, 2.0, 3.0):
        v64, regime = convolution_power_probe(gamma, 64)
        v256, _ = convolution_power_probe(gamma, 256)
        print(f"  gamma={gamma}: value(64)={v64:.4f}, value(256)={v256:.4f},"
              f" regime {regime}")


if __name__ == "__main__":
    main()
