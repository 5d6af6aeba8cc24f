"""Renewal chains from return laws: classification and first passages.

A single positive sequence p_n (the return law of state 1) pins down the
whole chain: state i > 1 descends deterministically to i - 1, state 1
jumps to n with probability p_n.  The script builds one chain per family
and reads off what the return law decides.
"""

import numpy as np

from renewallab import (
    FiniteLaw,
    GeometricLaw,
    ZetaTailLaw,
    build_chain,
    first_passage,
    moment,
    renewal_sequence,
)


def show(chain, name):
    print(f"== {name} ==")
    print(f"  classification: {chain.classification}")
    print(f"  ergodic degree: {chain.ergodic_degree}")
    print(f"  mean return m1: {chain.m1!r}")
    if chain.positive_recurrent:
        print(f"  pi_1 = 1/m1  : {chain.pi1!r}")
        print(f"  pi_(1..5)    : {np.array2string(chain.pi[1:6], precision=5)}")
    print(f"  survival d_(0..5): {np.array2string(chain.d[:6], precision=5)}")
    print()


def main():
    geo = build_chain(GeometricLaw(0.5), 2000)
    show(geo, "dyadic return law p_n = 2^-n")

    half = build_chain(FiniteLaw((0.5, 0.5)), 500)
    show(half, "two-point law p = (1/2, 1/2)")

    heavy = build_chain(ZetaTailLaw(1.0), 5000)
    show(heavy, "polynomial law p_n ~ n^-3 (degree 1)")

    null = build_chain(ZetaTailLaw(-0.5), 5000)
    show(null, "polynomial law p_n ~ n^-1.5 (null recurrent)")

    print("== return probabilities e_n = P(back at 1 after n steps) ==")
    for chain, name in ((geo, "dyadic"), (heavy, "n^-3"), (null, "n^-1.5")):
        e = renewal_sequence(chain, 1000).values
        tag = f"1/m1 = {chain.pi1!r}" if chain.positive_recurrent else "0"
        print(f"  {name:7s}: e_10 = {e[10]:.6f}, e_1000 = {e[1000]:.6f},"
              f" limit {tag}")
    print()

    print("== first-passage laws between interior states ==")
    f = first_passage(heavy, 4, 2)
    print(f"  4 -> 2 is pure descent: series head {f.series.coeffs[:4]}")
    f = first_passage(heavy, 1, 3)
    n = int(np.flatnonzero(f.series.coeffs > 0)[0])
    print(f"  1 -> 3 rides the jump up: earliest arrival at step {n}"
          f" (landing on 3 directly), mass {f.series.coeffs[n]:.5f}")
    print()

    print("== moments of the return time track the declared degree ==")
    for order in (1.0, 1.5, 2.0):
        m = moment(heavy, 1, 1, order)
        finite = "finite" if m.finite else "divergent"
        print(f"  E[r^{order}] for the n^-3 law: {finite}"
              + (f", value {m.value:.4f}" if m.finite else ""))


if __name__ == "__main__":
    main()
