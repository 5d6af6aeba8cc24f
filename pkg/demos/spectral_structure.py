"""The transition operator through finite truncations.

Three probes into its spectrum on summable sequences: an exact two-factor
splitting of I - zP, candidate eigenvectors from a one-term coefficient
recursion, and pointwise generating functions with their renewal
coupling.
"""

import numpy as np

from renewallab import (
    GeometricLaw,
    ZetaTailLaw,
    build_chain,
    eigen_from_gf,
    factorization_residual,
    gf_evaluate,
    partial_norm_scan,
)


def main():
    geo = build_chain(GeometricLaw(0.5), 2000)
    heavy = build_chain(ZetaTailLaw(1.0), 2000)

    print("== I - zP splits into (I - zQ)(I - L_z) exactly ==")
    print("  Q forgets returns (pure descent), L_z carries them; the")
    print("  residual below is pure float noise at any N and any |z| <= 1")
    for z in (0.5, -0.3 + 0.4j, 0.999):
        r_geo = factorization_residual(geo, z, 200)
        r_heavy = factorization_residual(heavy, z, 200)
        print(f"  z={z}: dyadic {r_geo:.2e}, n^-3 law {r_heavy:.2e}")
    print()

    print("== candidate eigenvectors inside the unit disk ==")
    print("  coefficients follow x_(k+1) = lam x_k - p_k from x_1 = 1")
    for lam in (0.5, 0.25, -0.4):
        probe = eigen_from_gf(geo, lam, 400)
        head = np.array2string(probe.vector[1:5].real, precision=4)
        print(f"  lam={lam:5.2f}: residual {probe.residual:.1e}, "
              f"edge defect {probe.tail_note:.1e}, head {head}")
    print("  at lam = 1 the recursion returns the survival sequence:")
    probe = eigen_from_gf(geo, 1.0, 400)
    print(f"  x_1..x_4 = {probe.vector[1:5].real} (= d_0..d_3)")
    print()

    print("== on the unit circle the coefficients stop being summable ==")
    lengths = [50, 100, 200, 400, 800]
    inside = partial_norm_scan(geo, 0.6, lengths)
    circle = partial_norm_scan(geo, 1j, lengths)
    print(f"  prefix lengths          : {lengths}")
    print(f"  l1 norms at lam=0.6     : "
          + ", ".join(f"{v:.3f}" for v in inside))
    print(f"  l1 norms at lam=i       : "
          + ", ".join(f"{v:.1f}" for v in circle))
    print("  bounded inside the disk, divergent on the circle")
    print()

    print("== generating functions and the renewal coupling ==")
    for z in (0.3, 0.5, 0.9):
        p11, f11 = gf_evaluate(geo, 1, 1, z)
        print(f"  z={z}: P_11 = {p11:.6f}, F_11 = {f11:.6f}, "
              f"1/(1-F) = {1.0 / (1.0 - f11):.6f}")
    print()
    print("  approaching the pole at z = 1, (1-z) P_11(z) -> pi_1:")
    for z in (0.9, 0.99, 0.999):
        p11, _ = gf_evaluate(geo, 1, 1, z)
        print(f"  z={z}: (1-z) P_11 = {(1.0 - z) * p11:.6f}")
    print(f"  pi_1 = {geo.pi1}")


if __name__ == "__main__":
    main()
