#!/usr/bin/env python3
"""Print exact outer-bound tables for small homogeneous networks, the
antenna budget of the generalized alignment scheme per multiplicity, and the
distributed-vs-shared transmission comparison.
"""

import argparse
from fractions import Fraction

from macdof.bounds import antenna_budget, compare_dist_vs_shared, outer_bound_homogeneous
from macdof.network import NetworkConfig
from macdof.schemes import dimension_rule


def fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-cells", type=int, default=3)
    parser.add_argument("--max-users", type=int, default=3)
    parser.add_argument("--max-antennas", type=int, default=4)
    args = parser.parse_args()

    print("sum-DoF outer bound (homogeneous):")
    print("  L  K  M  N   bound")
    for L in range(2, args.max_cells + 1):
        for K in range(1, args.max_users + 1):
            for M in range(1, args.max_antennas + 1):
                for N in range(1, args.max_antennas + 1):
                    report = outer_bound_homogeneous(NetworkConfig(L=L, K=K, M=M, N=N))
                    print(f"  {L}  {K}  {M}  {N}   {fmt(report.sigma_d)}")

    print("\nantenna budget of generalized alignment (beta = 1):")
    print("  L  K  gamma   M   N   M+N   L*K+1")
    for L in range(2, args.max_cells + 1):
        for K in range(1, args.max_users + 1):
            for gamma in range(1, K + 1):
                rule = dimension_rule(L, K, 1, gamma)
                total = rule.M_required + rule.N_required
                assert total == antenna_budget(gamma, L, K) + 1
                print(
                    f"  {L}  {K}  {gamma:5d}  {rule.M_required:2d}  {rule.N_required:2d}"
                    f"  {total:4d}   {L * K + 1}"
                )

    print("\ndistributed vs selected-and-shared transmission (two cells, two users):")
    print("  M   distributed   shared")
    for M in range(1, args.max_antennas + 1):
        dist, shared, _ = compare_dist_vs_shared(M)
        print(f"  {M}   {fmt(dist):>11}   {fmt(shared):>6}")


if __name__ == "__main__":
    main()
