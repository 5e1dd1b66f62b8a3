"""Tabulate the possible a_1 values of the cyclic type II cases for small k."""

import sys

from mmpfactor.claims import CYCLIC_CLAIM_CASES, a1_bound_claim

k_max = int(sys.argv[1]) if len(sys.argv) > 1 else 6
for case in sorted(CYCLIC_CLAIM_CASES):
    row = [a1_bound_claim(case, k).details["a1_values"] for k in range(1, k_max + 1)]
    print(f"{case:8s}", "  ".join(str(v) for v in row))
