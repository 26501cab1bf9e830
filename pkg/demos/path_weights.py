"""Excursion weights computed four ways, plus the weight-sum check against n!."""
from math import factorial

from nccapelli.lukasiewicz import (
    c_formula,
    enumerate_excursions,
    fock_weight,
    holomorphic_weight,
    recursion_coefficient,
)

for n in range(1, 5):
    paths = enumerate_excursions(n)
    print(f"length {n}: {len(paths)} excursions")
    for p in paths:
        w = (c_formula(p), recursion_coefficient(p.nu), fock_weight(p), holomorphic_weight(p))
        mark = "" if len(set(w)) == 1 else "  MISMATCH"
        print(f"  nu={str(p.nu):<18} heights={str(p.heights()):<18} weight={w[0]}{mark}")
    total = sum(c_formula(p) for p in paths)
    print(f"  total {total} (n! = {factorial(n)})")
