"""Closed-form sign exponents against brute-force transposition oracles."""

from dgkit.bar import sign_expansion_check
from dgkit.duality import sign_oracle_sweep
from dgkit.grading import GradingSpec, classical_spec

print(sign_oracle_sweep(classical_spec()))
print(sign_oracle_sweep(GradingSpec(rank=2, pairing=((1, 1), (1, 0)), iota=(1, 0)), samples=5000))
print(sign_expansion_check(3, 3))
