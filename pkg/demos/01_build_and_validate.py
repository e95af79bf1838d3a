"""Build a commuting isometry pair and see what the truncation model checks.

The model space is C^n (x) C^L: n "internal" coordinates times L shift
levels. The first generator shifts levels; the second mixes the internal
space through a unitary and a projection family while climbing levels at
rates 0, 1, ..., d-1. A truncated shift cannot be an isometry on its top
level, so every identity is asserted after compressing away a guard band of
top levels -- and on that interior the identities hold exactly, not just
approximately.
"""
import numpy as np

from isorep import (
    TruncationParams,
    build_reflection_rep,
    strong_purity_check,
    validate,
)

# the n=4 reflection family: U = 1 - 2|a><a| over the standard projections
a = np.array([0.5, 0.5, 0.5, 0.5])
rep = build_reflection_rep(a, TruncationParams(n=4, L=8, guard=3))

print("generators act on dimension:", rep.dim)
print("internal unitary U_a:")
print(np.round(rep.family.unitary.real, 3))

report = validate(rep)
print("\ninterior isometry deviation (W1):", report.isometry_dev_w1)
print("interior isometry deviation (W2):", report.isometry_dev_w2)
print("interior commutation deviation:  ", report.commutation_dev)
print("valid pair:", report.ok)

# purity: the interior rank of Ran(W^k) must drop by the multiplicity per
# power; a unitary summand would make it stall above zero instead
purity = strong_purity_check(rep, depth=3)
print("\npurity verdict:", purity.verdict)
print("multiplicities:", purity.multiplicities)
print("interior range ranks by power:")
for name, seq in zip(("W1", "W2"), purity.rank_sequences):
    print(f"  {name}: {list(seq)} (interior dim {purity.interior_dim})")
