"""
n-cycles: classical and quantum A'
==================================

Classical bound floor(n/2) + 3 versus the umbrella construction.
"""
import math

from onci import builtin_realization, builtin_scenario, ncycle_aprime_bound, quantum_onci_values

print(" n  classical  quantum   gap")
for n in range(4, 12):
    c = ncycle_aprime_bound(n)
    q = quantum_onci_values(builtin_scenario(f"cycle:{n}"), builtin_realization(f"cycle-extended({n})"))["aprime"]
    print(f"{n:2d}  {int(c):9d}  {q:7.4f}  {q - float(c):+.4f}")

# odd cycles beat the classical bound, and the excess tends to 1/2 as n grows
n = 101
cos = math.cos(math.pi / n)
print("n = 101 quantum - classical:", 3 + n * cos / (1 + cos) - (n // 2 + 3))
