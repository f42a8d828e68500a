"""
The pentagon with an irrational operational value
=================================================

KCBS reaches sqrt(5) only for a particular state; the slice cap is the
first rational above sqrt(5) within 1e-4.
"""
from onci import builtin_scenario, run_pipeline
from onci.rational import fmt

s = builtin_scenario("kcbs")
report = run_pipeline(s)

onci = report["steps"]["onci"]
for x in onci["samples"]:
    print(f"  a = {fmt(x['a']):>6}  max T = {fmt(x['max'])}")
print("bound on A:", round(onci["bound"], 6), "at a* =", round(onci["a_star"], 6))
print("quantum sum:", report["steps"]["quantum"]["I"])

# the report carries a remark on the commonly quoted closed form
for note in report["notes"]:
    print("note:", note)
print("all verdicts pass:", report["passed"])
