"""
Writing a scenario file
=======================

Export a built-in scenario, edit it, and load it back.  Context and
outcome indices in the file are 1-based.
"""
import json
import tempfile
from pathlib import Path

from onci import builtin_scenario, load_scenario, run_pipeline
from onci.scenario import ScenarioError, dump_scenario

obj = builtin_scenario("cycle:7").to_json()
print("keys:", sorted(obj))
print("first context:", obj["contexts"][0])

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "cycle7.json"
    path.write_text(dump_scenario(builtin_scenario("cycle:7")))
    s = load_scenario(path)
    print("round trip identical:", dump_scenario(s) == path.read_text())

    # a typo in a context label is reported with a JSON pointer
    obj["contexts"][2][0] = "x"
    path.write_text(json.dumps(obj))
    try:
        load_scenario(path)
    except ScenarioError as exc:
        print("rejected:", exc)

report = run_pipeline(s)
for name, v in report["verdicts"].items():
    print(f"  {name:<16} {v['value']!s:<22} {'ok' if v['pass'] else 'FAIL'}")
