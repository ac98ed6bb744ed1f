"""Drive the command line from Python: generate, solve with a trace, check.

The same calls work from a shell as ``glmpbb generate ...`` and so on.

Run:  python3 demos/07_command_line.py
"""
import csv
import json
import tempfile
from pathlib import Path

from glmpbb.cli import main

work = Path(tempfile.mkdtemp())
instance = work / "p3.json"

# %% Write a seeded instance to disk.
main(["generate", "--scheme", "p3", "--m", "8", "--n", "6", "--p", "3",
      "--pbar", "2", "--seed", "9", "--out", str(instance)])
print(json.loads(instance.read_text())["name"])

# %% Solve it and keep the convergence trace.
code = main(["solve", str(instance), "--eps", "1e-4",
             "--trace", str(work / "trace.csv"), "--out", str(work / "result.json")])
result = json.loads((work / "result.json").read_text())
print("exit code", code, "|", result["status"], "h =", result["h_value"])
with open(work / "trace.csv") as fh:
    rows = list(csv.reader(fh))
print(rows[0])
print(rows[-1])

# %% Brute-force check of the same file.
main(["oracle", str(instance), "--resolution", "30", "--out", str(work / "oracle.json")])
print(json.loads((work / "oracle.json").read_text())["grid_min_psi"], result["ub"])

# %% A tiny benchmark summary.
main(["bench", "--scheme", "p1", "--m", "10", "--n", "20", "--repeats", "3",
      "--eps", "1e-3"])
