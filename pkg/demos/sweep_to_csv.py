"""Drive a sweep from a JSON config and write CSV, as the command line does.

Equivalent to:  dampcap sweep --config cfg.json --out geometric.csv

Run: python demos/sweep_to_csv.py [output.csv]
"""
import csv
import json
import sys

from dampcap import emit, parse_config, run_sweep

config = {
    "family": "geometric",
    "d_list": [3, 5, 8],
    "sweep": {"gamma": {"from": 0.0, "to": 2.0, "step": 0.25}},
}
sweep = parse_config(json.dumps(config))
print(f"{len(sweep)} grid points")

rows = run_sweep(sweep)
skipped = [r for r in rows if r.status != "ok"]
out = sys.argv[1] if len(sys.argv) > 1 else "geometric.csv"
emit(rows, "csv", out)
print(f"wrote {len(rows) - len(skipped)} rows to {out}, {len(skipped)} skipped")

with open(out) as f:
    for rec in csv.DictReader(f):
        if rec["d"] == "8":
            print(f"d=8 gamma={rec['gamma']:>5}  C_DET={float(rec['c_det']):.4f}  {rec['winner']}")
