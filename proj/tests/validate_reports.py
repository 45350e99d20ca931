#!/usr/bin/env python3
"""Run every subcommand at a small size and validate each JSON report against the schema.

usage: validate_reports.py <recset executable> <schema.json> <output dir>
"""

import json
import shutil
import subprocess
import sys
from pathlib import Path

import jsonschema

# (name, arguments, expected exit code)
RUNS = [
    ("lemmas", ["lemmas", "--n-cap", "2"], 0),
    ("count", ["count", "--spec", "p=2;i=1;chain=(4,3)"], 0),
    ("count_ball", ["count", "--spec", "p=3;n=2;k=2;center=U"], 0),
    ("density", ["density", "--spec", "p=2;i=1;chain=(10,3),(37,6)"], 0),
    ("construct", ["construct", "--epsilon", "0.1", "--k", "1", "--n", "4", "--mode", "exhaustive"], 1),
    ("construct_sampled", ["--seed", "3", "construct", "--epsilon", "0.1", "--k", "1,2", "--n", "4,8",
                           "--mode", "sampled", "--trials", "2000"], 1),
    ("chromatic", ["chromatic", "--connection", "p=2;n=3;k=6;center=U", "--colors", "2"], 0),
    ("chromatic_refuted", ["chromatic", "--connection", "p=2;n=2;k=1;center=V", "--colors", "4"], 1),
    ("lovasz", ["lovasz", "--r", "2", "--k", "2"], 0),
    ("lovasz_budget", ["--node-budget", "1000", "lovasz", "--r", "3", "--k", "9"], 2),
    ("poincare", ["poincare", "--p", "2", "--n", "3", "--k", "2"], 0),
    ("explore", ["--csv", "explore", "--p", "3", "--n", "2", "--k", "1", "--colors", "2", "--seed", "7"], 0),
]


def verdicts(results):
    if "check" in results:
        yield results
    for v in results.get("verdicts", []):
        yield v


def main():
    exe, schema_path, out_root = sys.argv[1], Path(sys.argv[2]), Path(sys.argv[3])
    schema = json.loads(schema_path.read_text())
    jsonschema.Draft202012Validator.check_schema(schema)
    report_validator = jsonschema.Draft202012Validator(schema)
    verdict_schema = dict(schema["$defs"]["verdict"], **{"$defs": schema["$defs"]})
    verdict_validator = jsonschema.Draft202012Validator(verdict_schema)

    shutil.rmtree(out_root, ignore_errors=True)
    failures = 0
    commands = set()
    for name, args, expected in RUNS:
        out = out_root / name
        proc = subprocess.run([exe, "--out", str(out)] + args, capture_output=True, text=True, timeout=300)
        problems = []
        if proc.returncode != expected:
            problems.append(f"exit {proc.returncode}, expected {expected}: {proc.stderr.strip()}")
        reports = sorted(out.glob("*.json"))
        if not reports:
            problems.append("no JSON report written")
        for path in reports:
            report = json.loads(path.read_text())
            problems += [f"{path.name}: {e.message}" for e in report_validator.iter_errors(report)]
            for v in verdicts(report.get("results", {})):
                problems += [f"{path.name} verdict: {e.message}" for e in verdict_validator.iter_errors(v)]
            if report.get("exit_code") != proc.returncode:
                problems.append(f"{path.name}: exit_code field {report.get('exit_code')} != {proc.returncode}")
            commands.add(report.get("command"))
        print(("FAIL" if problems else "ok  ") + f"  {name}")
        for p in problems:
            print(f"      {p}")
        failures += bool(problems)

    missing = set(schema["$defs"]["command"]["enum"]) - commands
    if missing:
        print(f"FAIL  commands not exercised: {sorted(missing)}")
        failures += 1
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
