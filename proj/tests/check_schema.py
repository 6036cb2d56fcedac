"""Validate peh JSON reports against the shipped schema.

usage: check_schema.py PEH_BINARY SCHEMA DATA_DIR
"""

import copy
import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema


def report(binary, *args):
    p = subprocess.run([binary, *args, "--format", "json"], capture_output=True, text=True)
    return p.returncode, json.loads(p.stdout)


def main():
    binary, schema_path, data = sys.argv[1], sys.argv[2], pathlib.Path(sys.argv[3])
    schema = json.loads(pathlib.Path(schema_path).read_text())
    jsonschema.Draft202012Validator.check_schema(schema)
    validator = jsonschema.Draft202012Validator(schema)

    runs = [["examples"], ["limit", "[[1,1,1],[1,0,0],[1,0,0]]"], ["limit", "[[4,1],[2,1]]"],
            ["limit", "[[2,1],[0,2]]", "--mode", "Q"], ["snf", "[[2,0],[0,3]]"],
            ["snf", '[["123456789012345678901234567890", 1]]'], ["compute", "no-such-fixture"],
            ["compute", "arnoux-rauzy-3", "--horizon", "1"], ["compute", "fibonacci", "--mode", "Q"]]
    for f in sorted(data.iterdir()):
        if f.suffix not in (".toml", ".json"):
            continue
        runs.append(["compute", str(f)])
        runs.append(["validate", str(f)])
        if f.suffix == ".json":
            runs.append(["compute", str(f), "--dagger"])

    with tempfile.TemporaryDirectory() as tmp:
        bad = pathlib.Path(tmp) / "corrupted.json"
        doc = json.loads((data / "penrose-kite-dart.json").read_text())
        doc["boundaries"]["1"][0][2] += 1
        bad.write_text(json.dumps(doc))
        runs.append(["validate", str(bad)])
        runs.append(["compute", str(bad)])

        failures = 0
        reports = []
        for args in runs:
            code, r = report(binary, *args)
            errors = sorted(validator.iter_errors(r), key=lambda e: list(e.path))
            if errors:
                failures += 1
                print(f"FAIL {' '.join(args)}: {errors[0].message} at {list(errors[0].path)}")
            else:
                print(f"ok   {' '.join(args)} (exit {code})")
            reports.append(r)

    # the schema must reject damaged reports
    sample = next(r for r in reports if r["command"] == "compute" and r["status"] == "ok")
    damaged = []
    d = copy.deepcopy(sample)
    del d["limits"]
    damaged.append(d)
    d = copy.deepcopy(sample)
    d["limits"][0]["group"]["kind"] = "guess"
    damaged.append(d)
    d = copy.deepcopy(sample)
    d["levels"][0]["boundaries"][0]["entries"][0][0] = 1.5
    damaged.append(d)
    d = copy.deepcopy(sample)
    d["status"] = "fine"
    damaged.append(d)
    for i, d in enumerate(damaged):
        if validator.is_valid(d):
            failures += 1
            print(f"FAIL damaged report {i} accepted")

    print(f"{len(runs)} reports checked, {failures} failure(s)")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
