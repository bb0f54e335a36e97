#!/usr/bin/env python3
# tests/check_cli.py
# SPDX-License-Identifier: Apache-2.0
#
# Drives the slope1 binary end to end: exit codes, JSON schema conformance
# of every output line, byte-identical reruns, and cache replay.
#
#   python3 tests/check_cli.py path/to/slope1 path/to/schema

import json
import os
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema
from referencing import Registry, Resource

CLI = sys.argv[1]
SCHEMA_DIR = Path(sys.argv[2])

resources = {}
for f in SCHEMA_DIR.glob("*.schema.json"):
    doc = json.loads(f.read_text())
    resources[f.name] = Resource.from_contents(doc)
    resources[doc["$id"]] = resources[f.name]
registry = Registry().with_resources(resources.items())


def validator(name):
    schema = json.loads((SCHEMA_DIR / name).read_text())
    return jsonschema.Draft202012Validator(schema, registry=registry)


REDUCE, VERIFY, SWEEP, ERROR, CACHE = (
    validator(n)
    for n in ("reduce.schema.json", "verify.schema.json", "sweep.schema.json", "error.schema.json", "cache.schema.json")
)

failures = []


def check(cond, what):
    print(("ok   " if cond else "FAIL ") + what)
    if not cond:
        failures.append(what)


def run(*args, env=None):
    e = dict(os.environ)
    e.pop("SLOPE1_CACHE", None)
    if env:
        e.update(env)
    p = subprocess.run([CLI, *args], capture_output=True, text=True, env=e, timeout=600)
    return p.returncode, p.stdout


def lines(out, v):
    objs = []
    for s in out.splitlines():
        obj = json.loads(s)
        errs = list(v.iter_errors(obj))
        if errs:
            check(False, "schema: " + errs[0].message + " in " + s[:120])
        objs.append(obj)
    return objs


# reduce: the three worked examples.
code, out = run("reduce", "--p", "5", "--k", "12", "--ap", "4830", "--ramification", "--llc")
(j,) = lines(out, REDUCE)
check(code == 0, "reduce p=5 k=12 exits 0")
check(j["reduction"]["lambda"] == {"a0": 1, "a1": 0}, "p=5 k=12: lambda = 1")
check([f["omega_exp"] for f in j["reduction"]["factors"]] == [2, 1], "p=5 k=12: w^2 + w")
check(j["ramification"] == "tres_ramifiee", "p=5 k=12: tres ramifiee")
check(j["precision_used"] == 3, "p=5 k=12: precision_used = 3")

code, out = run("reduce", "--p", "5", "--k", "16", "--ap", "52110", "--ramification")
(j,) = lines(out, REDUCE)
check(j["reduction"]["lambda"]["a0"] == 1 and j["ramification"] == "undetermined", "p=5 k=16: lambda = 1, undetermined")
check("2/3" in j.get("ramification_note", ""), "p=5 k=16: reason names r = 2/3 mod p")

code, out = run("reduce", "--p", "7", "--k", "12", "--ap", "-16744")
(j,) = lines(out, REDUCE)
check([f["omega_exp"] for f in j["reduction"]["factors"]] == [4, 1], "p=7 k=12: w^4 + w")
check("llc" not in j and "ramification" not in j, "optional sections are opt-in")

# Digit strings, a quadratic-branch lambda and an irreducible record.
for args in (["--p", "5", "--k", "12", "--ap", "1:1,3,3"], ["--p", "7", "--k", "93", "--ap", "21", "--llc"],
             ["--p", "7", "--k", "48", "--ap", "7", "--llc", "--ramification"]):
    code, out = run("reduce", *args)
    check(code == 0, "reduce " + " ".join(args))
    lines(out, REDUCE)

# Exit codes.
code, out = run("reduce", "--p", "5", "--k", "12", "--ap", "1:1")
(j,) = lines(out, ERROR)
check(code == 2 and j["needed_precision"] == 3 and "needed_precision = 3" in j["message"], "one digit: exit 2, needs 3")
for bad in (["--p", "5", "--k", "12", "--ap", "25"], ["--p", "3", "--k", "12", "--ap", "3"],
            ["--p", "5", "--k", "12", "--ap", "7"]):
    code, out = run("reduce", *bad)
    lines(out, ERROR)
    check(code == 3, "hypothesis violation exits 3: " + " ".join(bad))
code, _ = run("reduce", "--p", "5")
check(code == 3, "missing arguments exit 3")

# verify suites.
code, out = run("verify", "lemmas", "--p", "5,7", "--rmax", "120", "--all-items")
objs = lines(out, VERIFY)
check(code == 0 and objs[-1]["summary"] and objs[-1]["pass"] and len(objs) > 100, "verify lemmas passes")
code, out = run("verify", "structure", "--p", "7", "--r", "16..30", "--all-items")
objs = lines(out, VERIFY)
check(code == 0 and objs[-1]["pass"] and any(o.get("item") == "P_labels" for o in objs), "verify structure passes")
code, out = run("verify", "witnesses", "--case", "W4", "--p", "5", "--r", "13", "--all-items")
objs = lines(out, VERIFY)
check(code == 0 and objs[-1]["items"] == 4 and all(o["holds"] for o in objs[:-1]), "verify witnesses W4 passes")
code, out = run("verify", "witnesses", "--case", "W4", "--p", "5", "--r", "14")
check(code == 3, "witness case outside its hypotheses exits 3")

# sweep: the trichotomy at t = 1, an empty grid, and --out.
code, out = run("sweep", "--p", "5", "--r", "22", "--grid", "3")
objs = lines(out, SWEEP)
rows = [o for o in objs if "reduction" in o]
kinds = {(o["reduction"]["type"], o["reduction"].get("omega2_exp")) for o in rows}
check(code == 0 and len(rows) == 100, "sweep over units mod 125 has 100 rows")
check(kinds == {("irreducible", 3), ("irreducible", 7), ("reducible", None)}, "sweep realizes all three outcomes")
code, out = run("sweep", "--p", "5", "--r", "10", "--grid", "0")
objs = lines(out, SWEEP)
check(code == 0 and objs == [{"command": "sweep", "p": 5, "k": 12, "grid": 0, "rows": 0}], "empty grid, exit 0")

with tempfile.TemporaryDirectory() as tmp:
    table = Path(tmp) / "t.jsonl"
    code, out = run("sweep", "--p", "7", "--r", "16", "--grid", "1", "--out", str(table))
    rows = lines(table.read_text(), SWEEP)
    check(code == 0 and len(rows) == 6, "sweep --out writes 6 rows")
    check(len({json.dumps(r["reduction"]) for r in rows}) == 6, "p=7 r=16: outcome varies with the residue only")

    # Determinism and cache replay.
    args = ["reduce", "--p", "5", "--k", "12", "--ap", "4830", "--llc", "--ramification"]
    a = run(*args)
    b = run(*args)
    check(a == b, "reruns are byte-identical")
    cache = Path(tmp) / "cache.jsonl"
    cold = run(*args, env={"SLOPE1_CACHE": str(cache)})
    warm = run(*args, env={"SLOPE1_CACHE": str(cache)})
    check(cold == warm == a, "warm cache replays identical output")
    check(len(cache.read_text().splitlines()) == 1, "a cache hit appends nothing")
    for rec in cache.read_text().splitlines():
        errs = list(CACHE.iter_errors(json.loads(rec)))
        check(not errs, "cache record validates")
    # A hit is served from the file, not recomputed: doctor the record.
    rec = json.loads(cache.read_text())
    rec["stdout"] = rec["stdout"].replace("tres_ramifiee", "peu_ramifiee")
    with cache.open("a") as fh:
        fh.write(json.dumps(rec) + "\n")
    replay = run(*args, "--cache", str(cache))  # flag form; last write wins
    check("--cache" not in " ".join(args) and "peu_ramifiee" in replay[1], "cache replay is verbatim, last write wins")
    sw = ["sweep", "--p", "5", "--r", "22", "--grid", "2", "--out", str(Path(tmp) / "s.jsonl")]
    first = run(*sw, "--threads", "1", env={"SLOPE1_CACHE": str(cache)})
    t1 = (Path(tmp) / "s.jsonl").read_text()
    (Path(tmp) / "s.jsonl").unlink()
    second = run(*sw, env={"SLOPE1_CACHE": str(cache)})
    check(first == second and (Path(tmp) / "s.jsonl").read_text() == t1, "cached sweep rewrites the same table")

print(f"{len(failures)} failure(s)")
sys.exit(1 if failures else 0)
