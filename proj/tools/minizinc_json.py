#!/usr/bin/env python3
"""Run MiniZinc on a model and print the solver result document.

Usage: minizinc_json.py [--all | --limit K] model.mzn

Prints {"candidates": [...], "status": "..."} on stdout. The MiniZinc
executable is taken from $MINIZINC (default: minizinc on PATH); extra
solver flags can be passed through $MINIZINC_FLAGS.
"""

import argparse
import json
import os
import re
import shlex
import subprocess
import sys

SEPARATOR = "----------"
COMPLETE = "=========="
UNSAT = "=====UNSATISFIABLE====="


def main():
    ap = argparse.ArgumentParser()
    group = ap.add_mutually_exclusive_group()
    group.add_argument("--all", action="store_true")
    group.add_argument("--limit", type=int)
    ap.add_argument("model")
    args = ap.parse_args()

    with open(args.model, encoding="utf-8") as f:
        source = f.read()
    optimizing = re.search(r"^\s*solve\s+(minimize|maximize)\b", source, re.M) is not None

    cmd = [os.environ.get("MINIZINC", "minizinc"), "--output-mode", "json"]
    cmd += shlex.split(os.environ.get("MINIZINC_FLAGS", ""))
    if args.all and not optimizing:
        cmd.append("--all-solutions")
    elif args.limit:
        cmd += ["-n", str(args.limit)]
    cmd.append(args.model)

    proc = subprocess.run(cmd, capture_output=True, text=True)
    if proc.returncode != 0:
        sys.stderr.write(proc.stderr)
        return proc.returncode

    solutions, chunk, complete, unsat = [], [], False, False
    for line in proc.stdout.splitlines():
        if line == SEPARATOR:
            text = "\n".join(chunk).strip()
            if text:
                solutions.append(json.loads(text))
            chunk = []
        elif line == COMPLETE:
            complete = True
        elif line == UNSAT:
            unsat = True
        elif line.startswith("=====") and line.endswith("====="):
            sys.stderr.write("solver reported " + line.strip("=") + "\n")
            return 1
        else:
            chunk.append(line)

    if unsat or not solutions:
        status = "UNSATISFIABLE"
    elif optimizing:
        solutions = solutions[-1:]
        status = "OPTIMAL" if complete else "SATISFIED"
    elif args.limit and len(solutions) >= args.limit and not complete:
        status = "LIMIT_REACHED"
    else:
        status = "SATISFIED"

    json.dump({"candidates": solutions, "status": status}, sys.stdout)
    sys.stdout.write("\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
