#!/usr/bin/env python3
"""Rewrite tests/golden/expected from tests/golden/inputs with the built CLI.

Usage: tools/regen_golden.py BUILD_DIR
Review the diff before committing: expected files are frozen oracles.
"""
import json
import pathlib
import subprocess
import sys
import tempfile

root = pathlib.Path(__file__).resolve().parent.parent
cli = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else root / "build") / "padic_cli"
inputs = root / "tests" / "golden" / "inputs"
expected = root / "tests" / "golden" / "expected"
expected.mkdir(exist_ok=True)
codes = {}
for path in sorted(inputs.glob("*.json")):
    case = json.loads(path.read_text())
    with tempfile.NamedTemporaryFile("w", suffix=".json") as tmp:
        json.dump(case["input"], tmp)
        tmp.flush()
        proc = subprocess.run([str(cli), *case["verb"].split("."), "--in", tmp.name],
                              capture_output=True, text=True)
    (expected / path.name).write_text(proc.stdout)
    codes[path.stem] = proc.returncode
    print(f"{path.stem}: exit {proc.returncode}")
(expected / "exit_codes.json").write_text(json.dumps(codes, indent=2) + "\n")
