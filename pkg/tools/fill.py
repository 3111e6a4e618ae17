"""Run pytest, collect vectors under fixtures/ and optionally mirror them as YAML."""

from __future__ import annotations

import argparse
import os
import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
OUT = ROOT / "fixtures"


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=str(OUT))
    parser.add_argument("--vectors", action="store_true", help="run fixtures_to_vectors afterwards")
    parser.add_argument("pytest_args", nargs="*", help="extra arguments passed to pytest")
    args = parser.parse_args()

    env = dict(os.environ)
    env["PYTHONPATH"] = os.pathsep.join([str(ROOT / "src"), str(ROOT)])
    cmd = [sys.executable, "-m", "pytest", str(ROOT / "tests"), "-q", "--output", args.out, *args.pytest_args]
    print("Running:", " ".join(cmd))
    rc = subprocess.call(cmd, env=env, cwd=str(ROOT))
    if rc != 0 or not args.vectors:
        return rc
    convert = [sys.executable, str(ROOT / "tools" / "fixtures_to_vectors.py"), "--fixtures", args.out]
    print("Running:", " ".join(convert))
    return subprocess.call(convert, env=env, cwd=str(ROOT))


if __name__ == "__main__":
    raise SystemExit(main())
