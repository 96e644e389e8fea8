#!/usr/bin/env python3
"""Run the acceptance suite and print one PASS/FAIL line per criterion.

Thin wrapper over pytest so the criterion prints (emitted by the tests
themselves) reach the terminal; exits nonzero if any criterion fails.
"""

import subprocess
import sys
from pathlib import Path


def main() -> int:
    tests = Path(__file__).resolve().parent.parent / "tests" / "test_acceptance.py"
    cmd = [sys.executable, "-m", "pytest", str(tests), "-q", "-s", *sys.argv[1:]]
    return subprocess.call(cmd)


if __name__ == "__main__":
    sys.exit(main())
