"""Run the acceptance criteria and print one PASS/FAIL line each."""

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "tests"))

import test_acceptance  # noqa: E402

if __name__ == "__main__":
    failed = 0
    for name in sorted(n for n in dir(test_acceptance) if n.startswith("test_criterion_")):
        try:
            getattr(test_acceptance, name)()
        except AssertionError:
            failed += 1
    print(f"{8 - failed}/8 criteria pass")
    sys.exit(1 if failed else 0)
