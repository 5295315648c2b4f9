"""Acceptance suite: one pass/fail line per criterion.

Run directly (``python tests/test_acceptance.py``) to print only the lines,
or through pytest, which repeats them in the terminal summary.
"""

import pytest

from nicepairs import acceptance

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script from elsewhere
    ACCEPTANCE_LINES = []


@pytest.mark.parametrize("number", sorted(acceptance.CRITERIA))
def test_criterion(number):
    (result,) = acceptance.run([number])
    line = result.line()
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert result.passed, result.details


if __name__ == "__main__":
    for r in acceptance.run():
        print(r.line())
