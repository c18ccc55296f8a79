"""One test per acceptance criterion.

Each result line is also collected and printed in the terminal summary, so
the PASS/FAIL list shows up without ``-s``.
"""

import pytest

from sftgroup.acceptance import CRITERIA, run_criterion

from conftest import ACCEPTANCE_LINES


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(request, number):
    result = run_criterion(number, seed=0)
    lines = [result.line()] + ["    " + f for f in result.failures[:10]]
    request.config.stash.setdefault(ACCEPTANCE_LINES, []).extend(lines)
    print("\n".join(lines))
    assert result.passed, result.detail
