"""One test per acceptance criterion; each prints a PASS/FAIL line in the summary."""

import pytest

from covertnet.acceptance import CRITERIA


@pytest.mark.slow
@pytest.mark.parametrize("criterion", sorted(CRITERIA))
def test_criterion(criterion, acceptance_log):
    results = CRITERIA[criterion]()
    ok = all(r.passed for r in results)
    acceptance_log.append(f"criterion {criterion}: {'PASS' if ok else 'FAIL'}")
    acceptance_log.extend("    " + r.line() for r in results)
    failed = [r.line() for r in results if not r.passed]
    assert not failed, "\n".join(failed)
