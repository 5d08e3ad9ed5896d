import pytest

from improj.acceptance import CRITERIA, run_acceptance


@pytest.mark.slow
@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    (res,) = run_acceptance([number], seed=0)
    with capsys.disabled():
        print("\n" + res.line())
    assert res.passed, res.summary
