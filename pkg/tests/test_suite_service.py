import json

import numpy as np
import pytest

from config.settings import Settings
from models.errors import PreconditionError
from models.quantum_models import CriterionResult
from services.io_service import dumps
from services.suite_service import CRITERIA, SuiteRunner

SMALL = 0.001


def check_fine(seed, scale):
    return CriterionResult(2, "fine", True)


@pytest.mark.parametrize("check", CRITERIA, ids=lambda c: c.__name__)
def test_each_criterion_passes_at_small_scale(check):
    result = check(0, SMALL)
    assert result.passed, result.detail
    assert type(result.passed) is bool
    json.loads(dumps(result.to_dict()))


def test_criterion_result_coerces_numpy_bool():
    result = CriterionResult(1, "numpy", np.float64(0.5) < 1.0)
    assert type(result.passed) is bool
    assert json.loads(dumps(result.to_dict()))["passed"] is True


def test_criterion_numbers_follow_the_table():
    results = [check(3, SMALL) for check in CRITERIA[3:6]]
    assert [r.number for r in results] == [4, 5, 6]


def test_suite_report():
    report = SuiteRunner(Settings(seed=5, suite_scale=SMALL)).run()
    assert report.all_passed
    assert report.seed == 5
    assert [r.number for r in report.results] == list(range(1, 10))
    data = json.loads(dumps(report.to_dict()))
    assert data["all_passed"] is True and len(data["criteria"]) == 9
    assert report.table().splitlines()[1].endswith("PASS")


@pytest.mark.parametrize("error, expected", [
    (PreconditionError("boom"), "PreconditionError: boom"),
    (ValueError("shapes not aligned"), "ValueError: shapes not aligned"),
    (TypeError("unhashable"), "TypeError: unhashable"),
])
def test_raising_criterion_becomes_failed_row(error, expected):
    def check_broken(seed, scale):
        raise error

    report = SuiteRunner(Settings(), criteria=(check_broken, check_fine)).run(seed=1)
    assert not report.all_passed
    assert report.results[0].title == "broken"
    assert report.results[0].detail == {"error": expected}
    assert report.results[1].passed
    assert "FAIL" in report.table()
    json.loads(dumps(report.to_dict()))


def test_seed_argument_overrides_settings():
    runner = SuiteRunner(Settings(seed=9), criteria=(check_fine,))
    assert runner.run().seed == 9
    assert runner.run(seed=4).seed == 4
