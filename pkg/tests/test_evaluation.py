import pytest

from ccitt_ocr.evaluation import (
    MODES, EvalRow, ExperimentReport, average_accuracy, count_correct, evaluate, run_experiment,
)
from ccitt_ocr.fixtures import PageSpec, corpus_text
from ccitt_ocr.font import default_font
from ccitt_ocr.recognition import train_from_font


@pytest.fixture(scope="module")
def model():
    return train_from_font(default_font(), corpus_text())


def test_identical_and_empty_predictions():
    truth = ["quiet harbour", "ropes"]
    assert [r.accuracy("pass") for r in evaluate(truth, truth)] == [100.0, 100.0]
    assert [r.accuracy("pass") for r in evaluate(["", ""], truth)] == [0.0, 0.0]


@pytest.mark.parametrize("k", [0, 1, 3, 12])
def test_k_corruptions(k):
    truth = "quiet harbour"
    n = len(truth.replace(" ", ""))
    chars = list(truth.replace(" ", ""))
    for i in range(k):
        chars[i] = "#"
    (row,) = evaluate(["".join(chars)], [truth])
    assert row.correct["pass"] == n - k
    assert row.accuracy("pass") == pytest.approx(100 * (n - k) / n)


def test_matching_is_positional_without_spaces():
    assert count_correct("ab cd", "abcd") == 4
    # a dropped character shifts everything after it
    assert count_correct("acd", "abcd") == 1
    # longer predictions are capped at the truth length
    assert count_correct("abcdef", "abcd") == 4


def test_missing_predicted_lines_score_zero():
    rows = evaluate(["quiet"], ["quiet", "harbour"])
    assert [r.accuracy("pass") for r in rows] == [100.0, 0.0]
    assert (rows[1].n_chars, rows[1].n_words) == (7, 1)


def test_row_invariant():
    with pytest.raises(ValueError):
        EvalRow(3, 1, {"pass": 4})
    with pytest.raises(ValueError):
        EvalRow(3, 1, {"pass": -1})


def test_average_is_unweighted():
    rows = [EvalRow(10, 2, {"pass": 5}), EvalRow(2, 1, {"pass": 2})]
    assert average_accuracy(rows, "pass") == pytest.approx(75.0)
    assert average_accuracy([], "pass") is None


def test_empty_page_list(model):
    report = run_experiment([], model, ["pass"])
    assert report.rows == []
    assert report.average("pass") is None
    assert report.format().splitlines()[-1].split()[-1] == "n/a"


def test_blank_page_gives_no_rows(model):
    report = run_experiment([PageSpec()], model, ["pass"])
    assert report.rows == [] and report.predictions == {"pass": []}


def test_report_layout_and_determinism(model):
    pages = [PageSpec(("quiet harbour", "rope and sail"))]
    a = run_experiment(pages, model)
    b = run_experiment(pages, model)
    assert a.format() == b.format()
    lines = a.format().splitlines()
    assert len(lines) == 1 + 2 + 1
    assert lines[1].split()[1] == "12/2"
    assert a.predictions["pass"] == ["quiet harbour", "rope and sail"]
    assert set(a.predictions) == set(MODES)


def test_report_format_of_known_rows():
    report = ExperimentReport(("pass",), [EvalRow(4, 1, {"pass": 3})])
    assert "3 (75.00%)" in report.format()
    assert report.format().splitlines()[-1].endswith("75.00%")
