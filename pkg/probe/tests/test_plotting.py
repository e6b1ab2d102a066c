import pytest

from mlmprobe.plotting import EmptyReportError, plot_restarts


def fake_result(paradigm, accuracy):
    return {
        "kind": "eval-result",
        "paradigm": paradigm,
        "predictor": "mlm:test",
        "seed": 0,
        "splits": {"test": {"test_pair_accuracy": accuracy,
                            "train_pair_accuracy": 1.0}},
    }


def test_plot_many_runs(tmp_path):
    results = [fake_result(p, i / 20)
               for p in ("saux_inv", "reflexive", "npi", "tense")
               for i in range(20)]
    out = tmp_path / "fig.png"
    plot_restarts(results, out)
    assert out.exists() and out.stat().st_size > 0


def test_plot_single_run(tmp_path):
    out = tmp_path / "one.png"
    plot_restarts([fake_result("npi", 0.1)], out)
    assert out.exists()


def test_empty_reports_rejected(tmp_path):
    with pytest.raises(EmptyReportError):
        plot_restarts([], tmp_path / "nope.png")


def test_out_of_range_accuracy_rejected(tmp_path):
    with pytest.raises(ValueError):
        plot_restarts([fake_result("npi", 1.5)], tmp_path / "bad.png")
