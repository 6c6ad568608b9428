from qreact.props import (
    PropsReport,
    Trial,
    check_classical_bound,
    check_local_unitary,
    check_locc,
    check_metric,
    run_check,
    trial_seed,
)


def test_metric_battery():
    rep = check_metric(40, seed=1)
    assert rep.passed, rep.failures()


def test_locc_battery_small_grid():
    rep = check_locc(lambdas=(0.4, 1.0), ps=(0.1, 0.5, 0.9), seed=2)
    assert rep.passed and len(rep.trials) == 6


def test_lu_battery_small():
    rep = check_local_unitary(6, seed=4, samples=2048)
    assert rep.passed


def test_classical_bound_battery():
    assert check_classical_bound(2, seed=5).passed


def test_report_pass_rules():
    ok = Trial(0, 1, True, "ok")
    soft = Trial(1, 2, False, "outside", hard=False)
    hard = Trial(2, 3, False, "broken")
    assert PropsReport("x", [ok] * 48 + [soft] * 2, 0.96).passed
    assert not PropsReport("x", [ok] * 47 + [soft] * 3, 0.96).passed
    assert not PropsReport("x", [ok] * 49 + [hard], 0.96).passed
    assert not PropsReport("x", [], 1.0).passed


def test_trial_seeds_distinct_and_stable():
    seeds = [trial_seed(0, t) for t in range(100)]
    assert len(set(seeds)) == 100
    assert seeds == [trial_seed(0, t) for t in range(100)]


def test_run_check_dispatch():
    import pytest

    from qreact.errors import UsageError

    assert run_check("metric", 5).check == "metric"
    with pytest.raises(UsageError):
        run_check("nonsense")
