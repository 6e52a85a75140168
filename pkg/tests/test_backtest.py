from datetime import date

import numpy as np
import pytest

from netfolio.backtest import herfindahl, run_backtest, turnover
from netfolio.errors import BacktestError, NetfolioError
from netfolio.market_data import ReturnPanel, plan_windows
from netfolio.strategies import Strategy
from netfolio.synthetic import synthetic_panel, weekday_dates_by_months


class TestHerfindahl:
    @pytest.mark.parametrize("n", [2, 5, 10, 26])
    def test_equal_weights_exactly_zero(self, n):
        assert herfindahl(np.full(n, 1.0 / n)) == 0.0

    @pytest.mark.parametrize("n", [2, 7])
    def test_single_asset_is_one(self, n):
        w = np.zeros(n)
        w[0] = 1.0
        assert herfindahl(w) == pytest.approx(1.0, abs=1e-15)

    def test_hand_arithmetic(self):
        assert herfindahl(np.array([0.75, 0.25])) == pytest.approx(0.25, abs=1e-15)

    def test_single_asset_universe_rejected(self):
        with pytest.raises(NetfolioError, match="at least 2"):
            herfindahl(np.ones(1))


class TestTurnover:
    def test_identical_vectors(self):
        w = np.array([0.3, 0.7])
        assert turnover(w, w) == 0.0

    def test_maximal_rebalance(self):
        assert turnover(np.array([1.0, 0.0]), np.array([0.0, 1.0])) == 2.0

    def test_hand_arithmetic(self):
        got = turnover(np.array([0.5, 0.5]), np.array([0.6, 0.4]))
        assert got == pytest.approx(0.2, abs=1e-15)

    def test_length_mismatch(self):
        with pytest.raises(NetfolioError, match="mismatch"):
            turnover(np.ones(2) / 2, np.ones(3) / 3)


def identical_asset_panel(months=9, seed=5):
    """Two columns carrying the same return series."""
    dates = weekday_dates_by_months(date(2021, 1, 1), months)
    r = np.random.default_rng(seed).standard_normal(len(dates)) * 0.01
    return ReturnPanel(dates=tuple(dates), assets=("a", "b"),
                       returns=np.column_stack([r, r]))


class TestRunBacktest:
    def test_identical_assets_reproduce_asset_returns(self):
        panel = identical_asset_panel()
        plan = plan_windows(panel, 6, 1)
        for strategy in Strategy:
            report = run_backtest(panel, plan, strategy, grid_size=51)
            start = plan.windows[0][1][0]
            end = plan.windows[-1][1][1]
            expected = panel.returns[start:end, 0]
            assert np.allclose(report.oos_returns, expected, atol=1e-12)

    def test_ew_constant_weights_zero_turnover(self, small_panel):
        plan = plan_windows(small_panel, 6, 1)
        report = run_backtest(small_panel, plan, Strategy.EW)
        for rec in report.per_window:
            assert np.array_equal(rec.weights, np.full(3, 1.0 / 3.0))
            assert rec.herfindahl == 0.0
            assert rec.avg_clustering is None
        assert report.per_window[0].turnover is None
        assert all(rec.turnover == 0.0 for rec in report.per_window[1:])

    def test_deterministic_reports_bitwise(self):
        panel = synthetic_panel(2, 0.4, 1, months=30, seed=17)
        plan = plan_windows(panel, 6, 1)
        a = run_backtest(panel, plan, Strategy.PNA, grid_size=101)
        b = run_backtest(panel, plan, Strategy.PNA, grid_size=101)
        assert np.array_equal(a.oos_returns, b.oos_returns)
        assert np.array_equal(a.cumulative_value, b.cumulative_value)
        for ra, rb in zip(a.per_window, b.per_window):
            assert np.array_equal(ra.weights, rb.weights)
            assert ra.herfindahl == rb.herfindahl
            assert ra.turnover == rb.turnover
            assert ra.avg_clustering == rb.avg_clustering

    def test_no_lookahead_by_mutation(self):
        panel = synthetic_panel(2, 0.4, 1, months=30, seed=23)
        plan = plan_windows(panel, 6, 1)
        target = 3
        base = run_backtest(panel, plan, Strategy.GMV)

        mutated = panel.returns.copy()
        (_, _), (c, d) = plan.windows[target]
        mutated[c, 0] += 0.25  # poke the first oos observation of the window
        panel2 = ReturnPanel(dates=panel.dates, assets=panel.assets, returns=mutated)
        changed = run_backtest(panel2, plan, Strategy.GMV)

        assert np.array_equal(base.per_window[target].weights,
                              changed.per_window[target].weights)
        # the mutated day itself must show up downstream
        assert not np.allclose(base.oos_returns, changed.oos_returns)

    def test_window_accounting_partitions_period(self, small_panel):
        plan = plan_windows(small_panel, 6, 1)
        report = run_backtest(small_panel, plan, Strategy.EW)
        total = sum(d - c for _, (c, d) in plan.windows)
        assert report.oos_returns.shape[0] == total
        assert len(report.oos_dates) == total
        assert list(report.oos_dates) == sorted(set(report.oos_dates))

    def test_cumulative_value_positive_and_compounded(self, small_panel):
        plan = plan_windows(small_panel, 6, 1)
        report = run_backtest(small_panel, plan, Strategy.GMV)
        assert np.all(report.cumulative_value > 0.0)
        assert report.cumulative_value[-1] == pytest.approx(
            np.exp(report.oos_returns.sum()), rel=1e-12)

    def test_network_strategy_records_average_clustering(self, small_panel):
        plan = plan_windows(small_panel, 6, 1)
        report = run_backtest(small_panel, plan, Strategy.PNA, grid_size=51)
        for rec in report.per_window:
            assert rec.avg_clustering is not None
            assert 0.0 <= rec.avg_clustering <= 1.0

    def test_turnover_bounds_for_long_only(self, small_panel):
        plan = plan_windows(small_panel, 6, 1)
        for strategy in (Strategy.GMV, Strategy.PNA):
            report = run_backtest(small_panel, plan, strategy, grid_size=51)
            for rec in report.per_window[1:]:
                assert 0.0 <= rec.turnover <= 2.0

    def test_estimation_failure_names_window(self):
        # constant column appears from window 1 onward: estimation must
        # fail there and the error must carry the window id
        dates = weekday_dates_by_months(date(2021, 1, 1), 9)
        rng = np.random.default_rng(1)
        r = rng.standard_normal((len(dates), 2)) * 0.01
        month_of = np.array([(d.year, d.month) for d in dates])
        first_month = [i for i, d in enumerate(dates)
                       if (d.year, d.month) == tuple(month_of[0])]
        r[max(first_month) + 1:, 1] = 0.0  # zero variance once month 0 rolls out
        panel = ReturnPanel(dates=tuple(dates), assets=("a", "b"), returns=r)
        plan = plan_windows(panel, 6, 1)
        with pytest.raises(BacktestError, match="window 1"):
            run_backtest(panel, plan, Strategy.GMV)
