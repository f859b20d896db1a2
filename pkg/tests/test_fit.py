import math

import mpmath
import pytest

from sumgauss.approx import K_AREA
from sumgauss.errors import ContractError, NoSolution
from sumgauss.fit import FitConfig, fit_nodes, fit_random, upper_boundary_params
from sumgauss.geometry import BoundTable, Scheme, bounds, half_step_table, validate
from sumgauss.oracle import p_exact

from oracles import p_mp

HALF_W = (0.5, 0.25, 0.25)
HALF_NODES = (1.0, math.sqrt(2.0), 2.0)


@pytest.fixture(scope="module")
def half_step_fit():
    return fit_nodes(half_step_table(), HALF_W, HALF_NODES)


class TestNodes:
    def test_recovers_published(self, half_step_fit):
        for got, want in zip(half_step_fit.k, (1.025187, 1.1249, 1.31336)):
            assert abs(got - want) < 1e-3

    def test_residuals_independent(self, half_step_fit):
        # Q(t_i) re-evaluated in 40-digit arithmetic
        with mpmath.workdps(40):
            for t in HALF_NODES:
                approx_sq = 1 - sum(
                    mpmath.mpf(w) * mpmath.exp(-(mpmath.mpf(k) * t) ** 2 / 2)
                    for k, w in zip(half_step_fit.k, HALF_W)
                )
                assert abs(approx_sq - p_mp(t) ** 2) < 1e-10

    def test_inside_table(self, half_step_fit):
        assert validate(half_step_fit, half_step_table())

    def test_single_width(self):
        t = 1.3
        params = fit_nodes(BoundTable(((1.0, K_AREA),)), (1.0,), (t,))
        # invert P(t)^2 = 1 - exp(-k^2 t^2 / 2)
        k = math.sqrt(-2.0 * math.log1p(-p_exact(t) ** 2)) / t
        assert params.k[0] == pytest.approx(k, abs=1e-12)

    def test_no_root_reports_corners(self):
        with pytest.raises(NoSolution) as info:
            fit_nodes(BoundTable(((1.3, 1.4),)), (1.0,), (1.0,))
        assert info.value.corner_signs == {(1.3,): ("+",), (1.4,): ("+",)}

    def test_widths_below_one_rejected(self):
        # the only sign change in [0.5, 1] would be a width under 1; there is none
        # for the exact P, so the solver must not invent one
        with pytest.raises(NoSolution):
            fit_nodes(BoundTable(((0.5, 1.0),)), (1.0,), (1.0,))

    def test_two_width_system(self):
        # sign changes of the deviation of the published pair (1.01, 1.23345)
        nodes = (0.96711812, 2.0838724)
        table = bounds(Scheme(2, 1))
        params = fit_nodes(table, (0.5, 0.5), nodes)
        assert validate(params, table)
        assert params.k == pytest.approx((1.01, 1.23345), abs=1e-5)
        for t in nodes:
            assert abs(sum(w * math.exp(-(k * t) ** 2 / 2) for k, w in zip(params.k, params.w))
                       - (1 - p_exact(t) ** 2)) < 1e-10

    @pytest.mark.parametrize("nodes", [(1.0, 2.0), (2.0, 1.0, 3.0), (0.0, 1.0, 2.0)])
    def test_bad_nodes(self, nodes):
        with pytest.raises(ContractError):
            fit_nodes(half_step_table(), HALF_W, nodes)


class TestRandom:
    def test_two_term_precision(self):
        table = bounds(Scheme(2, 1))
        params, report = fit_random(table, (0.5, 0.5), FitConfig(iterations=20000, seed=0))
        assert validate(params, table)
        assert report.max_abs_dev <= 0.00024 * 1.5

    def test_single_draw_deterministic(self):
        table = bounds(Scheme(2, 2))
        cfg = FitConfig(iterations=1, seed=12345, refine=False)
        a = fit_random(table, [0.25] * 4, cfg)
        b = fit_random(table, [0.25] * 4, cfg)
        assert a[0].k == b[0].k and a[1] == b[1]

    def test_thread_count_invariant(self):
        table = bounds(Scheme(3, 1))
        runs = [
            fit_random(table, [1 / 3] * 3, FitConfig(iterations=3000, seed=7, threads=n))
            for n in (1, 3, 8)
        ]
        assert all(r[0].k == runs[0][0].k and r[1] == runs[0][1] for r in runs)

    def test_prefix_monotone(self):
        table = bounds(Scheme(2, 2))
        errs = [
            fit_random(table, [0.25] * 4, FitConfig(iterations=m, seed=3, refine=False))[1].grid_max_abs_dev
            for m in (1, 10, 255, 256, 257, 1000, 3000)
        ]
        assert all(b <= a for a, b in zip(errs, errs[1:]))

    def test_zero_iterations(self):
        with pytest.raises(ContractError):
            fit_random(bounds(Scheme(2, 1)), (0.5, 0.5), FitConfig(iterations=0))

    def test_weight_count(self):
        with pytest.raises(ContractError):
            fit_random(bounds(Scheme(2, 1)), (1.0,), FitConfig(iterations=5))


class TestUpperBoundary:
    def test_binary_one(self):
        p = upper_boundary_params(Scheme(2, 1))
        assert p.k == pytest.approx((1 / math.cos(math.pi / 8), math.sqrt(2)), abs=1e-15)
        assert p.w == (0.5, 0.5)

    def test_ternary_one(self):
        p = upper_boundary_params(Scheme(3, 1))
        expected = (1 / math.cos(math.pi / 12), 1 / math.cos(math.pi / 6), math.sqrt(2))
        assert p.k == pytest.approx(expected, abs=1e-15)

    def test_depth_zero(self):
        assert upper_boundary_params(Scheme(2, 0)).k == (math.sqrt(2),)

    @pytest.mark.parametrize("base,depth", [(2, 4), (3, 3)])
    def test_validates(self, base, depth):
        scheme = Scheme(base, depth)
        assert validate(upper_boundary_params(scheme), bounds(scheme))


def test_published_sets_inside_tables():
    assert validate((1.00725, 1.04665, 1.12192, 1.3129), bounds(Scheme(2, 2)))
    assert validate((1.02335, 1.05674, 1.28633), bounds(Scheme(3, 1)))
    assert validate((1.025187, 1.1249, 1.31336), half_step_table())
