"""
平移解计算测试：eps 正则化、延拓外推、径向打靶基准、积分公式
"""

import math
import unittest

import numpy as np
import pytest
from scipy import integrate

from tflow.diagnostics import (
    CHECK_NAMES,
    build_report,
    check_hypotheses,
    check_lambda_sign,
    check_osc_contraction,
    check_translator_convergence,
    check_uniqueness,
    estimate_order,
    shared_snapshots,
)
from tflow.exceptions import SolverStallError
from tflow.flow import rhs, run_flow
from tflow.geometry import make_descriptor
from tflow.mesh import ScalarField, build_mesh, domain_mean, normal_derivative, oscillation_of_difference
from tflow.translator import (
    continuation,
    extrapolate_to_zero,
    is_monotone,
    lambda_integral,
    radial_oracle,
    solve_eps_bvp,
)
from tflow.types import CheckStatus, FlowConfig, TranslatorConfig

FLAT = make_descriptor('flat')
SPHERE = make_descriptor('sphere-cap')
SCHEDULE = (3e-2, 1e-2, 3e-3)


class TestExtrapolation:
    """测试 eps -> 0 外推"""

    def test_exact_line(self):
        """测试精确线性数据的截距"""
        eps = [1e-1, 3e-2, 1e-2, 3e-3, 1e-3]
        values = [-0.2 + 0.5 * e for e in eps]
        intercept, residual = extrapolate_to_zero(eps, values)
        assert intercept == pytest.approx(-0.2, abs=1e-14)
        assert residual < 1e-14

    def test_uses_last_three_points(self):
        """测试只用最后三个点拟合"""
        eps = [1.0, 1e-2, 5e-3, 1e-3]
        values = [100.0, 0.01, 0.005, 0.001]
        intercept, _ = extrapolate_to_zero(eps, values)
        assert intercept == pytest.approx(0.0, abs=1e-12)

    def test_short_schedules(self):
        """测试一个点原样返回，两个点取直线截距"""
        assert extrapolate_to_zero([0.1], [0.3]) == (0.3, 0.0)
        intercept, residual = extrapolate_to_zero([0.2, 0.1], [0.5, 0.4])
        assert intercept == pytest.approx(0.3)
        assert residual == pytest.approx(0.0, abs=1e-14)

    def test_monotone(self):
        """测试单调性判断"""
        assert is_monotone([0.3, 0.2, 0.1])
        assert is_monotone([0.1, 0.1, 0.2])
        assert not is_monotone([0.1, 0.3, 0.2])


class TestRadialOracle:
    """测试径向打靶基准解"""

    def test_zero_data(self):
        """测试 a = 0 时 lambda = 0, w = 0"""
        result = radial_oracle(0.0, FLAT)
        assert result.lam == 0.0
        assert np.all(result.w == 0.0)

    def test_flat_bounds(self):
        """测试平直单位圆盘 a = 0.1 时 lambda 落在 (-2a, -2a/sqrt(1+a^2))"""
        result = radial_oracle(0.1, FLAT)
        assert -0.2 < result.lam < -0.2 / math.sqrt(1.01)
        assert result.p[-1] == pytest.approx(-0.1, abs=1e-8)
        assert result.p[0] == 0.0

    def test_profile_mean_zero(self):
        """测试剖面的面积均值为零"""
        result = radial_oracle(0.2, SPHERE)
        f = np.concatenate([[0.0], SPHERE.f(result.r[1:])])
        assert integrate.trapezoid(result.w * f, result.r) == pytest.approx(0.0, abs=1e-12)

    def test_odd_in_a(self):
        """测试 lambda(-a) = -lambda(a), w(-a) = -w(a)"""
        plus = radial_oracle(0.15, SPHERE)
        minus = radial_oracle(-0.15, SPHERE)
        assert plus.lam < 0
        assert minus.lam == pytest.approx(-plus.lam, abs=1e-10)
        np.testing.assert_allclose(minus.w, -plus.w, atol=1e-8)

    def test_sphere_cap_first_order(self):
        """测试小 a 时 lambda 接近 -a L / A"""
        a = 0.05
        guess = -a * math.sin(1.0) / (1.0 - math.cos(1.0))
        assert radial_oracle(a, SPHERE).lam == pytest.approx(guess, rel=2e-2)

    def test_field_on_mesh(self):
        """测试剖面插值到网格节点"""
        mesh = build_mesh(FLAT, 1.0, 8, 16)
        field = radial_oracle(0.1, FLAT).field(mesh)
        assert field.values.shape == mesh.shape
        np.testing.assert_allclose(field.values[:, 0], field.values[:, 5])


class TestLambdaIntegral:
    """测试由散度定理得到的 lambda 公式"""

    def test_zero_phi(self):
        """测试 phi = 0 时为零"""
        mesh = build_mesh(FLAT, 1.0, 8, 16)
        w = ScalarField.from_cartesian(mesh, lambda x, y: x * y)
        assert lambda_integral(w, ScalarField.constant(mesh)) == 0.0

    def test_flat_w_zero(self):
        """测试 w = 0 时 lambda = -a L / A = -2a"""
        mesh = build_mesh(FLAT, 1.0, 16, 32)
        phi = ScalarField.constant(mesh, 0.1)
        assert lambda_integral(ScalarField.constant(mesh), phi) == pytest.approx(-0.2, abs=1e-12)


class TestEpsSolver(unittest.TestCase):
    """测试 eps 正则化边值问题"""

    def setUp(self):
        self.mesh = build_mesh(FLAT, 1.0, 8, 16)

    def test_zero_data(self):
        """测试 phi = 0、零初值时立即收敛到零"""
        zero = ScalarField.constant(self.mesh)
        solution = solve_eps_bvp(0.1, zero, zero)
        self.assertEqual(solution.steps, 0)
        self.assertEqual(solution.eps_mean, 0.0)
        self.assertEqual(np.abs(solution.u.values).max(), 0.0)

    def test_rejects_non_positive_eps(self):
        """测试 eps 必须为正"""
        zero = ScalarField.constant(self.mesh)
        with self.assertRaises(ValueError):
            solve_eps_bvp(0.0, zero, zero)

    def test_solution_satisfies_equation(self):
        """测试 eps u = rhs(u) 且 D_nu u = phi"""
        phi = ScalarField.constant(self.mesh, 0.1)
        solution = solve_eps_bvp(0.1, phi, ScalarField.constant(self.mesh), tol_ell=1e-8)

        residual = np.abs(0.1 * solution.u.interior - rhs(solution.u).interior).max()
        self.assertLess(residual, 1e-7)
        np.testing.assert_allclose(normal_derivative(solution.u), 0.1, atol=1e-10)
        self.assertLess(solution.eps_mean, 0.0)
        self.assertAlmostEqual(solution.eps_mean, 0.1 * domain_mean(solution.u), places=10)

    def test_tau_budget(self):
        """测试伪时间预算用尽时报 SolverStallError，预算必须为正"""
        phi = ScalarField.constant(self.mesh, 0.1)
        with self.assertRaises(SolverStallError) as context:
            solve_eps_bvp(0.1, phi, ScalarField.constant(self.mesh), tau_max=1e-3)
        self.assertIn('(1 steps)', str(context.exception))
        with self.assertRaises(ValueError):
            solve_eps_bvp(0.1, phi, ScalarField.constant(self.mesh), tau_max=0.0)

    def test_converges_within_default_budget(self):
        """测试逐环步长下 16x32 网格在默认预算内收敛到 1e-9"""
        mesh = build_mesh(FLAT, 1.0, 16, 32)
        phi = ScalarField.constant(mesh, 0.1)
        solution = solve_eps_bvp(0.1, phi, ScalarField.constant(mesh))
        self.assertLess(solution.residual, 1e-9)
        self.assertLess(solution.steps * 0.2 * mesh.dr**2, 0.25 * TranslatorConfig.tau_max)
        np.testing.assert_allclose(normal_derivative(solution.u), 0.1, atol=1e-10)


class TestContinuation(unittest.TestCase):
    """测试延拓求 lambda 与 w，并与演化及径向基准比较"""

    @classmethod
    def setUpClass(cls):
        mesh = build_mesh(FLAT, 1.0, 8, 16)
        cls.mesh = mesh
        cls.phi = ScalarField.constant(mesh, 0.1)
        cls.result = continuation(cls.phi, SCHEDULE)
        cls.oracle = radial_oracle(0.1, FLAT)

    def test_matches_oracle(self):
        """测试 lambda_eps 与径向基准一致"""
        self.assertLess(abs(self.result.lambda_eps - self.oracle.lam), 5e-3)

    def test_profile_matches_oracle(self):
        """测试 w 与径向剖面只差一个常数"""
        gap = self.result.w - self.oracle.field(self.mesh)
        self.assertLess(gap.oscillation(interior_only=True), 1e-2)

    def test_integral_formula(self):
        """测试积分公式给出的 lambda 与外推值一致"""
        tolerance = max(1e-3, 50 * self.mesh.h**2)
        self.assertLess(abs(self.result.lambda_eps - self.result.lambda_integral), tolerance)

    def test_profile(self):
        """测试 w 均值为零、边界条件精确、方程残差小"""
        result = self.result
        self.assertAlmostEqual(domain_mean(result.w), 0.0, places=12)
        self.assertLess(result.residual_bc, 1e-10)
        self.assertLess(result.residual_pde, 100 * self.mesh.h**2)

    def test_trace(self):
        """测试外推记录"""
        trace = self.result.eps_trace
        self.assertEqual(trace.shape, (3, 3))
        np.testing.assert_array_equal(trace[:, 0], SCHEDULE)
        self.assertTrue(np.all(trace[:, 1] < 0))
        self.assertFalse(self.result.extrapolation_unstable)
        self.assertEqual(len(self.result.eps_osc), 3)
        self.assertTrue(math.isnan(self.result.lambda_flow))

    def test_sign_law(self):
        """测试 phi > 0 时 lambda < 0"""
        self.assertIs(check_lambda_sign(self.phi, self.result.lambda_eps).status, CheckStatus.PASS)

    def test_zero_phi(self):
        """测试 phi = 0 时 lambda = 0, w = 0"""
        zero = ScalarField.constant(self.mesh)
        result = continuation(zero, SCHEDULE)
        self.assertEqual(result.lambda_eps, 0.0)
        self.assertEqual(result.w.sup_norm(), 0.0)

    def test_uniqueness(self):
        """测试换初值后 w 只差常数、lambda 相同"""
        other = continuation(self.phi, SCHEDULE, u_init=ScalarField.constant(self.mesh, 5.0))
        self.assertIs(check_uniqueness(self.result, other).status, CheckStatus.PASS)

    def test_bad_schedule(self):
        """测试非递减的 eps 序列被拒绝"""
        with self.assertRaises(ValueError):
            continuation(self.phi, (1e-3, 1e-2))
        with self.assertRaises(ValueError):
            continuation(self.phi, ())

    def test_trace_trends(self):
        """测试 eps osc(u_eps) 随 eps 单调减小，sup|Du_eps| 有界"""
        eps_osc = np.asarray(self.result.eps_osc)
        self.assertTrue(np.all(np.diff(eps_osc) < 0), eps_osc)
        sup_grad = self.result.eps_trace[:, 2]
        self.assertLess(sup_grad.max(), 1.2 * sup_grad.min())
        self.assertLess(sup_grad.max(), 1.0)

    def test_flow_from_translator(self):
        """测试从 w 与 w + 5 出发时 u 始终贴着 lambda t + w（+5）"""
        h2 = self.mesh.h**2
        lam = self.result.lambda_eps
        config = FlowConfig(t_max=0.5, tol_translate=1e-12, snapshot_stride=500)
        for shift in (0.0, 5.0):
            with self.assertLogs(level='WARNING'):
                flow = run_flow(self.result.w + shift, self.phi, config)
            self.assertFalse(flow.repaired_initial)
            self.assertGreater(len(flow.snapshots), 2)
            for snapshot in flow.snapshots:
                self.assertLess(np.abs(snapshot.ut.interior - lam).max(), 100 * h2)
                gap = snapshot.u - self.result.w - lam * snapshot.t
                self.assertLess(gap.oscillation(), 10 * h2)
                self.assertLess(abs(domain_mean(gap) - shift), 10 * h2)

    def test_flow_reaches_translator(self):
        """测试从常数出发的演化离开第 0 步，lambda 与平移解一致，九项诊断全部通过"""
        config = FlowConfig(t_max=20.0, tol_translate=1e-6, monitor_stride=20, snapshot_stride=500)
        flow = run_flow(ScalarField.constant(self.mesh), self.phi, config)
        alt = run_flow(ScalarField.from_cartesian(self.mesh, lambda x, y: 0.2 * y), self.phi, config)
        self.assertTrue(flow.converged)
        self.assertFalse(flow.repaired_initial)
        self.assertTrue(alt.repaired_initial)
        self.assertGreater(flow.steps, 0)
        self.assertLess(abs(flow.lambda_flow - self.result.lambda_eps), 5e-4)
        self.assertLess(abs(flow.lambda_flow_fit - flow.lambda_flow), 1e-4)

        report = build_report(flow, alt, self.result.with_flow(flow.lambda_flow))
        self.assertEqual([check.name for check in report.ordered()], list(CHECK_NAMES))
        self.assertTrue(report.all_passed, [check for check in report.ordered() if check.status is not CheckStatus.PASS])
        self.assertGreaterEqual(len(shared_snapshots(flow, alt)), 2)
        self.assertIs(report['osc_contraction'].status, CheckStatus.PASS)

    def test_osc_contraction_between_tilts(self):
        """测试从 0.2x 与 0.2y 出发的两次演化差的振幅不增"""
        config = FlowConfig(t_max=1.0, tol_translate=1e-6, snapshot_stride=500)
        with self.assertLogs(level='WARNING'):
            tilt_x = run_flow(ScalarField.from_cartesian(self.mesh, lambda x, y: 0.2 * x), self.phi, config)
        with self.assertLogs(level='WARNING'):
            tilt_y = run_flow(ScalarField.from_cartesian(self.mesh, lambda x, y: 0.2 * y), self.phi, config)
        pairs = shared_snapshots(tilt_x, tilt_y)
        self.assertGreaterEqual(len(pairs), 5)

        result = check_osc_contraction(tilt_x, tilt_y)
        self.assertIs(result.status, CheckStatus.PASS, result.detail)
        osc = [oscillation_of_difference(one.u, two.u) for one, two in pairs]
        self.assertLess(osc[-1], 0.5 * osc[0])


class TestSphereCapTranslator(unittest.TestCase):
    """测试单位球冠上常数数据的延拓与演化"""

    @classmethod
    def setUpClass(cls):
        mesh = build_mesh(SPHERE, 1.0, 8, 16)
        cls.mesh = mesh
        cls.phi = ScalarField.constant(mesh, 0.1)
        cls.result = continuation(cls.phi, SCHEDULE)
        cls.oracle = radial_oracle(0.1, SPHERE)
        config = FlowConfig(t_max=20.0, tol_translate=1e-6, monitor_stride=20, snapshot_stride=500)
        cls.flow = run_flow(ScalarField.constant(mesh), cls.phi, config)

    def test_lambda_agrees(self):
        """测试外推值、积分公式与径向基准一致"""
        self.assertLess(abs(self.result.lambda_eps - self.result.lambda_integral), 2e-3)
        self.assertLess(abs(self.result.lambda_eps - self.oracle.lam), 5e-3)
        self.assertLess(self.result.lambda_eps, 0.0)

    def test_flow_converges_to_translator(self):
        """测试演化收敛，lambda 一致，平移解收敛检查通过"""
        self.assertTrue(self.flow.converged)
        self.assertGreater(self.flow.steps, 0)
        self.assertLess(abs(self.flow.lambda_flow - self.result.lambda_eps), 1e-3)
        result = check_translator_convergence(self.flow, self.result)
        self.assertIs(result.status, CheckStatus.PASS, result.detail)

    def test_hypotheses_hold(self):
        """测试球冠满足曲率、边界凸性与障碍函数假设"""
        for check in check_hypotheses(SPHERE, self.mesh):
            self.assertIs(check.status, CheckStatus.PASS, check.name)


class TestGridConvergence(unittest.TestCase):
    """测试 lambda 随网格加密二阶收敛到径向基准"""

    def test_lambda_second_order(self):
        """测试极小 eps 序列下 8x16 与 16x32 的误差之比给出阶数 >= 1.7"""
        a = 0.3
        oracle = radial_oracle(a, FLAT).lam
        hs, errors = [], []
        for n_r, n_theta in ((8, 16), (16, 32)):
            mesh = build_mesh(FLAT, 1.0, n_r, n_theta)
            result = continuation(ScalarField.constant(mesh, a), (1e-4, 1e-5, 1e-6))
            hs.append(mesh.h)
            errors.append(abs(result.lambda_eps - oracle))
        self.assertLess(errors[1], errors[0])
        self.assertGreaterEqual(estimate_order(hs, errors), 1.7, errors)


if __name__ == '__main__':
    unittest.main()
