"""
RK2 时间步进单元测试
"""

import math
import unittest

import numpy as np

from tflow.exceptions import BlowupError, MeshMismatchError
from tflow.flow import FlowState, RK2Stepper, dt_max, enforce_neumann, local_dt, rhs, step
from tflow.geometry import make_descriptor
from tflow.mesh import ScalarField, build_mesh, normal_derivative

FLAT = make_descriptor('flat')


def _march(u0, phi, dt, steps):
    state = FlowState(0.0, u0)
    for _ in range(steps):
        state = step(state, dt, phi)
    return state


class TestDtMax(unittest.TestCase):
    """测试 CFL 步长"""

    def test_dt_max_is_cfl_times_h_min_squared(self):
        """测试 Lambda_max = 1 时 dt = c h_min^2，与 u 无关"""
        mesh = build_mesh(FLAT, 1.0, 8, 16)
        steep = ScalarField.from_cartesian(mesh, lambda x, y: 5.0 * x * y)
        for u in (ScalarField.constant(mesh), steep):
            self.assertAlmostEqual(dt_max(FlowState(0.0, u)), 0.2 * mesh.h_min**2, places=15)
        self.assertAlmostEqual(dt_max(FlowState(0.0, steep), 0.1), 0.1 * mesh.h_min**2, places=15)


class TestStep(unittest.TestCase):
    """测试单步推进"""

    def setUp(self):
        self.mesh = build_mesh(FLAT, 1.0, 8, 16)
        self.phi = ScalarField.constant(self.mesh, 0.1)
        self.u0 = enforce_neumann(ScalarField.from_cartesian(self.mesh, lambda x, y: 0.3 * x + 0.2 * y * y), self.phi)
        self.dt = dt_max(FlowState(0.0, self.u0))

    def test_zero_stays_zero(self):
        """测试零初值与零 Neumann 数据保持为零"""
        zero = ScalarField.constant(self.mesh)
        state = _march(zero, zero, self.dt, 5)
        self.assertEqual(np.abs(state.u.values).max(), 0.0)
        self.assertAlmostEqual(state.t, 5 * self.dt)
        self.assertEqual(state.dt_last, self.dt)

    def test_neumann_kept_after_step(self):
        """测试每步之后边界条件精确成立"""
        state = _march(self.u0, self.phi, self.dt, 3)
        np.testing.assert_allclose(normal_derivative(state.u), 0.1, atol=1e-12)

    def test_mesh_mismatch(self):
        """测试状态与 phi 网格不一致时报错"""
        other = build_mesh(FLAT, 1.0, 10, 16)
        with self.assertRaises(MeshMismatchError):
            step(FlowState(0.0, self.u0), self.dt, ScalarField.constant(other))

    def test_second_order_in_time(self):
        """测试步长减半时误差约缩小为四分之一"""
        t_end = 0.05
        count = math.ceil(t_end / self.dt)
        finals = [_march(self.u0, self.phi, t_end / (count * k), count * k).u.values for k in (1, 2, 4)]
        coarse = np.abs(finals[0] - finals[1]).max()
        fine = np.abs(finals[1] - finals[2]).max()
        ratio = coarse / fine
        self.assertGreater(ratio, 3.0)
        self.assertLess(ratio, 5.0)

    def test_matches_reference_update(self):
        """测试一步等于由 rhs 与 Neumann 投影写出的中点公式"""
        n = self.mesh.n_r
        k1 = rhs(self.u0).values[:n]
        midpoint = self.u0.copy_values()
        midpoint[:n] += 0.5 * self.dt * k1
        midpoint = enforce_neumann(ScalarField(self.mesh, midpoint), self.phi)
        k2 = rhs(midpoint).values[:n]
        expected = self.u0.copy_values()
        expected[:n] += self.dt * k2
        expected = enforce_neumann(ScalarField(self.mesh, expected), self.phi)

        state = step(FlowState(0.0, self.u0), self.dt, self.phi)
        np.testing.assert_allclose(state.u.values, expected.values, rtol=0, atol=1e-14)
        self.assertEqual(state.t, self.dt)

    def _checkerboard(self):
        i, j = np.indices(self.mesh.shape)
        values = 1e-10 * (-1.0) ** (i + j)
        return enforce_neumann(ScalarField(self.mesh, values), ScalarField.constant(self.mesh))

    def test_stable_at_dt_max(self):
        """测试恰取 dt_max 时棋盘扰动衰减而不放大"""
        u = self._checkerboard()
        start = np.abs(u.values).max()
        state = _march(u, ScalarField.constant(self.mesh), self.dt, 2000)
        self.assertTrue(np.all(np.isfinite(state.u.values)))
        self.assertLess(np.abs(state.u.values).max(), 0.1 * start)

    def test_blowup_beyond_cfl(self):
        """测试超出稳定步长时棋盘扰动放大并触发 BlowupError"""
        u = self._checkerboard()
        stepper = RK2Stepper(self.mesh, np.zeros(self.mesh.n_theta))
        state = FlowState(0.0, u)
        with self.assertRaises(BlowupError) as context:
            for _ in range(2000):
                state = stepper.step(state, 4.0 * self.dt)
        self.assertGreater(context.exception.step, 0)
        self.assertEqual(context.exception.code, 'blowup')


class TestLocalDt(unittest.TestCase):
    """测试逐环伪时间步长"""

    def setUp(self):
        self.mesh = build_mesh(FLAT, 1.0, 8, 16)

    def test_ring_steps(self):
        """测试每环取最短边长的 CFL 步，最内环等于 dt_max，外环受径向间距限制"""
        steps = local_dt(self.mesh)
        self.assertEqual(steps.shape, (self.mesh.n_r, 1))
        self.assertAlmostEqual(steps.min(), dt_max(FlowState(0.0, ScalarField.constant(self.mesh))), places=15)
        self.assertAlmostEqual(steps.max(), 0.2 * self.mesh.dr**2, places=15)
        self.assertTrue(np.all(np.diff(steps[:, 0]) >= 0))

    def test_ring_steps_stable(self):
        """测试逐环步长下棋盘扰动衰减，Neumann 条件保持"""
        i, j = np.indices(self.mesh.shape)
        phi = ScalarField.constant(self.mesh, 0.1)
        u = enforce_neumann(ScalarField(self.mesh, 1e-6 * (-1.0) ** (i + j)), phi)
        stepper = RK2Stepper(self.mesh, phi.boundary)
        values = u.copy_values()
        steps = local_dt(self.mesh)
        for count in range(500):
            values = stepper.advance(values, steps, t=count * steps.max(), step=count)
        self.assertTrue(np.all(np.isfinite(values)))
        np.testing.assert_allclose(normal_derivative(ScalarField(self.mesh, values)), 0.1, atol=1e-12)
        self.assertLess(np.abs(np.diff(values[: self.mesh.n_r], axis=1)).max(), 1e-6)


if __name__ == '__main__':
    unittest.main()
