"""
度量族与张量计算单元测试

覆盖闭式度量、逆度量、Christoffel 符号和 Gauss 曲率，以及非法度量的报错
"""

import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from tflow.diagnostics import estimate_order
from tflow.exceptions import InvalidMetricError, PointOutsideChartError
from tflow.geometry import (
    christoffel_at,
    christoffel_from,
    flow_coeffs,
    gauss_curvature_at,
    grad_norm_sq,
    inverse_metric_at,
    make_descriptor,
    metric_at,
    metric_derivatives_at,
)
from tflow.geometry.families import get_family_names
from tflow.types import ChartPoint

FLAT = make_descriptor('flat')
SPHERE = make_descriptor('sphere-cap')

radii = st.floats(min_value=0.05, max_value=3.0, allow_nan=False)
angles = st.floats(min_value=0.0, max_value=2 * math.pi, allow_nan=False)
slopes = st.floats(min_value=-50.0, max_value=50.0, allow_nan=False)


def _fd_metric_derivatives(descriptor, x, y, step=1e-5):
    "Central differences of sigma_ij in the normal chart"
    dsigma = np.zeros((2, 2, 2))
    for k, (dx, dy) in enumerate(((step, 0.0), (0.0, step))):
        plus = metric_at(descriptor, ChartPoint.normal(x + dx, y + dy)).entries
        minus = metric_at(descriptor, ChartPoint.normal(x - dx, y - dy)).entries
        dsigma[k] = (plus - minus) / (2 * step)
    return dsigma


class TestFamilies:
    """测试度量族的注册与参数校验"""

    def test_registry_names(self):
        """测试三个度量族都已注册"""
        assert set(get_family_names()) == {'flat', 'sphere-cap', 'custom-diagonal'}

    def test_unknown_family(self):
        """测试未知度量族报错"""
        with pytest.raises(InvalidMetricError):
            make_descriptor('torus')

    def test_flat_rejects_profile(self):
        """测试平直度量不接受 profile"""
        with pytest.raises(InvalidMetricError):
            make_descriptor('flat', profile='sin(r)', chart_radius=1.0)

    def test_sphere_cap_bad_scale(self):
        """测试球冠半径参数必须为正"""
        with pytest.raises(InvalidMetricError):
            make_descriptor('sphere-cap', (-1.0,))

    def test_sphere_cap_chart_radius(self):
        """测试球冠坐标卡半径为 pi rho"""
        assert make_descriptor('sphere-cap', (2.0,)).chart_radius == pytest.approx(2 * math.pi)

    def test_custom_needs_chart_radius(self):
        """测试自定义度量必须给出坐标卡半径"""
        with pytest.raises(InvalidMetricError):
            make_descriptor('custom-diagonal', profile='sinh(r)')

    def test_custom_profile_must_have_smooth_pole(self):
        """测试 f(0) = 0, f'(0) = 1 的检查"""
        with pytest.raises(InvalidMetricError):
            make_descriptor('custom-diagonal', profile='r**2', chart_radius=1.0)
        with pytest.raises(InvalidMetricError):
            make_descriptor('custom-diagonal', profile='2*r', chart_radius=1.0)

    def test_custom_profile_other_symbols(self):
        """测试 profile 只能依赖 r"""
        with pytest.raises(InvalidMetricError):
            make_descriptor('custom-diagonal', profile='sin(r*s)', chart_radius=1.0)

    def test_custom_profile_derivatives(self):
        """测试自定义 profile 的符号导数"""
        descriptor = make_descriptor('custom-diagonal', profile='sinh(r)', chart_radius=3.0)
        r = np.array([0.25, 1.0, 2.5])
        np.testing.assert_allclose(descriptor.f(r), np.sinh(r), rtol=1e-14)
        np.testing.assert_allclose(descriptor.df(r), np.cosh(r), rtol=1e-14)
        np.testing.assert_allclose(descriptor.ddf(r), np.sinh(r), rtol=1e-14)

    def test_descriptor_equality(self):
        """测试相同参数的描述符相等，不同 profile 不相等"""
        assert make_descriptor('sphere-cap', (1.0,)) == SPHERE
        first = make_descriptor('custom-diagonal', profile='sinh(r)', chart_radius=2.0)
        second = make_descriptor('custom-diagonal', profile='sin(r)', chart_radius=2.0)
        assert first != second


class TestClosedForms:
    """测试闭式度量的已知取值"""

    def test_flat_normal_chart_is_identity(self):
        """测试平直度量在法坐标下为单位阵且 Christoffel 符号为零"""
        p = ChartPoint.normal(0.3, -0.2)
        np.testing.assert_allclose(metric_at(FLAT, p).entries, np.eye(2), atol=1e-14)
        np.testing.assert_allclose(christoffel_at(FLAT, p).gamma, 0.0, atol=1e-13)

    def test_flat_polar(self):
        """测试平直度量的极坐标形式 dr^2 + r^2 dtheta^2"""
        p = ChartPoint.polar(0.5, 1.0)
        np.testing.assert_allclose(metric_at(FLAT, p).entries, np.diag([1.0, 0.25]))
        gamma = christoffel_at(FLAT, p)
        assert gamma[0, 1, 1] == pytest.approx(-0.5)
        assert gamma[1, 0, 1] == pytest.approx(2.0)
        assert gamma[1, 1, 0] == pytest.approx(2.0)

    def test_sphere_cap_polar(self):
        """测试球冠度量 dr^2 + sin^2 r dtheta^2"""
        p = ChartPoint.polar(0.7, 0.0)
        np.testing.assert_allclose(metric_at(SPHERE, p).entries, np.diag([1.0, math.sin(0.7) ** 2]), rtol=1e-14)
        assert gauss_curvature_at(SPHERE, p) == pytest.approx(1.0, abs=1e-12)

    def test_sphere_cap_normal_chart(self):
        """测试球冠度量在法坐标下的形式"""
        x, y = 0.3, 0.4
        r = math.hypot(x, y)
        unit = np.array([x, y]) / r
        radial = np.outer(unit, unit)
        expected = radial + (math.sin(r) / r) ** 2 * (np.eye(2) - radial)
        np.testing.assert_allclose(metric_at(SPHERE, ChartPoint.normal(x, y)).entries, expected, rtol=1e-12)

    def test_normal_chart_at_pole(self):
        """测试法坐标原点处度量为单位阵"""
        np.testing.assert_allclose(metric_at(SPHERE, ChartPoint.normal(0.0, 0.0)).entries, np.eye(2), atol=1e-14)
        np.testing.assert_allclose(metric_derivatives_at(SPHERE, ChartPoint.normal(0.0, 0.0)), 0.0, atol=1e-12)

    def test_hyperbolic_curvature(self):
        """测试 sinh 剖面的 Gauss 曲率为 -1"""
        descriptor = make_descriptor('custom-diagonal', profile='sinh(r)', chart_radius=3.0)
        for r in (0.1, 1.0, 2.0):
            assert gauss_curvature_at(descriptor, ChartPoint.polar(r, 0.5)) == pytest.approx(-1.0, abs=1e-10)

    def test_normal_derivatives_match_differences(self):
        """测试法坐标下的闭式度量导数与中心差分一致"""
        for x, y in ((0.5, 0.3), (-0.2, 0.9), (1.4, -0.6)):
            closed = metric_derivatives_at(SPHERE, ChartPoint.normal(x, y))
            np.testing.assert_allclose(closed, _fd_metric_derivatives(SPHERE, x, y), atol=1e-8)

    def test_christoffel_matches_differences(self):
        """测试 Christoffel 符号与差分度量导数算出的一致"""
        x, y = 0.5, 0.3
        p = ChartPoint.normal(x, y)
        inverse = inverse_metric_at(SPHERE, p).entries
        expected = christoffel_from(inverse, _fd_metric_derivatives(SPHERE, x, y))
        np.testing.assert_allclose(christoffel_at(SPHERE, p).gamma, expected, atol=1e-8)

    @pytest.mark.parametrize('x, y', [(0.5, 0.3), (-0.2, 0.9), (1.4, -0.6)])
    def test_christoffel_second_order(self, x, y):
        """测试差分度量导数算出的 Christoffel 符号随步长减半二阶收敛"""
        p = ChartPoint.normal(x, y)
        inverse = inverse_metric_at(SPHERE, p).entries
        exact = christoffel_at(SPHERE, p).gamma
        steps = (4e-2, 2e-2, 1e-2)
        errors = [np.abs(christoffel_from(inverse, _fd_metric_derivatives(SPHERE, x, y, step)) - exact).max() for step in steps]
        assert estimate_order(steps, errors) > 1.9


class TestChartErrors:
    """测试坐标卡之外的点"""

    def test_outside_chart(self):
        """测试超出坐标卡半径时报错"""
        with pytest.raises(PointOutsideChartError):
            metric_at(SPHERE, ChartPoint.polar(4.0, 0.0))
        with pytest.raises(PointOutsideChartError):
            metric_at(SPHERE, ChartPoint.normal(3.0, 1.0))

    def test_polar_origin(self):
        """测试极坐标原点不可用"""
        with pytest.raises(PointOutsideChartError):
            christoffel_at(FLAT, ChartPoint.polar(0.0, 0.0))

    def test_non_finite_point(self):
        """测试非有限坐标在构造时即报错"""
        with pytest.raises(ValueError):
            ChartPoint.polar(float('nan'), 0.0)


class TestTensorProperties:
    """基于 hypothesis 的张量性质测试"""

    @settings(max_examples=200, deadline=None)
    @given(radii, angles)
    def test_polar_metric_spd_and_inverse(self, r, theta):
        """测试度量正定且与逆度量相乘为单位阵"""
        p = ChartPoint.polar(r, theta)
        sigma = metric_at(SPHERE, p)
        inverse = inverse_metric_at(SPHERE, p)
        assert sigma.is_symmetric()
        assert sigma.min_eigenvalue() > 0
        np.testing.assert_allclose(sigma.entries @ inverse.entries, np.eye(2), atol=1e-10)

    @settings(max_examples=200, deadline=None)
    @given(st.floats(-2.0, 2.0), st.floats(-2.0, 2.0))
    def test_normal_metric_spd_and_symmetric_christoffel(self, x, y):
        """测试法坐标下度量正定，Christoffel 符号下指标对称"""
        assume(1e-3 < math.hypot(x, y) < 3.0)
        p = ChartPoint.normal(x, y)
        sigma = metric_at(SPHERE, p)
        assert sigma.is_symmetric()
        assert sigma.min_eigenvalue() > 0
        np.testing.assert_allclose(sigma.entries @ inverse_metric_at(SPHERE, p).entries, np.eye(2), atol=1e-10)
        assert christoffel_at(SPHERE, p).is_lower_symmetric()

    @settings(max_examples=200, deadline=None)
    @given(radii, slopes, slopes)
    def test_flow_coeffs_ellipticity(self, r, du_r, du_theta):
        """测试 g^ij 相对 sigma^ij 的特征值落在 [1/v^2, 1] 内"""
        p = ChartPoint.polar(r, 0.0)
        sigma = metric_at(SPHERE, p).entries
        inverse = inverse_metric_at(SPHERE, p).entries
        du = np.array([du_r, du_theta])
        g = flow_coeffs(inverse, du).entries
        root = np.diag(np.sqrt(np.diag(sigma)))
        eigenvalues = np.linalg.eigvalsh(root @ g @ root)
        v_sq = 1.0 + grad_norm_sq(inverse, du)
        assert eigenvalues.min() >= 1.0 / v_sq - 1e-9
        assert eigenvalues.max() <= 1.0 + 1e-9
