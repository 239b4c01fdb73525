import numpy as np
import pytest

from memphase import geometry
from memphase.errors import (
    DegenerateLength,
    NegativeY,
    NonMonotoneX,
    PoleTangentNotPerpendicular,
)
from memphase.geometry import (
    angle_function,
    build_curve,
    curvatures,
    measures,
    reparametrize_constant_speed,
    speed_deviation,
)

from conftest import cylinder_curve, random_admissible_curve, sphere_curve


def capped_cylinder_points(n=1024):
    """Cylinder of length 3, radius 1/2, spherical caps; sampled uniformly by
    arclength so the nominal speed is exact by construction."""
    r = 0.5
    arc = np.pi * r / 2.0
    total = 3.0 + 2.0 * arc
    s = np.linspace(0.0, total, n + 1)
    x = np.empty_like(s)
    y = np.empty_like(s)
    left = s < arc
    mid = (s >= arc) & (s <= arc + 3.0)
    right = s > arc + 3.0
    th = s[left] / r
    x[left] = -1.5 - r * np.cos(th)
    y[left] = r * np.sin(th)
    x[mid] = -1.5 + (s[mid] - arc)
    y[mid] = r
    th = (s[right] - arc - 3.0) / r
    x[right] = 1.5 + r * np.sin(th)
    y[right] = r * np.cos(th)
    return np.column_stack([x, y]), total


class TestBuildCurve:
    def test_semicircle_unit_speed(self):
        t = np.linspace(0.0, np.pi, 257)
        c = build_curve(np.column_stack([-np.cos(t), np.sin(t)]), param_length=np.pi)
        assert abs(c.speed - 1.0) < 1e-3

    def test_two_identical_points_degenerate(self):
        with pytest.raises(DegenerateLength):
            build_curve([(0.3, 0.1), (0.3, 0.1)])

    def test_capped_cylinder_length(self):
        pts, total = capped_cylinder_points()
        c = build_curve(pts, param_length=1.0)
        assert c.speed == pytest.approx(3.0 + np.pi / 2.0, rel=1e-3)
        assert total == pytest.approx(3.0 + np.pi / 2.0, abs=1e-12)

    def test_negative_y_rejected(self):
        with pytest.raises(NegativeY):
            build_curve([(0.0, 0.0), (0.5, -0.2), (1.0, 0.0)])

    def test_non_monotone_x_rejected(self):
        with pytest.raises(NonMonotoneX):
            build_curve([(0.0, 0.0), (1.0, 1.0), (0.5, 1.0), (2.0, 0.0)])

    def test_too_few_points(self):
        with pytest.raises(ValueError):
            build_curve([(0.0, 0.0), (1.0, 1.0)])


class TestReparametrize:
    def test_uniform_semicircle_fixed_point(self):
        c = sphere_curve(n=256)
        c2 = reparametrize_constant_speed(c)
        assert np.max(np.abs(c2.nodes - c.nodes)) < 1e-12

    def test_clustered_semicircle(self):
        # uniform in tau, clustered in t = pi * tau^3; arclength = t on the
        # unit semicircle, so the analytic inverse is uniform t.
        tau = np.linspace(0.0, 1.0, 257)
        t = np.pi * tau**3
        c = build_curve(np.column_stack([-np.cos(t), np.sin(t)]), param_length=np.pi)
        assert speed_deviation(c) > 0.5  # genuinely non-uniform input
        c2 = reparametrize_constant_speed(c)
        chords = np.linalg.norm(np.diff(c2.nodes, axis=0), axis=1)
        assert np.max(np.abs(chords / np.mean(chords) - 1.0)) < 1e-3
        t_ref = np.linspace(0.0, np.pi, 257)
        ref = np.column_stack([-np.cos(t_ref), np.sin(t_ref)])
        assert np.max(np.linalg.norm(c2.nodes - ref, axis=1)) < 1e-3

    def test_capped_cylinder_area_preserved(self):
        pts, _ = capped_cylinder_points()
        c = build_curve(pts, param_length=1.0)
        a0 = measures(c).area
        c2 = reparametrize_constant_speed(c)
        assert abs(measures(c2).area - a0) < 1e-4 * a0


class TestAngleFunction:
    def test_horizontal_segment(self):
        c = cylinder_curve()
        assert np.max(np.abs(angle_function(c).phi)) < 1e-12

    def test_vertical_up_segment(self):
        y = np.linspace(0.5, 1.5, 65)
        c = build_curve(np.column_stack([np.zeros_like(y), y]), param_length=1.0)
        assert np.max(np.abs(angle_function(c).phi - np.pi / 2)) < 1e-12

    def test_semicircle_angle(self):
        n = 512
        c = sphere_curve(n=n)
        t = np.linspace(0.0, np.pi, n + 1)
        err = np.abs(angle_function(c).phi - (np.pi / 2 - t))
        assert np.max(err) < 1e-3


class TestCurvatures:
    def test_unit_sphere(self):
        c = sphere_curve(n=512)
        cf = curvatures(c)
        assert np.max(np.abs(cf.kappa1[2:-2] - 1.0)) < 1e-2
        assert np.max(np.abs(cf.kappa2[2:-2] - 1.0)) < 1e-2

    def test_cylinder(self):
        c = cylinder_curve(radius=0.5, length=2.0)
        cf = curvatures(c)
        assert np.max(np.abs(cf.kappa1)) < 1e-10
        assert np.max(np.abs(cf.kappa2 - 2.0)) < 1e-10
        assert np.max(np.abs(cf.mean - 2.0)) < 1e-10
        assert np.max(np.abs(cf.gauss)) < 1e-10

    def test_gauss_bonnet_sphere(self):
        c = sphere_curve(n=512)
        cf = curvatures(c)
        w = measures(c).weights.area_w
        assert abs(np.sum(cf.gauss * w) - 4.0 * np.pi) < 1e-2

    def test_slanted_axis_endpoint_rejected(self):
        # straight cone flank hits the axis at 45 degrees
        t = np.linspace(0.0, 1.0, 129)
        pts = np.column_stack([t, t])
        pts = np.vstack([pts, [[2.0, 1.0]]])
        c = build_curve(pts, param_length=1.0)
        with pytest.raises(PoleTangentNotPerpendicular):
            curvatures(c)

    def test_nodewise_identities_exact(self, rng):
        c = random_admissible_curve(rng)
        cf = curvatures(c)
        assert np.allclose(cf.mean, cf.kappa1 + cf.kappa2, rtol=0, atol=1e-13 * np.max(np.abs(cf.mean)))
        assert np.allclose(cf.gauss, cf.kappa1 * cf.kappa2, rtol=0, atol=1e-12 * max(1.0, np.max(np.abs(cf.gauss))))
        assert np.allclose(cf.b_sq, cf.mean**2 - 2.0 * cf.gauss, rtol=1e-12)


class TestMeasures:
    def test_unit_sphere(self):
        c = sphere_curve(n=1024)
        ms = measures(c)
        assert ms.area == pytest.approx(4.0 * np.pi, rel=1e-3)
        assert ms.enclosed_volume == pytest.approx(4.0 * np.pi / 3.0, abs=1e-3)

    def test_capped_cylinder_area(self):
        pts, total = capped_cylinder_points()
        c = build_curve(pts, param_length=total)
        assert measures(c).area == pytest.approx(4.0 * np.pi, rel=1e-3)

    def test_degenerate_axis_curve(self):
        x = np.linspace(0.0, 1.0, 65)
        c = build_curve(np.column_stack([x, np.zeros_like(x)]), param_length=1.0)
        ms = measures(c)
        assert ms.area == 0.0
        assert ms.enclosed_volume == 0.0
        assert ms.length == pytest.approx(1.0, rel=1e-12)


class TestProperties:
    def test_gauss_bonnet_converges(self):
        errs = []
        for n in (512, 1024):
            c = sphere_curve(n=n)
            cf = curvatures(c)
            w = measures(c).weights.area_w
            errs.append(abs(np.sum(cf.gauss * w) - 4.0 * np.pi))
        assert errs[0] < 1e-2
        assert errs[1] < 0.6 * errs[0]

    def test_length_bound_random_curves(self, rng):
        for _ in range(30):
            c = random_admissible_curve(rng, n=384)
            cf = curvatures(c)
            ms = measures(c)
            lhs = np.sum(np.abs(cf.mean) * ms.weights.area_w)
            assert lhs >= 2.0 * np.pi * ms.length - 1e-2 * ms.length

    def test_reparametrization_invariance(self, rng):
        c = random_admissible_curve(rng)
        ms = measures(c)
        c2 = reparametrize_constant_speed(c)
        ms2 = measures(c2)
        assert abs(ms2.area - ms.area) < 1e-3 * ms.area
        assert abs(ms2.length - ms.length) < 1e-3 * ms.length
        assert abs(ms2.enclosed_volume - ms.enclosed_volume) < 1e-3 * abs(ms.enclosed_volume)

    def test_kappa1_integral_identity(self, rng):
        # weighted L2 norm of the angle derivative equals the kappa1 integral
        for _ in range(5):
            c = random_admissible_curve(rng, n=768, amplitude=0.2)
            cf = curvatures(c)
            w = measures(c).weights.area_w
            lhs = np.sum(cf.kappa1**2 * w)
            phi = angle_function(c).phi
            dphi = geometry._diff1(phi, c.dt)
            cfac = geometry.trapezoid_factors(c.n + 1)
            rhs = (2.0 * np.pi / c.speed) * np.sum(cfac * dphi**2 * c.y * c.dt)
            assert lhs == pytest.approx(rhs, rel=1e-2)

    def test_gauss_curv_l1_identity(self, rng):
        # integral of |K| d(mu) equals (2 pi / q) * integral of |y''| dt on
        # convex-profile curves (sphere)
        c = sphere_curve(n=512)
        cf = curvatures(c)
        w = measures(c).weights.area_w
        ypp = geometry._diff2(c.y, c.dt)
        cfac = geometry.trapezoid_factors(c.n + 1)
        rhs = (2.0 * np.pi / c.speed) * np.sum(cfac * np.abs(ypp) * c.dt)
        assert np.sum(np.abs(cf.gauss) * w) == pytest.approx(rhs, rel=1e-2)
