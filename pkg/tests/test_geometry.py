"""Pass geometry: range, slew, pointing angles, and the zero-crossing search."""

import math

import pytest

from pioneerlink import PassGeometry, beam_angles, slant_range, slew_rate, zero_crossing_zenith

DEG = math.pi / 180.0
R_EARTH = 6.371e6

RANGE_400_60 = 739319.7729322547
SLEW_400_0 = 0.01918149662096253
SLEW_800_0 = 0.009319423326486744


def geom(h_km, zen_deg):
    return PassGeometry(h_alt=h_km * 1e3, zenith=zen_deg * DEG)


class TestPassGeometry:
    def test_validation(self):
        with pytest.raises(ValueError):
            PassGeometry(h_alt=0.0, zenith=0.0)
        with pytest.raises(ValueError):
            PassGeometry(h_alt=400e3, zenith=-0.01)
        with pytest.raises(ValueError):
            PassGeometry(h_alt=400e3, zenith=math.pi / 2 + 0.01)

    def test_range_at_zenith_is_altitude(self):
        assert slant_range(geom(400, 0)) == 400e3
        assert slant_range(geom(800, 0)) == 800e3

    def test_range_golden(self):
        assert slant_range(geom(400, 60)) == pytest.approx(RANGE_400_60, rel=1e-12)

    def test_range_increases_with_zenith(self):
        ranges = [slant_range(geom(400, z)) for z in range(0, 91, 5)]
        assert all(a < b for a, b in zip(ranges, ranges[1:]))

    def test_law_of_cosines_consistency(self):
        # the triangle ground station / Earth center / platform closes:
        # (R + h)^2 = R^2 + z^2 + 2 R z cos(zenith)
        for h_km in (400, 800):
            for zen_deg in range(0, 91, 3):
                g = geom(h_km, zen_deg)
                z = slant_range(g)
                lhs = (R_EARTH + g.h_alt) ** 2
                rhs = R_EARTH**2 + z * z + 2.0 * R_EARTH * z * math.cos(g.zenith)
                assert rhs == pytest.approx(lhs, rel=1e-12)

    def test_slew_goldens(self):
        assert slew_rate(geom(400, 0)) == pytest.approx(SLEW_400_0, rel=1e-12)
        assert slew_rate(geom(800, 0)) == pytest.approx(SLEW_800_0, rel=1e-12)

    def test_slew_vanishes_at_horizon(self):
        assert slew_rate(geom(400, 90)) == pytest.approx(0.0, abs=1e-30)

    def test_slew_drops_with_altitude(self):
        for zen_deg in (0, 30, 60):
            assert slew_rate(geom(800, zen_deg)) < slew_rate(geom(400, zen_deg))


class TestBeamAngles:
    def test_golden_point(self):
        angles = beam_angles(geom(400, 0), 5.0)
        assert angles.response_time == pytest.approx(7e-4, rel=1e-15)
        assert angles.spatial_angle == pytest.approx(1.25e-5, rel=1e-12)
        assert angles.temporal_angle == pytest.approx(1.3427047634673772e-05, rel=1e-12)
        assert angles.path_angle == pytest.approx(9.270476346737711e-07, rel=1e-9)

    def test_zero_separation_baseline(self):
        angles = beam_angles(geom(400, 20), 0.0)
        assert angles.spatial_angle == 0.0
        assert angles.path_angle == angles.temporal_angle

    def test_path_angle_is_absolute_difference(self):
        for h_km in (400, 800):
            for zen_deg in (0, 25, 50, 75):
                for sep in (0.0, 1.0, 3.0, 5.0):
                    a = beam_angles(geom(h_km, zen_deg), sep)
                    assert a.path_angle == abs(a.temporal_angle - a.spatial_angle)

    def test_angle_gap_decreases_with_zenith(self):
        # d(theta_t - theta_s)/d zenith < 0 across the whole usable pass
        for h_km in (400, 800):
            for sep in (0.0, 1.0, 2.0, 5.0):
                gaps = [
                    beam_angles(geom(h_km, z), sep).temporal_angle
                    - beam_angles(geom(h_km, z), sep).spatial_angle
                    for z in range(0, 76)
                ]
                assert all(a > b for a, b in zip(gaps, gaps[1:]))

    def test_separation_never_hurts_on_main_region(self):
        # |theta_t - theta_s| <= theta_t whenever theta_s <= 2 theta_t
        for h_km in (400, 800):
            for zen_deg in range(0, 61, 4):
                base = beam_angles(geom(h_km, zen_deg), 0.0).path_angle
                for sep in (1.0, 2.0, 3.0, 4.0, 5.0):
                    a = beam_angles(geom(h_km, zen_deg), sep)
                    if a.spatial_angle <= 2.0 * a.temporal_angle:
                        assert a.path_angle <= base

    def test_validation(self):
        with pytest.raises(ValueError):
            beam_angles(geom(400, 0), -1.0)
        with pytest.raises(ValueError):
            beam_angles(geom(400, 0), 1.0, loop_bandwidth=0.0)


class TestZeroCrossing:
    def test_zero_separation_never_crosses(self):
        assert zero_crossing_zenith(geom(400, 0), 0.0) is None

    def test_short_separation_low_orbit_never_crosses(self):
        # 1 m of separation stays below the swept angle all the way to 75 deg
        assert zero_crossing_zenith(geom(400, 0), 1.0) is None

    @pytest.mark.parametrize(
        "h_km,sep,lo_deg,hi_deg",
        [
            (400, 5.0, 15.0, 30.0),
            (800, 5.0, 10.0, 25.0),
            (800, 1.0, 60.0, 75.0),
        ],
    )
    def test_crossing_found_and_cancels(self, h_km, sep, lo_deg, hi_deg):
        root = zero_crossing_zenith(geom(h_km, 0), sep)
        assert root is not None
        assert lo_deg * DEG < root < hi_deg * DEG
        angles = beam_angles(geom(h_km, math.degrees(root)), sep)
        assert angles.path_angle < 1e-12

    def test_frozen_crossing_values(self):
        assert zero_crossing_zenith(geom(400, 0), 5.0) == pytest.approx(
            0.3628101709587028, abs=1e-6
        )
        assert zero_crossing_zenith(geom(800, 0), 5.0) == pytest.approx(
            0.2754211970485858, abs=1e-6
        )
