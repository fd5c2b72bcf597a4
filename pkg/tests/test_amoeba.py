import math

import numpy as np
import pytest

from tropline.amoeba import (
    AmoebaSample,
    EmptySample,
    ZeroCoordinate,
    convergence_report,
    discretize_curve,
    hausdorff,
    log_image,
    sample_amoeba,
)
from tropline.tropical import LineFamily, tropicalize_line


def fam(p, q, c1=1.0, c2=1.0):
    return LineFamily.of(p, q, c1, c2)


class TestLogImage:
    def test_monomial_point_machine_exact(self):
        for n in (10.0, 1e4):
            x, y = log_image((n**-2, n**-1, 1.0), n)
            assert abs(x - 2.0) < 1e-12 and abs(y - 1.0) < 1e-12

    def test_unit_point(self):
        assert log_image((1.0, 1.0, 1.0), 100.0) == (0.0, 0.0)

    def test_coefficient_shift(self):
        n = 1e6
        x, y = log_image((5 * n**-1, 1.0, 1.0), n)
        assert abs(x - (1 - math.log(5) / math.log(n))) < 1e-12
        assert y == 0.0

    def test_clipping(self):
        x, y = log_image((100.0, 1.0, 1.0), 10.0)
        assert x == 0.0 and y == 0.0

    def test_zero_coordinate(self):
        with pytest.raises(ZeroCoordinate):
            log_image((0.0, 1.0, 1.0), 10.0)

    def test_bad_base(self):
        with pytest.raises(ValueError):
            log_image((1.0, 1.0, 1.0), 1.0)


class TestSampler:
    def test_deterministic(self):
        a = sample_amoeba(fam(4, 3), 1e4, 500)
        b = sample_amoeba(fam(4, 3), 1e4, 500)
        assert np.array_equal(a.points, b.points)
        assert np.array_equal(a.domain, b.domain)

    def test_clipped_to_quadrant(self):
        sample = sample_amoeba(fam(2, 1), 1e3, 800)
        assert (sample.points >= 0).all()

    def test_cloud_concentrates_near_curve(self):
        curve = tropicalize_line(fam(4, 3))
        d1 = hausdorff(sample_amoeba(fam(4, 3), 1e4, 2000), curve, 8.0)
        d8 = hausdorff(sample_amoeba(fam(4, 3), 1e8, 2000), curve, 8.0)
        assert d8 < d1

    def test_base_cap(self):
        with pytest.raises(ValueError):
            sample_amoeba(fam(1, 1), 1e9, 10)

    def test_ordinary_line_cloud(self):
        curve = tropicalize_line(fam(0, 0))
        d = hausdorff(sample_amoeba(fam(0, 0), 1e6, 2000, depth=4.0), curve, 3.0)
        assert d < 0.2


class TestHausdorff:
    def test_self_distance_is_discretization_level(self):
        curve = tropicalize_line(fam(4, 3))
        poly = discretize_curve(curve, 8.0)
        sample = AmoebaSample(n=10.0, points=poly, domain=np.zeros(len(poly)))
        assert hausdorff(sample, curve, 8.0) < 8.0 / 256
        assert hausdorff(sample, curve, 8.0) >= 0.0

    def test_empty_sample(self):
        sample = AmoebaSample(
            n=10.0, points=np.array([[9.0, 9.0]]), domain=np.zeros(1)
        )
        with pytest.raises(EmptySample):
            hausdorff(sample, tropicalize_line(fam(1, 1)), 2.0)

    def test_mirror_isometry_is_exact(self):
        sample = sample_amoeba(fam(4, 3), 1e4, 1500)
        swapped = AmoebaSample(
            n=sample.n, points=sample.points[:, ::-1].copy(), domain=sample.domain
        )
        d = hausdorff(sample, tropicalize_line(fam(4, 3)), 8.0)
        d_swapped = hausdorff(swapped, tropicalize_line(fam(3, 4)), 8.0)
        assert d == d_swapped

    def test_mirror_family_statistics(self):
        d1 = hausdorff(sample_amoeba(fam(4, 3), 1e4, 2000), tropicalize_line(fam(4, 3)), 8.0)
        d2 = hausdorff(sample_amoeba(fam(3, 4), 1e4, 2000), tropicalize_line(fam(3, 4)), 8.0)
        assert abs(d1 - d2) < 0.25 * max(d1, d2)


class TestConvergence:
    def test_example_ladder(self):
        report = convergence_report(fam(4, 3), [1e3, 1e4, 1e6, 1e8], 2000, 8.0)
        distances = [d for _, d in report.entries]
        assert report.monotone
        for a, b in zip(distances, distances[1:]):
            assert b < a * 1.1
        assert distances[-1] < distances[0]
        assert report.decay_constant > 0
        assert report.r_squared >= 0.9
