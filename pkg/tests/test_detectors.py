import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from edgebench.detectors import (
    CannyParams,
    GradientField,
    auto_thresholds,
    bridge,
    canny,
    canny_edges,
    canny_gradient,
    gradient_score,
    hysteresis,
    laplacian_sobel_score,
    non_max_suppression,
    zero_cross_binary,
    zero_cross_intensity,
)
from edgebench.image import convolve_same, magnitude, threshold
from edgebench.kernels import (
    GaussianParams,
    gaussian_kernel,
    laplacian_kernel,
    log_kernel,
    roberts_pair,
    sobel_pair,
)

from oracles import direct_convolve_same, ring_components

signed = st.floats(-50, 50, allow_nan=False).map(lambda v: round(v, 1))


def signed_maps(max_side=8):
    shapes = st.tuples(st.integers(1, max_side), st.integers(1, max_side))
    return shapes.flatmap(lambda s: arrays(np.float64, s, elements=signed))


class TestGradientScore:
    def test_constant_image(self):
        s = gradient_score(np.full((7, 7), 100.0), sobel_pair())
        assert not s[1:-1, 1:-1].any()
        assert s.min() >= 0

    def test_vertical_step(self):
        img = np.zeros((6, 8))
        img[:, 4:] = 255.0
        s = gradient_score(img, sobel_pair())
        kx, ky = sobel_pair()
        oracle = np.abs(direct_convolve_same(img, kx)) + np.abs(direct_convolve_same(img, ky))
        np.testing.assert_array_equal(s, oracle)
        assert np.all(s[1:-1, 3] == 4 * 255) and np.all(s[1:-1, 4] == 4 * 255)

    @pytest.mark.parametrize("pair", [roberts_pair(), sobel_pair()])
    def test_compositional(self, pair):
        img = np.random.default_rng(1).uniform(0, 255, (9, 11))
        kx, ky = pair
        np.testing.assert_array_equal(
            gradient_score(img, pair), magnitude(convolve_same(img, kx), convolve_same(img, ky)))


class TestZeroCross:
    def test_all_zero(self):
        assert not zero_cross_intensity(np.zeros((4, 4))).any()

    def test_all_positive(self):
        assert not zero_cross_binary(np.ones((4, 5))).any()

    def test_two_by_two_trace(self):
        img = [[2.0, -3.0], [-1.0, 4.0]]
        assert zero_cross_intensity(img).tolist() == [[2.0, 0.0], [0.0, 0.0]]
        assert zero_cross_binary(img).tolist() == [[True, False], [False, False]]

    def test_checkerboard(self):
        board = np.where(np.add.outer(np.arange(5), np.arange(6)) % 2, -1.0, 1.0)
        b = zero_cross_binary(board)
        assert b[:-1, :-1].all()
        assert not b[-1].any() and not b[:, -1].any()

    @pytest.mark.parametrize("shape", [(1, 7), (7, 1), (1, 1)])
    def test_degenerate_shapes(self, shape):
        img = np.where(np.arange(np.prod(shape)) % 2, -3.0, 3.0).reshape(shape)
        assert not zero_cross_intensity(img).any()

    def test_negative_centre(self):
        # strictly negative pixel with a positive right neighbour
        assert zero_cross_intensity([[-5.0, 2.0], [-1.0, -1.0]])[0, 0] == 5.0

    @given(signed_maps())
    def test_invariants(self, img):
        z = zero_cross_intensity(img)
        assert not z[-1].any() and not z[:, -1].any()
        assert np.all((z == 0) | (z == np.abs(img)))
        assert not z[img == 0].any()

    @given(signed_maps())
    def test_matches_loop_transliteration(self, img):
        m, n = img.shape
        expected = np.zeros((m, n))
        for i in range(m - 1):
            for j in range(n - 1):
                nb = (img[i + 1, j], img[i + 1, j + 1], img[i, j + 1])
                if img[i, j] > 0 and any(v < 0 for v in nb):
                    expected[i, j] = abs(img[i, j])
                elif img[i, j] < 0 and any(v > 0 for v in nb):
                    expected[i, j] = abs(img[i, j])
        np.testing.assert_array_equal(zero_cross_intensity(img), expected)


class TestLaplacianSobel:
    @pytest.mark.parametrize("lap", [laplacian_kernel(), log_kernel(GaussianParams(1, 2))])
    def test_constant_interior(self, lap):
        s = laplacian_sobel_score(np.full((16, 16), 77.0), lap)
        r = lap.shape[0] // 2 + 1
        assert np.allclose(s[r:-r, r:-r], 0, atol=1e-9)

    def test_compositional(self):
        img = np.random.default_rng(2).uniform(0, 255, (12, 10))
        lap = log_kernel(GaussianParams(1.0, 2))
        np.testing.assert_array_equal(laplacian_sobel_score(img, lap),
                                      gradient_score(convolve_same(img, lap), sobel_pair()))


class TestCannyGradient:
    def test_constant(self):
        f = canny_gradient(np.full((12, 12), 50.0), gaussian_kernel(GaussianParams(1, 2)))
        assert np.allclose(f.mag[4:-4, 4:-4], 0, atol=1e-9)

    def test_ramp_direction(self):
        ramp = np.tile(np.arange(16.0) * 3, (16, 1))
        f = canny_gradient(ramp, gaussian_kernel(GaussianParams(1, 2)))
        inner = f.direction[5:-5, 5:-5]
        assert np.allclose(np.abs(np.sin(inner)), 0, atol=1e-9)

    def test_compositional(self):
        img = np.random.default_rng(4).uniform(0, 255, (8, 8))
        g = gaussian_kernel(GaussianParams(1.0, 1))
        f = canny_gradient(img, g)
        sm = direct_convolve_same(img, g)
        gx = direct_convolve_same(sm, sobel_pair()[0])
        gy = direct_convolve_same(sm, sobel_pair()[1])
        np.testing.assert_allclose(f.mag, np.abs(gx) + np.abs(gy), atol=1e-9)
        np.testing.assert_allclose(f.direction, np.arctan2(gy, gx), atol=1e-9)
        assert f.maxmag == f.mag.max()


def nms_loops(mag, direction):
    """Loop transliteration of the suppression step, with 180 folded to 0."""
    rows, cols = mag.shape
    out = np.zeros_like(mag)
    deg = direction * 180 / np.pi
    deg[deg < 0] += 180
    for i in range(1, rows - 1):
        for j in range(1, cols - 1):
            d = deg[i, j]
            if d == 180:
                d = 0.0
            if 0 <= d < 22.5 or 157.5 <= d < 180:
                q, r = mag[i, j + 1], mag[i, j - 1]
            elif 22.5 <= d < 67.5:
                q, r = mag[i + 1, j - 1], mag[i - 1, j + 1]
            elif 67.5 <= d < 112.5:
                q, r = mag[i + 1, j], mag[i - 1, j]
            else:
                q, r = mag[i - 1, j - 1], mag[i + 1, j + 1]
            if mag[i, j] >= q and mag[i, j] >= r:
                out[i, j] = mag[i, j]
    return out


class TestNMS:
    def test_constant_field(self):
        f = GradientField(np.full((5, 6), 3.0), np.full((5, 6), 0.7))
        out = non_max_suppression(f)
        assert np.all(out[1:-1, 1:-1] == 3.0)
        assert not out[0].any() and not out[-1].any() and not out[:, 0].any() and not out[:, -1].any()

    def test_single_peak(self):
        mag = np.zeros((5, 5))
        mag[2, 2] = 9.0
        out = non_max_suppression(GradientField(mag, np.zeros((5, 5))))
        assert out[2, 2] == 9.0 and out.sum() == 9.0

    def test_vertical_ridge(self):
        mag = np.zeros((5, 5))
        mag[:, 1], mag[:, 2], mag[:, 3] = 1.0, 3.0, 1.0
        out = non_max_suppression(GradientField(mag, np.zeros((5, 5))))
        expected = np.zeros((5, 5))
        expected[1:4, 2] = 3.0
        np.testing.assert_array_equal(out, expected)

    def test_direction_pi_folds_to_horizontal(self):
        mag = np.zeros((3, 3))
        mag[1] = [5.0, 4.0, 0.0]
        mag[0, 1] = mag[2, 1] = 9.0  # would suppress if the vertical bin were used
        out = non_max_suppression(GradientField(mag, np.full((3, 3), np.pi)))
        assert out[1, 1] == 0.0  # horizontal: 4 < 5
        mag[1, 0] = 1.0
        out = non_max_suppression(GradientField(mag, np.full((3, 3), np.pi)))
        assert out[1, 1] == 4.0

    @settings(max_examples=100, deadline=None)
    @given(st.integers(1, 9), st.integers(1, 9), st.integers(0, 2**32 - 1))
    def test_matches_loops_and_bounds(self, h, w, seed):
        rng = np.random.default_rng(seed)
        mag = rng.integers(0, 5, (h, w)).astype(float)
        # include exact bin edges and +-pi
        choices = np.deg2rad([0, 22.5, 45, 67.5, 90, 112.5, 157.5, 180, -22.5, -90, -180])
        direction = np.where(rng.random((h, w)) < 0.5, rng.choice(choices, (h, w)),
                             rng.uniform(-np.pi, np.pi, (h, w)))
        out = non_max_suppression(GradientField(mag, direction))
        np.testing.assert_array_equal(out, nms_loops(mag, direction))
        assert np.all(out <= mag)
        assert not out[mag == 0].any()


class TestBridge:
    def test_empty(self):
        assert not bridge(np.zeros((4, 4), bool)).any()

    def test_diagonal_pair(self):
        b = np.zeros((3, 3), bool)
        b[0, 0] = b[2, 2] = True
        expected = b.copy()
        expected[1, 1] = True
        np.testing.assert_array_equal(bridge(b), expected)

    def test_adjacent_pair_unchanged(self):
        b = np.zeros((3, 3), bool)
        b[0, 0] = b[0, 1] = True
        np.testing.assert_array_equal(bridge(b), b)

    def test_every_neighbourhood(self):
        for bits in itertools.product((0, 1), repeat=8):
            block = np.zeros((3, 3), bool)
            cells = [(i, j) for i in range(3) for j in range(3) if (i, j) != (1, 1)]
            for (i, j), v in zip(cells, bits):
                block[i, j] = v
            got = bridge(block)[1, 1]
            assert got == (ring_components(block) >= 2), block.astype(int)

    @given(arrays(bool, st.tuples(st.integers(1, 8), st.integers(1, 8))))
    def test_ones_stay(self, b):
        assert np.all(bridge(b)[b])


class TestHysteresis:
    def test_strict_at_zero(self):
        assert not hysteresis(np.zeros((3, 3)), 0, 0).any()

    def test_single_pixel(self):
        s = np.zeros((3, 3))
        s[1, 1] = 10
        assert hysteresis(s, 1, 5).tolist() == (s > 0).tolist()

    def test_equal_to_threshold_is_not_edge(self):
        s = np.full((1, 1), 5.0)
        assert not hysteresis(s, 5, 5).any()

    def test_gap_bridging(self):
        s = np.zeros((3, 5))
        s[1] = [10, 10, 2, 10, 10]
        edges = hysteresis(s, 1, 5)
        assert edges[1].all()
        # the cells above and below the gap are bridged too but have no weak support
        assert not edges[0].any() and not edges[2].any()
        assert not hysteresis(s, 3, 5)[1, 2]

    def test_low_above_high(self):
        with pytest.raises(ValueError):
            hysteresis(np.zeros((2, 2)), 3, 2)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.floats(0, 10), st.floats(0, 10), st.floats(10, 20))
    def test_raising_low_never_adds(self, seed, a, b, high):
        s = np.random.default_rng(seed).uniform(0, 25, (8, 8))
        lo1, lo2 = sorted((a, b))
        assert not np.any(hysteresis(s, lo2, high) & ~hysteresis(s, lo1, high))


class TestCanny:
    def test_params_validation(self):
        with pytest.raises(ValueError):
            CannyParams(low_threshold=5, high_threshold=2)
        with pytest.raises(ValueError):
            CannyParams(low_threshold=-1, high_threshold=2)

    def test_constant_image(self):
        edges, maxmag = canny(np.full((20, 20), 128.0), CannyParams(GaussianParams(1, 2), 10, 20))
        assert not edges[6:-6, 6:-6].any()
        assert maxmag > 0  # only the zero-padded border responds

    def test_no_nms_is_hysteresis_of_raw_magnitude(self):
        img = np.random.default_rng(5).uniform(0, 255, (16, 16))
        g = gaussian_kernel(GaussianParams(1.0, 2))
        edges, maxmag = canny_edges(img, g, 10, 20, nms=False)
        f = canny_gradient(img, g)
        np.testing.assert_array_equal(edges, hysteresis(f.mag, 10, 20))
        assert maxmag == f.maxmag

    def test_maxmag_before_suppression(self):
        img = np.random.default_rng(6).uniform(0, 255, (16, 16))
        p = GaussianParams(1.0, 2)
        _, m_on = canny(img, CannyParams(p, 1, 2, True))
        _, m_off = canny(img, CannyParams(p, 1, 2, False))
        assert m_on == m_off

    def test_suppressed_below_raw(self):
        img = np.random.default_rng(8).uniform(0, 255, (16, 16))
        f = canny_gradient(img, gaussian_kernel(GaussianParams(1.0, 2)))
        assert np.all(non_max_suppression(f) <= f.mag)

    def test_deterministic(self):
        img = np.random.default_rng(9).uniform(0, 255, (24, 24))
        p = CannyParams(GaussianParams(1.0, 2), 5, 10, True)
        a, b = canny(img, p), canny(img, p)
        assert a[0].tobytes() == b[0].tobytes() and a[1] == b[1]

    def test_step_edge_found(self):
        img = np.zeros((20, 20))
        img[:, 10:] = 200.0
        edges, _ = canny(img, CannyParams(GaussianParams(1.0, 2), 10, 20, True))
        assert edges[5:15, 9:11].any(axis=1).all()
        assert not edges[5:15, 3:7].any()


def test_auto_thresholds():
    mag = np.arange(100.0).reshape(10, 10)
    low, high = auto_thresholds(mag)
    assert 0 < low < high <= mag.max()
    assert low == pytest.approx(0.4 * high)
    assert np.mean(mag <= high) >= 0.7
    assert auto_thresholds(np.zeros((3, 3))) == (0.0, 0.0)


def test_threshold_display_smoke():
    # Laplacian/LoG magnitude maps thresholded at 40 and 8 give partial edge maps
    rng = np.random.default_rng(10)
    yy, xx = np.mgrid[:64, :64]
    img = np.where((xx - 32) ** 2 + (yy - 32) ** 2 < 15**2, 180.0, 60.0) + rng.normal(0, 4, (64, 64))
    for lap, t in [(laplacian_kernel(), 40), (log_kernel(GaussianParams(2, 6)), 8)]:
        d = threshold(laplacian_sobel_score(img, lap), t).mean()
        assert 0 < d < 1
