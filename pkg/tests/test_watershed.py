import numpy as np
import pytest

from argseg import (
    RasterImage,
    RegionPartition,
    WatershedParams,
    gradient_magnitude,
    load_partition,
    luminance,
    region_adjacency,
    region_stats,
    save_partition,
    watershed,
)

from .fixtures import flat_image, noisy_fixture_64, noisy_rectangles_image, two_tone_image


def image_from_gray(gray: np.ndarray) -> RasterImage:
    g = np.asarray(gray, dtype=np.uint8)
    return RasterImage(np.stack([g, g, g], axis=2))


def assert_region_connected(partition: RegionPartition) -> None:
    from scipy import ndimage

    four = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]])
    for rid in range(partition.region_count):
        mask = partition.region_ids == rid
        assert mask.any(), f"region {rid} unused"
        _, pieces = ndimage.label(mask, structure=four)
        assert pieces == 1, f"region {rid} split into {pieces} pieces"


class TestLuminance:
    def test_black_and_white(self):
        assert np.all(luminance(flat_image(4, 4, (0, 0, 0))) == 0.0)
        assert np.allclose(luminance(flat_image(4, 4, (255, 255, 255))), 1.0)

    def test_pure_red(self):
        assert luminance(flat_image(1, 1, (255, 0, 0)))[0, 0] == pytest.approx(0.299)


class TestGradient:
    def test_constant_grid(self):
        assert np.all(gradient_magnitude(np.full((5, 7), 0.42)) == 0.0)

    def test_vertical_step(self):
        lum = np.zeros((4, 4))
        lum[:, 2:] = 1.0
        grad = gradient_magnitude(lum)
        expected = np.zeros((4, 4))
        expected[:, 1:3] = 1.0
        assert np.array_equal(grad, expected)

    def test_single_bright_pixel(self):
        lum = np.zeros((5, 5))
        lum[2, 2] = 1.0
        grad = gradient_magnitude(lum)
        expected = np.zeros((5, 5))
        expected[1:4, 1:4] = 1.0
        assert np.array_equal(grad, expected)


class TestWatershed:
    def test_flat_image_single_region(self):
        p = watershed(flat_image(16, 12))
        assert p.region_count == 1
        assert np.all(p.region_ids == 0)

    def test_two_tone_split(self):
        img, truth = two_tone_image(8, 8)
        p = watershed(img, WatershedParams(smoothing_radius=0))
        assert p.region_count == 2
        # hand trace: the left flood claims through column 3, the right
        # flood claims column 4 first because its push precedes the
        # cross-ridge pop
        assert np.all(p.region_ids[:, :4] == 0)
        assert np.all(p.region_ids[:, 4:] == 1)

    def test_partition_totality_and_density(self):
        p = watershed(noisy_fixture_64(), WatershedParams(smoothing_radius=0))
        ids = np.unique(p.region_ids)
        assert ids.min() == 0
        assert ids.max() == p.region_count - 1
        assert ids.shape[0] == p.region_count

    def test_regions_are_4_connected(self):
        p = watershed(noisy_fixture_64(), WatershedParams(smoothing_radius=1))
        assert_region_connected(p)

    def test_bit_determinism(self):
        img = noisy_fixture_64()
        a = watershed(img, WatershedParams(smoothing_radius=1))
        b = watershed(img, WatershedParams(smoothing_radius=1))
        assert a.region_count == b.region_count
        assert np.array_equal(a.region_ids, b.region_ids)

    def test_single_pixel_image(self):
        p = watershed(flat_image(1, 1))
        assert p.region_count == 1 and p.region_ids.shape == (1, 1)

    def test_single_row_image(self):
        gray = np.array([[0, 0, 200, 0, 0]], dtype=np.uint8)
        p = watershed(image_from_gray(gray), WatershedParams(smoothing_radius=0))
        assert p.region_count == 2
        assert p.region_ids[0, 0] == 0 and p.region_ids[0, 4] == 1

    def test_oversegmentation_covers_objects(self):
        img, truth = noisy_rectangles_image(seed=3, size=64)
        p = watershed(img, WatershedParams(smoothing_radius=1))
        # regions fully inside one ground-truth object
        inside = {}
        for rid in range(p.region_count):
            objs = np.unique(truth[p.region_ids == rid])
            inside[rid] = objs[0] if objs.shape[0] == 1 else -1
        from scipy import ndimage

        for obj in np.unique(truth):
            interior = ndimage.binary_erosion(truth == obj, np.ones((3, 3)))
            rids = p.region_ids[interior]
            good = sum(inside[rid] == obj for rid in rids.tolist())
            assert good / rids.shape[0] >= 0.98

    def test_smoothing_radius_validation(self):
        with pytest.raises(ValueError):
            WatershedParams(smoothing_radius=9)
        with pytest.raises(ValueError):
            WatershedParams(smoothing_radius=-1)


class TestRegionStats:
    def test_single_region_flat(self):
        img = flat_image(4, 4, (128, 64, 0))
        p = RegionPartition(np.zeros((4, 4), dtype=np.int32), 1)
        means, centroids, counts = region_stats(img, p)
        assert means[0] == pytest.approx((128 / 255, 64 / 255, 0.0))
        assert centroids[0] == pytest.approx((1.5, 1.5))
        assert counts[0] == 16

    def test_single_pixel(self):
        img = flat_image(1, 1)
        p = RegionPartition(np.zeros((1, 1), dtype=np.int32), 1)
        _, centroids, counts = region_stats(img, p)
        assert centroids[0] == pytest.approx((0.0, 0.0))
        assert counts[0] == 1

    def test_half_split_centroids(self):
        img = flat_image(4, 2)
        ids = np.zeros((2, 4), dtype=np.int32)
        ids[:, 2:] = 1
        p = RegionPartition(ids, 2)
        _, centroids, _ = region_stats(img, p)
        assert centroids[0] == pytest.approx((0.5, 0.5))
        assert centroids[1] == pytest.approx((2.5, 0.5))

    def test_counts_sum_and_mean_bounds(self):
        img = noisy_fixture_64()
        p = watershed(img, WatershedParams(smoothing_radius=1))
        means, _, counts = region_stats(img, p)
        assert counts.sum() == 64 * 64
        pix = img.array.astype(np.float64) / 255.0
        for rid in range(p.region_count):
            member = pix[p.region_ids == rid]
            assert np.all(means[rid] >= member.min(axis=0) - 1e-12)
            assert np.all(means[rid] <= member.max(axis=0) + 1e-12)

    def test_dimension_mismatch(self):
        img = flat_image(4, 4)
        p = RegionPartition(np.zeros((2, 2), dtype=np.int32), 1)
        with pytest.raises(ValueError):
            region_stats(img, p)


class TestRegionAdjacency:
    def test_single_region(self):
        p = RegionPartition(np.zeros((3, 3), dtype=np.int32), 1)
        assert region_adjacency(p) == set()

    def test_half_split(self):
        ids = np.zeros((4, 4), dtype=np.int32)
        ids[:, 2:] = 1
        assert region_adjacency(RegionPartition(ids, 2)) == {(0, 1)}

    def test_checkerboard_no_diagonals(self):
        ids = np.array([[0, 1], [2, 3]], dtype=np.int32)
        got = region_adjacency(RegionPartition(ids, 4))
        assert got == {(0, 1), (0, 2), (1, 3), (2, 3)}

    def test_single_pixel(self):
        p = RegionPartition(np.zeros((1, 1), dtype=np.int32), 1)
        assert region_adjacency(p) == set()


class TestPartitionExport:
    def test_round_trip(self, tmp_path):
        p = watershed(noisy_fixture_64(), WatershedParams(smoothing_radius=1))
        path = tmp_path / "part.png"
        save_partition(p, path)
        back = load_partition(path)
        assert back.region_count == p.region_count
        assert np.array_equal(back.region_ids, p.region_ids)

    def test_too_many_regions_rejected(self, tmp_path):
        n = 300 * 300
        ids = np.arange(n, dtype=np.int32).reshape(300, 300)
        with pytest.raises(ValueError, match="65535"):
            save_partition(RegionPartition(ids, n), tmp_path / "big.png")
