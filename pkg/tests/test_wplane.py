import numpy as np
import pytest

from sbtc.btc_gray import encode_gray_block
from sbtc.wplane import QuantPair, initial_bitmap, quantize_channels, weighted_plane

from helpers import oracle_channel_means, random_rgb_block


def test_weighted_plane_values():
    block = np.array([[[235, 182, 255]]])
    assert weighted_plane(block)[0, 0] == 224.0
    gray = np.full((2, 2, 3), 77)
    assert np.array_equal(weighted_plane(gray), np.full((2, 2), 77.0))
    # stays a real number, no integer truncation
    assert weighted_plane(np.array([[[1, 1, 2]]]))[0, 0] == 4.0 / 3.0


def test_initial_bitmap_constant_block_is_all_ones():
    assert initial_bitmap(np.full((3, 5, 3), 9)).all()


def test_initial_bitmap_two_tone():
    block = np.array([
        [[10, 10, 10], [10, 10, 10]],
        [[200, 200, 200], [200, 200, 200]],
    ])
    assert weighted_plane(block).mean() == 105.0
    assert np.array_equal(initial_bitmap(block), [[0, 0], [1, 1]])


def test_bitmap_matches_gray_btc_of_weighted_plane():
    rng = np.random.default_rng(30)
    for _ in range(500):
        m, n = rng.integers(1, 9, 2)
        block = random_rgb_block(rng, int(m), int(n))
        expected = encode_gray_block(weighted_plane(block)).bitmap
        assert np.array_equal(initial_bitmap(block), expected)


def test_quantize_matches_reconstruction_example():
    # block built so the group means are exactly the six target values
    bitmap = np.array([
        [1, 0, 0, 0],
        [0, 1, 0, 0],
        [0, 0, 1, 0],
        [1, 1, 1, 1],
    ], dtype=np.uint8)
    high = np.array([235, 182, 255], dtype=np.uint8)
    low = np.array([226, 156, 250], dtype=np.uint8)
    block = np.where(bitmap[:, :, None].astype(bool), high, low)
    quant = quantize_channels(block, bitmap)
    assert quant.as_tuple() == (235.0, 226.0, 182.0, 156.0, 255.0, 250.0)


def test_quantize_degenerate_all_ones():
    block = random_rgb_block(np.random.default_rng(31), 4, 4)
    quant = quantize_channels(block, np.ones((4, 4), dtype=np.uint8))
    means = block.astype(np.float64).mean(axis=(0, 1))
    assert np.allclose(quant.high, means)
    assert np.allclose(quant.low, quant.high)


def test_quantize_degenerate_all_zeros():
    block = random_rgb_block(np.random.default_rng(32), 3, 3)
    quant = quantize_channels(block, np.zeros((3, 3), dtype=np.uint8))
    means = block.astype(np.float64).mean(axis=(0, 1))
    assert np.allclose(quant.low, means)
    assert np.allclose(quant.high, quant.low)


def test_quantize_matches_oracle_on_random_blocks():
    rng = np.random.default_rng(33)
    for _ in range(500):
        m, n = rng.integers(1, 9, 2)
        block = random_rgb_block(rng, int(m), int(n))
        bitmap = rng.integers(0, 2, (int(m), int(n)), dtype=np.uint8)
        got = quantize_channels(block, bitmap).as_tuple()
        expected = oracle_channel_means(block, bitmap)
        assert np.allclose(got, expected, atol=1e-9)


def test_mean_decomposition_property():
    # q*high + (m*n-q)*low recomposes the channel sum when both groups exist
    rng = np.random.default_rng(34)
    checked = 0
    while checked < 500:
        m, n = rng.integers(1, 9, 2)
        block = random_rgb_block(rng, int(m), int(n))
        bitmap = initial_bitmap(block)
        q = int(bitmap.sum())
        if q == 0 or q == bitmap.size:
            continue
        quant = quantize_channels(block, bitmap)
        sums = block.astype(np.float64).sum(axis=(0, 1))
        recomposed = q * quant.high + (bitmap.size - q) * quant.low
        assert np.allclose(recomposed, sums, rtol=0, atol=1e-9)
        checked += 1


def test_quantize_permutation_invariance():
    rng = np.random.default_rng(35)
    block = random_rgb_block(rng, 4, 5)
    bitmap = rng.integers(0, 2, (4, 5), dtype=np.uint8)
    perm = rng.permutation(20)
    flat_block = block.reshape(20, 3)[perm].reshape(4, 5, 3)
    flat_bits = bitmap.reshape(20)[perm].reshape(4, 5)
    assert quantize_channels(block, bitmap) == quantize_channels(flat_block, flat_bits)


def test_shape_validation():
    block = random_rgb_block(np.random.default_rng(36), 2, 2)
    with pytest.raises(ValueError):
        quantize_channels(block, np.zeros((3, 3), dtype=np.uint8))
    with pytest.raises(ValueError):
        weighted_plane(np.zeros((2, 2), dtype=np.uint8))


def test_quant_pair_vectors():
    quant = QuantPair(1.0, 2.0, 3.0, 4.0, 5.0, 6.0)
    assert np.array_equal(quant.high, [1.0, 3.0, 5.0])
    assert np.array_equal(quant.low, [2.0, 4.0, 6.0])
    assert quant.as_tuple() == (1.0, 2.0, 3.0, 4.0, 5.0, 6.0)
