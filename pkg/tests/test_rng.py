import numpy as np

from uwbag import kernels, rng


def test_splitmix64_reference_vectors():
    # first outputs of splitmix64 seeded with 0 (published reference values);
    # the counter-based form hits the same states as the sequential one
    assert rng.u64_at(0, 0) == 0xE220A8397B1DCDAF
    assert rng.u64_at(0, 1) == 0x6E789E6AA1B965F4
    assert rng.u64_at(0, 2) == 0x06C45D188009454F


def test_mix64_wraps_and_masks():
    assert 0 <= rng.mix64(2**64 - 1) < 2**64
    assert rng.mix64(123) == rng.mix64(123 + 2**64)


def test_kernel_stream_matches_python_reference():
    keys = [0, 1, 12345, 2**64 - 1, 0xDEADBEEFCAFEBABE]
    for key in keys:
        for i in (0, 1, 7, 1000):
            assert int(kernels.substream_u64(np.uint64(key), i)) == rng.substream_key(key, i)
        for j in (0, 1, 63, 4097):
            assert float(kernels.uniform_u64(np.uint64(key), j)) == rng.uniform_at(key, j)


def test_uniforms_in_unit_interval():
    s = rng.Stream.from_seed(99)
    us = [s.uniform(j) for j in range(2000)]
    assert all(0.0 <= u < 1.0 for u in us)
    assert abs(np.mean(us) - 0.5) < 0.02


def test_substreams_differ_and_reproduce():
    s = rng.Stream.from_seed(7)
    a = s.substream(0)
    b = s.substream(1)
    assert a.key != b.key
    assert rng.scan_stream(7, 0).key == a.key
    assert rng.Stream.from_seed(7).substream(0).key == a.key


def test_exp_gaps_mean_and_determinism():
    key = np.uint64(rng.Stream.from_seed(31).key)
    g1 = kernels.exp_gaps(key, 0, 50_000, 0.1)
    g2 = kernels.exp_gaps(key, 0, 50_000, 0.1)
    assert np.array_equal(g1, g2)
    assert abs(g1.mean() - 10.0) < 0.15
    assert (g1 >= 0).all()
