import numpy as np
import pytest

from vidcarve.buffering import BufferPolicy, SpatioTemporalBuffer, threshold
from vidcarve.energy import motion_energy

from oracles import mean_map, two_pass_std

POLICY = BufferPolicy()


def frame_like(emap):
    return np.zeros(np.asarray(emap).shape, dtype=np.uint8)


def filled_buffer(maps, policy=None):
    buf = SpatioTemporalBuffer(policy=policy or BufferPolicy(alpha=1000.0))
    for m in maps:
        assert buf.push(frame_like(m), m) is None
    return buf


def worst_case_maps(n, maxval=255.0, shape=(4, 5)):
    maps = [np.zeros(shape) for _ in range(n - 1)]
    maps.append(np.full(shape, maxval))
    return maps


class TestThreshold:
    def test_size_one_is_zero(self):
        assert threshold(1, POLICY) == 0.0

    def test_size_two_spot_value(self):
        assert threshold(2, POLICY) == pytest.approx(25.5, abs=1e-12)

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            threshold(0, POLICY)

    def test_strictly_decreasing_from_two(self):
        values = [threshold(n, POLICY) for n in range(2, 1025)]
        assert all(a > b for a, b in zip(values, values[1:]))
        assert threshold(1, POLICY) < values[-1]

    def test_matches_worst_case_asde(self):
        # The threshold is alpha times the ASDE of (n-1) empty maps plus one
        # full-scale map; exact up to floating point.
        for n in range(2, 11):
            buf = filled_buffer(worst_case_maps(n))
            assert threshold(n, POLICY) / POLICY.alpha == pytest.approx(
                buf.asde(), abs=1e-9
            )


class TestPolicyValidation:
    def test_rejects_nonpositive_alpha(self):
        with pytest.raises(ValueError):
            BufferPolicy(alpha=0.0)

    def test_rejects_zero_cap(self):
        with pytest.raises(ValueError):
            BufferPolicy(max_len=0)


class TestStats:
    def test_identical_maps_have_zero_std(self):
        buf = filled_buffer([np.full((3, 4), 7.0)] * 3)
        assert (buf.std_map() == 0.0).all()
        assert buf.asde() == 0.0

    def test_two_extreme_maps(self):
        buf = filled_buffer([np.zeros((3, 3)), np.full((3, 3), 255.0)])
        assert buf.pixel_std(1, 1) == pytest.approx(127.5, abs=1e-12)
        assert buf.asde() == pytest.approx(127.5, abs=1e-12)

    def test_std_matches_two_pass_oracle(self):
        rng = np.random.default_rng(41)
        maps = [rng.uniform(0, 255, size=(5, 6)) for _ in range(4)]
        buf = filled_buffer(maps)
        expect = two_pass_std(maps)
        assert np.abs(buf.std_map() - expect).max() < 1e-9
        assert buf.asde() == pytest.approx(expect.mean(), abs=1e-9)
        assert buf.pixel_std(2, 3) == pytest.approx(expect[2, 3], abs=1e-9)

    def test_uniform_energy(self):
        rng = np.random.default_rng(42)
        maps = [rng.uniform(0, 255, size=(4, 4)) for _ in range(5)]
        buf = filled_buffer(maps)
        assert np.abs(buf.uniform_energy() - mean_map(maps)).max() < 1e-9
        same = filled_buffer([np.full((3, 3), 9.0)] * 4)
        assert (same.uniform_energy() == 9.0).all()
        both = filled_buffer([np.zeros((3, 3)), np.full((3, 3), 255.0)])
        assert (both.uniform_energy() == 127.5).all()

    def test_empty_buffer_raises(self):
        buf = SpatioTemporalBuffer()
        for op in (buf.asde, buf.std_map, buf.uniform_energy):
            with pytest.raises(ValueError, match="empty"):
                op()
        with pytest.raises(ValueError, match="empty"):
            buf.pixel_std(0, 0)


class TestPush:
    def test_first_frame_always_accepted(self):
        buf = SpatioTemporalBuffer()
        emap = np.full((4, 4), 200.0)
        assert buf.push(frame_like(emap), emap) is None
        assert len(buf) == 1

    def test_radical_change_flushes(self):
        buf = SpatioTemporalBuffer()
        dark = np.zeros((4, 4))
        bright = np.full((4, 4), 255.0)
        assert buf.push(frame_like(dark), dark) is None
        run = buf.push(frame_like(bright), bright)
        assert run is not None and len(run) == 1
        assert (run.energy_maps[0] == 0.0).all()
        assert len(buf) == 1
        assert (buf.energy_maps[0] == 255.0).all()

    def test_identical_frame_accepted(self):
        buf = SpatioTemporalBuffer()
        emap = np.full((4, 4), 100.0)
        assert buf.push(frame_like(emap), emap) is None
        assert buf.push(frame_like(emap), emap) is None
        assert len(buf) == 2

    def test_static_stream_flushes_only_at_cap(self):
        policy = BufferPolicy(max_len=4)
        buf = SpatioTemporalBuffer(policy=policy)
        emap = np.full((3, 3), 50.0)
        runs = []
        for _ in range(10):
            run = buf.push(frame_like(emap), emap)
            if run is not None:
                runs.append(len(run))
        tail = buf.flush()
        runs.append(len(tail))
        assert runs == [4, 4, 2]

    def test_dimension_mismatch(self):
        buf = SpatioTemporalBuffer()
        emap = np.zeros((4, 4))
        buf.push(frame_like(emap), emap)
        with pytest.raises(ValueError, match="mismatch"):
            buf.push(np.zeros((4, 5), dtype=np.uint8), np.zeros((4, 5)))
        with pytest.raises(ValueError, match="match"):
            buf.push(np.zeros((4, 4), dtype=np.uint8), np.zeros((5, 4)))

    def test_flush_empties(self):
        buf = SpatioTemporalBuffer()
        assert buf.flush() is None
        emap = np.zeros((3, 3))
        buf.push(frame_like(emap), emap)
        run = buf.flush()
        assert len(run) == 1
        assert len(buf) == 0
        assert buf.flush() is None

    def test_accumulators_track_direct_recompute(self):
        # Slowly drifting maps with a periodic upheaval: the buffer grows,
        # hits the ASDE test, hits the cap, restarts, and the accumulators
        # must match a from-scratch recompute the whole way.
        rng = np.random.default_rng(43)
        buf = SpatioTemporalBuffer(policy=BufferPolicy(alpha=0.2, max_len=6))
        base = rng.uniform(50, 80, size=(4, 5))
        lengths = set()
        for k in range(40):
            jump = 170.0 if k % 9 == 8 else 0.0
            emap = np.clip(base + rng.uniform(-2, 2, size=(4, 5)) + jump, 0, 255)
            buf.push(frame_like(emap), emap)
            lengths.add(len(buf))
            expect_std = two_pass_std(buf.energy_maps)
            expect_mean = mean_map(buf.energy_maps)
            scale = max(expect_std.max(), 1.0)
            assert np.abs(buf.std_map() - expect_std).max() / scale < 1e-6
            assert np.abs(buf.uniform_energy() - expect_mean).max() / 255.0 < 1e-6
        assert max(lengths) > 1  # the buffer actually grew


def test_blend_gap_flushes_high_contrast_static_stream():
    # The first frame of a stream carries a pure gradient map while later
    # frames carry the 0.4-weighted blend; on high-contrast content that
    # gap alone trips the ASDE test and the first frame becomes its own run.
    rng = np.random.default_rng(44)
    frame = rng.integers(0, 256, size=(24, 32, 3), dtype=np.uint8)
    buf = SpatioTemporalBuffer()
    assert buf.push(frame, motion_energy(frame, None)) is None
    run = buf.push(frame, motion_energy(frame, frame))
    assert run is not None and len(run) == 1


def test_run_uniform_energy():
    buf = SpatioTemporalBuffer()
    maps = [np.full((3, 3), 10.0), np.full((3, 3), 20.0)]
    for m in maps:
        buf.push(frame_like(m), m)
    run = buf.flush()
    assert (run.uniform_energy() == 15.0).all()
