import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from vidcarve.batching import (
    SeamBatch,
    batch_carve,
    label_parents,
    remove_batch,
    select_batch,
)
from vidcarve.seams import Seam, cumulative_energy, min_seam

GOLDEN_3X3 = np.array([[1, 2, 3], [4, 5, 6], [7, 8, 9]], dtype=np.float64)

energy_maps = hnp.arrays(
    np.float64,
    st.tuples(st.integers(1, 10), st.integers(1, 10)),
    elements=st.floats(0, 255, allow_nan=False, allow_infinity=False),
)


def tables_for(m):
    t = cumulative_energy(m)
    return t, label_parents(t)


def batch_columns_per_row(batch):
    offs = np.stack([s.offsets for s in batch])
    return offs.T  # (h, b)


def test_labels_two_row_constant():
    t, labels = tables_for(np.full((2, 3), 5.0))
    # Hand trace under leftmost tie-break: children 0 and 1 share parent 0.
    assert labels.tolist() == [0, 0, 1]


def test_labels_golden_3x3_single_parent():
    _, labels = tables_for(GOLDEN_3X3)
    assert labels.tolist() == [0, 0, 0]


@given(m=energy_maps)
@settings(max_examples=60)
def test_labels_partition_last_row(m):
    _, labels = tables_for(m)
    w = m.shape[1]
    assert labels.shape == (w,)
    assert (labels >= 0).all() and (labels < w).all()
    # non-decreasing: traced paths cannot cross
    assert (np.diff(labels) >= 0).all()


def test_select_batch_single_parent_map():
    t, labels = tables_for(GOLDEN_3X3)
    batch = select_batch(t, labels)
    assert len(batch) == 1
    assert batch.seams[0].offsets.tolist() == [0, 0, 0]


def test_select_batch_two_row_constant():
    t, labels = tables_for(np.full((2, 3), 5.0))
    batch = select_batch(t, labels)
    assert [int(s.offsets[-1]) for s in batch] == [0, 2]
    assert [s.offsets.tolist() for s in batch] == [[0, 0], [1, 2]]


def test_select_batch_k1_is_min_seam():
    rng = np.random.default_rng(31)
    for _ in range(20):
        m = rng.uniform(0, 255, size=(6, 8))
        t, labels = tables_for(m)
        batch = select_batch(t, labels, k=1)
        best = min_seam(t)
        assert len(batch) == 1
        assert np.array_equal(batch.seams[0].offsets, best.offsets)
        assert batch.seams[0].cost == best.cost


def test_select_batch_rejects_bad_k():
    t, labels = tables_for(GOLDEN_3X3)
    with pytest.raises(ValueError):
        select_batch(t, labels, k=0)


@given(m=energy_maps)
@settings(max_examples=60)
def test_batch_structure(m):
    t, labels = tables_for(m)
    batch = select_batch(t, labels)
    # one seam per parent, sorted by last-row column
    assert len(batch) == len(set(labels.tolist()))
    last_cols = [int(s.offsets[-1]) for s in batch]
    assert last_cols == sorted(last_cols)
    # pairwise disjoint in every row
    cols = batch_columns_per_row(batch)
    for row in cols:
        assert len(set(row.tolist())) == len(batch)
    # the global minimum is always a member
    best = min_seam(t)
    assert any(np.array_equal(s.offsets, best.offsets) for s in batch)


@given(m=energy_maps, k=st.integers(1, 10))
@settings(max_examples=60)
def test_k_truncation_keeps_the_cheapest(m, k):
    t, labels = tables_for(m)
    full = select_batch(t, labels)
    trimmed = select_batch(t, labels, k=k)
    if k >= len(full):
        assert len(trimmed) == len(full)
        for a, b in zip(trimmed, full):
            assert np.array_equal(a.offsets, b.offsets)
        return
    assert len(trimmed) == k
    ranked = sorted(full, key=lambda s: (s.cost, int(s.offsets[-1])))[:k]
    expect = sorted(int(s.offsets[-1]) for s in ranked)
    assert [int(s.offsets[-1]) for s in trimmed] == expect
    best = min_seam(t)
    assert any(np.array_equal(s.offsets, best.offsets) for s in trimmed)


def test_remove_batch_uniform_width():
    rng = np.random.default_rng(32)
    frame = rng.integers(0, 256, size=(7, 10, 3), dtype=np.uint8)
    t, labels = tables_for(rng.uniform(0, 255, size=(7, 10)))
    batch = select_batch(t, labels)
    out = remove_batch(frame, batch)
    assert out.shape == (7, 10 - len(batch), 3)


def test_remove_batch_two_row_constant_keeps_middle():
    t, labels = tables_for(np.full((2, 3), 5.0))
    batch = select_batch(t, labels)
    frame = np.array([[1, 2, 3], [4, 5, 6]], dtype=np.uint8)
    out = remove_batch(frame, batch)
    # seams [0,0] and [1,2]: row 0 keeps cols 2..., row 1 keeps col 1
    assert out.tolist() == [[3], [5]]


def test_remove_batch_empty_is_identity():
    frame = np.arange(12, dtype=np.uint8).reshape(3, 4)
    out = remove_batch(frame, SeamBatch(seams=()))
    assert np.array_equal(out, frame)
    assert out is not frame


def test_remove_batch_asserts_on_overlap():
    frame = np.zeros((3, 4), dtype=np.uint8)
    dup = Seam(offsets=np.array([1, 1, 1]), cost=0.0)
    with pytest.raises(AssertionError):
        remove_batch(frame, SeamBatch(seams=(dup, dup)))


def test_remove_batch_preserves_row_order():
    rng = np.random.default_rng(33)
    frame = rng.integers(0, 256, size=(6, 12), dtype=np.uint8)
    t, labels = tables_for(rng.uniform(0, 255, size=(6, 12)))
    batch = select_batch(t, labels)
    out = remove_batch(frame, batch)
    removed = batch_columns_per_row(batch)
    for i in range(6):
        kept = np.delete(frame[i], removed[i])
        assert np.array_equal(out[i], kept)


def test_batch_carve_identity():
    frame = np.arange(24, dtype=np.uint8).reshape(4, 6)
    out, batches = batch_carve(frame, 6)
    assert np.array_equal(out, frame)
    assert batches == []


def test_batch_carve_reaches_target():
    rng = np.random.default_rng(34)
    frame = rng.integers(0, 256, size=(8, 8, 3), dtype=np.uint8)
    out, batches = batch_carve(frame, 5)
    assert out.shape == (8, 5, 3)
    assert sum(len(b) for b in batches) == 3


def test_batch_carve_zero_band_attracts_first_batch():
    # Columns 5..7 carry zero energy; with two seams requested, both picked
    # children trace entirely inside the band (hand-traced, h=2).
    energy = np.full((2, 12), 100.0)
    energy[:, 5:8] = 0.0
    frame = np.zeros((2, 12), dtype=np.uint8)
    out, batches = batch_carve(frame, 10, energy=energy)
    assert out.shape == (2, 10)
    first = batches[0]
    assert len(first) == 2
    for seam in first:
        assert seam.cost == 0.0
        assert all(5 <= int(c) <= 7 for c in seam.offsets)


def test_batch_carve_rejects_bad_targets():
    frame = np.zeros((4, 6), dtype=np.uint8)
    with pytest.raises(ValueError):
        batch_carve(frame, 0)
    with pytest.raises(ValueError):
        batch_carve(frame, 7)


def test_batch_carve_rejects_mismatched_energy():
    frame = np.zeros((4, 6), dtype=np.uint8)
    with pytest.raises(ValueError):
        batch_carve(frame, 4, energy=np.zeros((4, 5)))
