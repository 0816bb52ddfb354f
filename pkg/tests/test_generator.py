from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tetravex.core import Boundary, Sentinel, Tile, serialize_instance
from tetravex.generator import (
    CSV_HEADER, MASK64, GenConfig, GenerationError, Mode, SplitMix64, experiment_csv,
    generate, generate_iid, generate_shredded, generate_unique, mix64, run_experiment,
    trial_seed,
)
from tetravex.solver import brute_force_count, solve


def test_splitmix_reference_vector():
    # Published first outputs for seed 1234567.
    rng = SplitMix64(1234567)
    assert [rng.next() for _ in range(3)] == [
        6457827717110365317, 3203168211198807973, 9817491932198370423,
    ]


def test_trial_seed_is_mixed_xor():
    assert trial_seed(42, 3) == mix64(42 ^ 3)
    assert trial_seed(-1, 0) == mix64(MASK64)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, MASK64), st.integers(1, 1000))
def test_below_in_range(seed, n):
    rng = SplitMix64(seed)
    assert all(0 <= rng.below(n) < n for _ in range(20))


def test_below_rejects_empty_range():
    with pytest.raises(ValueError):
        SplitMix64(0).below(0)


def test_below_roughly_uniform():
    rng = SplitMix64(7)
    counts = [0] * 6
    for _ in range(6000):
        counts[rng.below(6)] += 1
    assert all(850 < c < 1150 for c in counts)


def test_config_validation():
    with pytest.raises(ValueError):
        GenConfig(0, 2, 3, 1)
    with pytest.raises(ValueError):
        GenConfig(2, 2, 0, 1)
    assert GenConfig(2, 2, 3, 1, "iid").mode is Mode.IID


def test_mode_mismatch_rejected():
    with pytest.raises(ValueError):
        generate_shredded(GenConfig(2, 2, 2, 1, Mode.IID))
    with pytest.raises(ValueError):
        generate_iid(GenConfig(2, 2, 2, 1))
    with pytest.raises(ValueError):
        generate_unique(GenConfig(2, 2, 2, 1, Mode.IID), 5)


def test_alphabet_one():
    inst = generate_shredded(GenConfig(2, 2, 1, 99))
    assert inst.tiles == (Tile(0, 0, 0, 0),) * 4
    assert solve(inst, limit=2).count == 1
    iid = generate_iid(GenConfig(3, 2, 1, 5, Mode.IID))
    assert set(iid.tiles) == {Tile(0, 0, 0, 0)} and solve(iid, limit=1).solvable


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5), st.integers(1, 5), st.integers(1, 12), st.integers(0, MASK64),
       st.sampled_from(list(Mode)), st.sampled_from(list(Boundary)))
def test_labels_in_alphabet_and_deterministic(w, h, L, seed, mode, boundary):
    cfg = GenConfig(w, h, L, seed, mode, boundary)
    inst = generate(cfg)
    labels = [x for t in inst.tiles for x in t]
    assert not any(isinstance(x, Sentinel) for x in labels)
    assert all(0 <= x < L for x in labels)
    assert serialize_instance(generate(cfg)) == serialize_instance(inst)


def test_shredded_3x3_always_solvable():
    for seed in range(100):
        assert solve(generate_shredded(GenConfig(3, 3, 10, seed)), limit=1).solvable


def test_toroidal_shredded_solvable():
    for seed in range(30):
        inst = generate_shredded(GenConfig(3, 3, 3, seed, boundary=Boundary.TOROIDAL))
        assert solve(inst, limit=1).solvable


def test_unique_small_cases():
    inst = generate_unique(GenConfig(1, 1, 8, 3), budget=1)
    assert solve(inst, limit=2).count == 1
    assert generate_unique(GenConfig(2, 2, 1, 3), budget=1).tiles == (Tile(0, 0, 0, 0),) * 4


def test_unique_3x3():
    inst = generate_unique(GenConfig(3, 3, 10, 77), budget=100)
    assert solve(inst, limit=2).count == 1
    assert brute_force_count(inst) == 1


def test_unique_budget_exhausted():
    # Two labels on a 3x3 board: almost never unique within 2 tries.
    with pytest.raises(GenerationError) as info:
        generate_unique(GenConfig(3, 3, 2, 0), budget=2)
    assert info.value.attempts == 2
    with pytest.raises(ValueError):
        generate_unique(GenConfig(3, 3, 2, 0), budget=0)


def test_experiment_trivial_cell():
    (row,) = run_experiment([Mode.SHREDDED], [(1, 1)], [1], 1, 0)
    assert (row.solvable_frac, row.unique_frac, row.trials) == (1.0, 1.0, 1)


def test_experiment_rows_and_csv():
    rows = run_experiment(["shredded", "iid"], [(2, 2), (3, 2)], [1, 4], 12, 5)
    assert len(rows) == 8
    assert [(r.mode.value, r.width, r.height, r.alphabet) for r in rows][:3] == [
        ("shredded", 2, 2, 1), ("shredded", 2, 2, 4), ("shredded", 3, 2, 1)]
    for r in rows:
        assert 0.0 <= r.unique_frac <= r.solvable_frac <= 1.0
        if r.mode is Mode.SHREDDED:
            assert r.solvable_frac == 1.0
    text = experiment_csv(rows)
    lines = text.splitlines()
    assert lines[0] == ",".join(CSV_HEADER)
    assert lines[0] == "mode,width,height,alphabet,seed,trials,solvable_frac,unique_frac,mean_nodes,mean_micros"
    assert len(lines) == 9
    assert all(len(line.split(",")[6]) == len("1.000000") for line in lines[1:])


def test_experiment_parallel_matches_serial():
    args = (["iid", "shredded"], [(2, 2)], [2, 3], 16, 123)
    serial = run_experiment(*args)
    parallel = run_experiment(*args, workers=2)
    strip = lambda rows: [r.csv_fields()[:-1] for r in rows]  # noqa: E731
    assert strip(serial) == strip(parallel)


def test_iid_large_alphabet_rarely_solvable():
    (row,) = run_experiment(["iid"], [(2, 2)], [50], 300, 9)
    # Four independent interior matches each with chance 1/50.
    assert row.solvable_frac < 0.05


def test_experiment_rejects_zero_trials():
    with pytest.raises(ValueError):
        run_experiment(["iid"], [(1, 1)], [1], 0, 0)
