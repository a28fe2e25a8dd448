import numpy as np
import pytest
from hypothesis import given, strategies as st

from navbot.corpus import logging_jitter
from navbot.dataset import (CollectError, Dataset, Episode, LabeledSample, ParseError, SplitError, collect,
                            detect_oscillation, emit_csv, parse_csv, read_csv, relabel, repair, split,
                            write_csv)
from navbot.reflex import Thresholds
from navbot.scenarios import build_scenario
from navbot.types import Command, ScanVector
from navbot.world import Pose, RobotSpec, WorldSpec

from conftest import VENDORED_DATASET

L, R, F, B, S = Command.LEFT, Command.RIGHT, Command.FRONT, Command.BACK, Command.STOP
two_dp = st.integers(500, 45000).map(lambda v: v / 100)
samples = st.builds(LabeledSample, st.builds(ScanVector, two_dp, two_dp, two_dp, two_dp), st.sampled_from(list(Command)))
datasets = st.lists(samples, max_size=40).map(lambda s: Dataset(tuple(s)))
turn_seqs = st.lists(st.sampled_from([L, R, F]), max_size=60)


def ds_of(labels):
    return Dataset(tuple(LabeledSample(ScanVector(10.0 + i, 20, 30, 40), c) for i, c in enumerate(labels)))


def test_parse_logged_row():
    ds = parse_csv(b"Front,Back,Left,Right,Command\n128.44,82.77,81.02,74.99,front\n")
    assert ds.samples == (LabeledSample(ScanVector(128.44, 82.77, 81.02, 74.99), Command.FRONT),)


@pytest.mark.parametrize("data,kind,line", [
    (b"A,B,C,D,E\n1,2,3,4,front\n", "header", 1),
    (b"Front,Back,Left,Right,Command\n10,10,10,10,fly\n", "row", 2),
    (b"Front,Back,Left,Right,Command\n10,10,10,10,front\n10,10,10,front\n", "row", 3),
    (b"Front,Back,Left,Right,Command\n10,10,10,999,front\n", "row", 2),
    (b"Front,Back,Left,Right,Command\n10,x,10,10,front\n", "row", 2),
])
def test_parse_errors(data, kind, line):
    with pytest.raises(ParseError) as err:
        parse_csv(data)
    assert err.value.kind == kind
    if kind == "row":
        assert err.value.line_no == line


def test_header_only_is_empty():
    assert len(parse_csv(b"Front,Back,Left,Right,Command\n")) == 0


@given(datasets)
def test_csv_round_trip(ds):
    assert parse_csv(emit_csv(ds)) == ds


def test_csv_file_round_trip(tmp_path):
    ds = ds_of([F, L, R, B, S])
    write_csv(tmp_path / "d.csv", ds)
    assert read_csv(tmp_path / "d.csv") == ds


def test_collect_one_sample_per_tick():
    sc = build_scenario("course", 3)
    ds = collect(sc.world, RobotSpec(), Thresholds(), 1000, 5, sc.start)
    assert len(ds) == 1000
    assert set(ds.labels()) <= set(Command)
    again = collect(sc.world, RobotSpec(), Thresholds(), 1000, 5, sc.start)
    assert emit_csv(ds) == emit_csv(again)


def test_collect_reports_collision_with_partial_data():
    # a post inside the right sensor's blind spot, hit while driving forward
    w = WorldSpec((0, 0, 400, 400), (((60, 190), (70, 190), (70, 194), (60, 194)),))
    with pytest.raises(CollectError) as err:
        collect(w, RobotSpec(), Thresholds(), 200, 0, Pose(20, 200, 0), noise_sigma=0.0)
    assert len(err.value.partial) == err.value.tick + 1


def test_detect_examples():
    assert detect_oscillation([L, R, L, R, L, R]) == [Episode(0, 5)]
    assert detect_oscillation([F, F, F, F]) == []
    assert detect_oscillation([L, R, F, L, R, L, R, L]) == [Episode(3, 7)]


def test_slow_turn_sequence_is_not_oscillation():
    # three switches spread over more than eight samples
    assert detect_oscillation([L, L, L, L, R, R, R, R, L, L, L, L, R]) == []


def test_relabel_examples():
    ds = ds_of([L, R, L, R, L, R])
    assert relabel(ds, [Episode(0, 5)]).labels() == [L] * 6
    assert relabel(ds, []) == ds
    fixed, changed = repair(ds)
    assert changed == 3
    assert fixed.labels() == [L] * 6


@given(turn_seqs)
def test_repair_removes_symptom_and_is_idempotent(labels):
    fixed, _ = repair(ds_of(labels))
    assert detect_oscillation(fixed.labels()) == []
    again, changed = repair(fixed)
    assert again == fixed and changed == 0


@given(turn_seqs)
def test_changed_count_matches_episode_samples(labels):
    ds = ds_of(labels)
    eps = detect_oscillation(labels)
    expected = sum(labels[k] != labels[e.start_index] for e in eps for k in range(e.start_index, e.end_index + 1))
    assert repair(ds)[1] == expected
    assert all(0 <= e.start_index <= e.end_index < len(labels) for e in eps)


def test_split_sizes_and_determinism():
    labels = [F] * 60 + [L] * 20 + [R] * 12 + [B] * 8
    ds = ds_of(labels)
    train, test = split(ds, 0.75, seed=42)
    assert (len(train), len(test)) == (75, 25)
    for c in set(labels):
        assert abs(train.labels().count(c) - 0.75 * labels.count(c)) <= 1
    assert split(ds, 0.75, seed=42) == (train, test)
    assert split(ds, 0.75, seed=43) != (train, test)


def test_split_too_few():
    with pytest.raises(SplitError):
        split(ds_of([F, F, F, L]))


@given(st.lists(st.sampled_from([F, L, R, B]), min_size=8, max_size=80), st.integers(0, 99))
def test_split_partitions_input(labels, seed):
    ds = ds_of(labels)
    try:
        train, test = split(ds, 0.75, seed)
    except SplitError:
        assert any(0 < labels.count(c) < 2 for c in set(labels))
        return
    assert len(train) + len(test) == len(ds)
    assert sorted(train.samples + test.samples) == sorted(ds.samples)


def test_vendored_dataset_regenerates_byte_identical(corpus):
    with open(VENDORED_DATASET, "rb") as fh:
        vendored = fh.read()
    assert emit_csv(logging_jitter(corpus, 0.5, 0)) == vendored
    ds = parse_csv(vendored)
    assert len(ds) >= 5000
    assert set(ds.labels()) == {F, B, L, R}


def test_logging_jitter_keeps_labels_and_envelope(corpus):
    j = logging_jitter(corpus, 2.0, 1)
    assert np.array_equal(j.y, corpus.y)
    assert all(s.scan.in_envelope() for s in j)
