import math

import pytest
from hypothesis import given, strategies as st

from navbot.serial_link import (FIELD_COUNT, MALFORMED, RANGE, UNKNOWN_COMMAND, DelayChannel, FrameError,
                                channel_poll, channel_send, decode_command, decode_scan, encode_command,
                                encode_scan)
from navbot.types import Command, ScanVector

FIG4 = ScanVector(128.44, 82.77, 81.02, 74.99)


def test_encode_examples():
    assert encode_scan(FIG4) == b"128.44,82.77,81.02,74.99\n"
    assert encode_scan(ScanVector(5, 5, 5, 5)) == b"5.00,5.00,5.00,5.00\n"
    assert encode_scan(ScanVector(450, 450, 450, 450)) == b"450.00,450.00,450.00,450.00\n"


def test_decode_examples():
    assert decode_scan(b"128.44,82.77,81.02,74.99\n") == FIG4


@pytest.mark.parametrize("frame,kind", [
    (b"abc\n", MALFORMED),
    (b"1.00,2.00,3.00,4.00", MALFORMED),
    (b"1.00,2.00,3.00\n", FIELD_COUNT),
    (b"10,10,10,10,10\n", FIELD_COUNT),
    (b"4.99,10,10,10\n", RANGE),
    (b"10,10,10,450.01\n", RANGE),
    (b"nan,10,10,10\n", MALFORMED),
    (b"10,,10,10\n", MALFORMED),
])
def test_decode_errors(frame, kind):
    with pytest.raises(FrameError) as err:
        decode_scan(frame)
    assert err.value.kind == kind


def test_command_bytes():
    assert encode_command(Command.FRONT) == b"f"
    assert encode_command(Command.STOP) == b"s"
    assert [decode_command(encode_command(c)) for c in Command] == list(Command)
    with pytest.raises(FrameError) as err:
        decode_command(b"x")
    assert err.value.kind == UNKNOWN_COMMAND


def test_channel_delay_two():
    ch = DelayChannel(2)
    channel_send(ch, 0, "m")
    assert channel_poll(ch, 1) is None
    assert channel_poll(ch, 2) == "m"


def test_channel_delay_zero_same_tick():
    ch = DelayChannel(0)
    channel_send(ch, 5, "m")
    assert channel_poll(ch, 5) == "m"


def test_channel_fifo_same_tick():
    ch = DelayChannel(1)
    ch.send(0, "a")
    ch.send(0, "b")
    assert [ch.poll(1), ch.poll(1), ch.poll(1)] == ["a", "b", None]


def test_channel_rejects_time_travel():
    ch = DelayChannel(1)
    ch.send(3, "a")
    with pytest.raises(ValueError):
        ch.poll(2)
    with pytest.raises(ValueError):
        DelayChannel(-1)


two_dp = st.integers(500, 45000).map(lambda v: v / 100)
in_range = st.floats(5.0, 450.0)


@given(st.builds(ScanVector, two_dp, two_dp, two_dp, two_dp))
def test_two_decimal_scans_round_trip_exactly(scan):
    assert decode_scan(encode_scan(scan)) == scan


@given(st.builds(ScanVector, in_range, in_range, in_range, in_range))
def test_round_trip_quantization_bound(scan):
    back = decode_scan(encode_scan(scan))
    assert all(abs(a - b) <= 0.005 + 1e-9 for a, b in zip(scan, back))


@given(st.binary(max_size=64))
def test_decode_scan_total_on_bytes(data):
    try:
        s = decode_scan(data)
    except FrameError:
        return
    assert len(s) == 4 and all(math.isfinite(v) for v in s)


@given(st.binary(max_size=4))
def test_decode_command_total_on_bytes(data):
    try:
        assert isinstance(decode_command(data), Command)
    except FrameError:
        pass


schedules = st.lists(st.tuples(st.integers(0, 3), st.booleans()), min_size=1, max_size=80)


@given(st.integers(0, 5), schedules)
def test_channel_conservation_and_fifo(delay, steps):
    """Random interleavings of sends and polls; every message arrives once, in
    order, never before send_tick + delay, and the first poll after that
    moment (with nothing older queued) gets it."""
    ch = DelayChannel(delay)
    tick, sent, got = 0, [], []
    for advance, do_send in steps:
        tick += advance
        if do_send:
            sent.append((len(sent), tick))
            ch.send(tick, sent[-1])
        msg = ch.poll(tick)
        if msg is not None:
            got.append((msg, tick))
    while len(ch):
        tick += 1
        msg = ch.poll(tick)
        if msg is not None:
            got.append((msg, tick))
    assert [m for m, _ in got] == sent
    for (idx, sent_at), at in got:
        assert at >= sent_at + delay
    assert len({m for m, _ in got}) == len(sent)


@given(st.integers(0, 5), st.lists(st.integers(0, 4), min_size=1, max_size=40))
def test_channel_delivers_exactly_at_due_tick(delay, gaps):
    send_ticks = []
    tick = 0
    for g in gaps:
        tick += g
        send_ticks.append(tick)
    ch = DelayChannel(delay)
    got = {}
    for t in range(send_ticks[-1] + delay + 1):
        for i, s in enumerate(send_ticks):
            if s == t:
                ch.send(t, i)
        while (m := ch.poll(t)) is not None:
            got[m] = t
    # polling every tick, each message surfaces exactly at send + delay
    assert got == {i: s + delay for i, s in enumerate(send_ticks)}
