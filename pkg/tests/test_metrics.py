import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from numamig import (
    PerfRecord,
    PerfSample,
    ScoreParams,
    ThreadId,
    TraceRow,
    compute_p,
    frame_average,
    normalized_p,
    total_performance,
)
from numamig.metrics import read_trace, write_trace

positive = st.floats(1e-3, 1e3)


def test_compute_p_examples():
    assert compute_p(PerfSample(1, 1, 1), ScoreParams(2, 3, 4)) == 1.0
    assert compute_p(PerfSample(2, 3, 6), ScoreParams(1, 1, 1)) == pytest.approx(1.0)
    assert compute_p(PerfSample(2, 2, 4), ScoreParams(1, 2, 1)) == pytest.approx(2.0)


def test_compute_p_rejects_nonpositive():
    class Bad:
        gips, instb, latency = 1.0, 0.0, 1.0

    with pytest.raises(ValueError):
        compute_p(Bad(), ScoreParams())


def test_score_params_validation():
    with pytest.raises(ValueError):
        ScoreParams(alpha=-1.0)
    with pytest.raises(ValueError):
        ScoreParams(beta=float("nan"))
    with pytest.raises(ValueError):
        ScoreParams(gamma=float("inf"))


@given(gips=positive, instb=positive, latency=positive)
def test_zero_exponents_collapse_to_one(gips, instb, latency):
    assert compute_p(PerfSample(gips, instb, latency), ScoreParams(0, 0, 0)) == 1.0


def test_record_replace_semantics():
    record = PerfRecord()
    t = ThreadId(1, 0)
    record.update(t, 0, 2.4)
    record.update(t, 0, 3.0)
    assert record.get(t, 0) == 3.0
    assert record.get(t, 1) is None
    record.update(t, 2, 6.3)
    assert record.last_node(t) == 2
    assert record.current(t) == 6.3
    assert record.get(t, 0) == 3.0  # old node kept as history
    with pytest.raises(ValueError):
        record.update(t, 0, 0.0)


def test_record_keys_never_shrink():
    record = PerfRecord()
    rng = np.random.default_rng(3)
    seen = set()
    for _ in range(300):
        t = ThreadId(int(rng.integers(1, 4)), int(rng.integers(0, 3)))
        node = int(rng.integers(0, 3))
        record.update(t, node, float(rng.uniform(0.1, 5.0)))
        seen.add((t, node))
        assert all(record.get(th, n) is not None for th, n in seen)
    assert len(record) == len(seen)


def test_threads_of_sorted():
    record = PerfRecord()
    record.update(ThreadId(1, 1), 0, 1.0)
    record.update(ThreadId(1, 0), 0, 1.0)
    record.update(ThreadId(2, 0), 0, 1.0)
    assert record.threads_of(1) == [ThreadId(1, 0), ThreadId(1, 1)]


def test_normalized_p_worked_example(worked):
    for pid in (1, 2, 3):
        phat = normalized_p(worked.record, pid)
        for thread, value in phat.items():
            key = f"{thread.pid}.{thread.index}"
            assert value == pytest.approx(worked.expected_phat[key], abs=0.005)
        assert sum(phat.values()) / len(phat) == pytest.approx(1.0, abs=1e-9)


def test_normalized_p_single_thread_is_one():
    record = PerfRecord()
    record.update(ThreadId(9, 0), 1, 123.4)
    assert normalized_p(record, 9) == {ThreadId(9, 0): 1.0}


def test_normalized_p_empty_process_errors():
    with pytest.raises(ValueError):
        normalized_p(PerfRecord(), 1)


def test_normalized_p_thread_filter():
    record = PerfRecord()
    a, b, c = ThreadId(1, 0), ThreadId(1, 1), ThreadId(1, 2)
    for t, p in ((a, 1.0), (b, 3.0), (c, 100.0)):
        record.update(t, 0, p)
    phat = normalized_p(record, 1, threads=[a, b])
    assert c not in phat
    assert phat[a] == pytest.approx(0.5)
    assert phat[b] == pytest.approx(1.5)


@given(
    values=st.lists(positive, min_size=1, max_size=8),
    scale=st.floats(1e-3, 1e3),
)
def test_normalization_mean_one_and_scale_invariant(values, scale):
    plain, scaled = PerfRecord(), PerfRecord()
    for i, v in enumerate(values):
        plain.update(ThreadId(5, i), 0, v)
        scaled.update(ThreadId(5, i), 0, v * scale)
    a = normalized_p(plain, 5)
    b = normalized_p(scaled, 5)
    assert sum(a.values()) / len(a) == pytest.approx(1.0, abs=1e-9)
    for t in a:
        assert b[t] == pytest.approx(a[t], rel=1e-9)


def test_total_performance_worked_example(worked):
    assert total_performance(worked.record) == pytest.approx(worked.expected_pt)


def test_total_performance_tracks_updates():
    record = PerfRecord()
    t, u = ThreadId(1, 0), ThreadId(2, 0)
    record.update(t, 0, 2.0)
    record.update(u, 1, 5.0)
    before = total_performance(record)
    record.update(t, 0, 4.0)
    assert total_performance(record) == pytest.approx(before + 2.0)
    assert total_performance(record, threads=[u]) == pytest.approx(5.0)


def _rows(n, pid=1, tid=0, core=0):
    return [
        TraceRow(
            interval=i,
            time_ms=float(i),
            pid=pid,
            tid=tid,
            core=core,
            node=0,
            gips=float(i + 1),
            instb=2.0,
            latency=200.0,
            p=float(i + 1),
            p_hat=1.0,
        )
        for i in range(n)
    ]


def test_frame_average_window_one_is_identity():
    rows = _rows(5)
    assert frame_average(rows, 1) == rows


def test_frame_average_blocks():
    rows = _rows(100)
    out = frame_average(rows, 50)
    assert len(out) == 2
    assert out[0].p == pytest.approx(25.5)
    assert out[1].p == pytest.approx(75.5)
    assert out[0].interval == 0 and out[1].interval == 50
    assert out[0].time_ms == 0.0 and out[1].time_ms == 50.0


def test_frame_average_constant_series():
    rows = [r for r in _rows(60)]
    for r in rows:
        r.gips = 3.0
        r.p = 3.0
    out = frame_average(rows, 50)
    assert all(r.gips == pytest.approx(3.0) for r in out)
    assert len(out) == 2  # short tail averaged on its own


def test_frame_average_keeps_events_and_final_core():
    rows = _rows(4)
    rows[1].event = "migrate"
    rows[2].event = "rollback"
    rows[3].core = 7
    out = frame_average(rows, 4)
    assert out[0].event == "migrate+rollback"
    assert out[0].core == 7


def test_frame_average_window_zero_rejected():
    with pytest.raises(ValueError):
        frame_average(_rows(3), 0)


def test_frame_average_groups_threads_separately():
    rows = _rows(4, pid=1, tid=0) + _rows(4, pid=1, tid=1) + _rows(4, pid=2, tid=0)
    out = frame_average(rows, 4)
    assert len(out) == 3
    assert {(r.pid, r.tid) for r in out} == {(1, 0), (1, 1), (2, 0)}


def test_trace_round_trip(tmp_path):
    rows = _rows(6)
    rows[2].event = "swap"
    path = tmp_path / "trace.csv"
    write_trace(path, rows)
    assert read_trace(path) == rows
    # header comment tolerated on read
    write_trace(path, rows, comment="averaged")
    assert read_trace(path) == rows
    first = path.read_text()
    write_trace(path, rows, comment="averaged")
    assert path.read_text() == first  # byte stable
