from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from poolcast.core import (
    Dataset,
    TimeSeries,
    load_dataset,
    save_dataset,
    split_fixed_origin,
)
from poolcast.errors import (
    DatasetError,
    HorizonTooLarge,
    MalformedRow,
    NonFiniteValue,
)


def test_wide_csv_row_maps_fields(tmp_path):
    p = tmp_path / "d.csv"
    p.write_text("s1,4,2,,1.0,2.0,3.0,4.0,5.0,6.0,7.0,8.0,9.0,10.0\n")
    ds = load_dataset(p, "wide-csv")
    s = ds.series[0]
    assert s.id == "s1"
    assert s.period_s == 4
    assert s.horizon_h == 2
    assert s.category is None
    assert s.n == 10
    np.testing.assert_array_equal(s.values, np.arange(1.0, 11.0))


def test_missing_horizon_defaults_by_frequency(tmp_path):
    rows = [
        "y1,1,,A," + ",".join(str(v) for v in range(1, 16)),
        "q1,4,,B," + ",".join(str(v) for v in range(1, 21)),
        "m1,12,,C," + ",".join(str(v) for v in range(1, 61)),
    ]
    p = tmp_path / "d.csv"
    p.write_text("\n".join(rows) + "\n")
    ds = load_dataset(p, "wide-csv")
    horizons = {s.id: s.horizon_h for s in ds}
    assert horizons == {"y1": 6, "q1": 8, "m1": 18}


def test_missing_horizon_unknown_frequency_is_error(tmp_path):
    p = tmp_path / "d.csv"
    p.write_text("x1,5,,A," + ",".join(str(v) for v in range(1, 40)) + "\n")
    with pytest.raises(DatasetError):
        load_dataset(p, "wide-csv")


def test_nan_value_rejected(tmp_path):
    p = tmp_path / "d.csv"
    p.write_text("s1,1,2,,1.0,NaN,3.0,4.0,5.0,6.0\n")
    with pytest.raises(NonFiniteValue):
        load_dataset(p, "wide-csv")


def test_malformed_row_reports_line_and_offset(tmp_path):
    p = tmp_path / "d.csv"
    first = "ok,1,2,,1,2,3,4,5,6\n"
    p.write_text(first + "bad,notanint,2,,1,2,3\n")
    with pytest.raises(MalformedRow) as exc:
        load_dataset(p, "wide-csv")
    assert exc.value.line_number == 2
    assert exc.value.byte_offset == len(first.encode())


def test_horizon_too_large_rejected(tmp_path):
    p = tmp_path / "d.csv"
    # N=8, h=6, s=1 -> need N >= 6 + 3 = 9
    p.write_text("s1,1,6,,1,2,3,4,5,6,7,8\n")
    with pytest.raises(HorizonTooLarge):
        load_dataset(p, "wide-csv")


def test_trailing_empty_cells_ignored(tmp_path):
    p = tmp_path / "d.csv"
    p.write_text("s1,1,2,,1,2,3,4,5,6,,,\n")
    ds = load_dataset(p, "wide-csv")
    assert ds.series[0].n == 6


def test_duplicate_ids_rejected():
    mk = lambda i: TimeSeries(id=i, period_s=1, values=np.arange(1.0, 11.0), horizon_h=2)
    with pytest.raises(DatasetError):
        Dataset(series=(mk("a"), mk("a")))


def test_split_fixed_origin_basic():
    s = TimeSeries(id="s", period_s=1, values=np.arange(1.0, 11.0), horizon_h=2)
    sp = split_fixed_origin(s)
    np.testing.assert_array_equal(sp.train, np.arange(1.0, 9.0))
    np.testing.assert_array_equal(sp.test, np.array([9.0, 10.0]))
    assert sp.origin == 8


def test_split_boundary_minimal_train():
    # N = h + max(3, 2s): train has exactly max(3, 2s) points
    s = TimeSeries(id="s", period_s=2, values=np.arange(1.0, 10.0), horizon_h=5)
    sp = split_fixed_origin(s)
    assert len(sp.train) == 4
    assert len(sp.test) == 5


@settings(max_examples=50, deadline=None)
@given(
    n_extra=st.integers(min_value=0, max_value=30),
    h=st.integers(min_value=1, max_value=8),
    s=st.sampled_from([1, 4, 12]),
    data=st.data(),
)
def test_split_roundtrip_property(n_extra, h, s, data):
    n = h + max(3, 2 * s) + n_extra
    values = data.draw(
        st.lists(
            st.floats(min_value=-1e6, max_value=1e6, allow_nan=False),
            min_size=n, max_size=n,
        )
    )
    ts = TimeSeries(id="x", period_s=s, values=np.asarray(values), horizon_h=h)
    sp = split_fixed_origin(ts)
    np.testing.assert_array_equal(np.concatenate([sp.train, sp.test]), ts.values)
    assert len(sp.test) == h


@pytest.mark.parametrize("fmt", ["wide-csv", "jsonl"])
def test_save_load_roundtrip_bit_exact(tmp_path, fmt):
    rng = np.random.default_rng(0)
    series = []
    for i in range(5):
        vals = rng.standard_normal(30) * 1e4 + rng.uniform(-1, 1)
        series.append(TimeSeries(id=f"s{i}", period_s=4, values=vals, horizon_h=4,
                                 category="CAT" if i % 2 else None))
    ds = Dataset(series=tuple(series), frequency_label="quarterly")
    p = tmp_path / ("d.csv" if fmt == "wide-csv" else "d.jsonl")
    save_dataset(ds, p, fmt)
    ds2 = load_dataset(p, fmt)
    assert [s.id for s in ds2] == [s.id for s in ds]
    for a, b in zip(ds, ds2):
        np.testing.assert_array_equal(a.values, b.values)  # bit-exact
        assert a.period_s == b.period_s
        assert a.horizon_h == b.horizon_h
        assert a.category == b.category
    # second roundtrip is byte-stable
    p2 = tmp_path / ("d2.csv" if fmt == "wide-csv" else "d2.jsonl")
    save_dataset(ds2, p2, fmt)
    assert p.read_bytes() == p2.read_bytes()


def test_values_are_immutable():
    s = TimeSeries(id="s", period_s=1, values=np.arange(1.0, 11.0), horizon_h=2)
    with pytest.raises(ValueError):
        s.values[0] = 99.0
