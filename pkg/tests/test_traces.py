import json

import numpy as np
import pytest

from phaseswitch.traces import (TraceSeries, read_traces, traces_to_csv,
                                traces_to_json, write_traces)


def test_shape_validation():
    with pytest.raises(ValueError):
        TraceSeries([0, 1], [1])
    with pytest.raises(ValueError):
        TraceSeries([0, 1], [1, 2], sigma_y=[1])


def test_csv_round_trip(tmp_path):
    a = TraceSeries([0.0, 0.1], [1.0, 1 / 3], tag="g2_A", x_unit="us",
                    sigma_y=[0.1, 0.2], flags=[False, True])
    b = TraceSeries([1.0], [2.5], tag="other")
    path = write_traces([a, b], tmp_path / "t.csv")
    got = read_traces(path)
    assert [t.tag for t in got] == ["g2_A", "other"]
    assert np.array_equal(got[0].y, a.y)
    assert got[0].flags.tolist() == [False, True]
    assert got[0].sigma_y.tolist() == [0.1, 0.2]
    assert got[1].sigma_y is None


def test_csv_is_deterministic():
    tr = TraceSeries(np.linspace(0, 1, 5), np.sin(np.linspace(0, 1, 5)))
    assert traces_to_csv([tr]) == traces_to_csv([tr])
    assert traces_to_csv([tr]).splitlines()[0] == \
        "tag,x,y,sigma_y,x_unit,y_unit,flag"


def test_json_export():
    tr = TraceSeries([0.0], [1.0], tag="t", y_unit="rad")
    payload = json.loads(traces_to_json([tr]))
    assert payload[0]["tag"] == "t" and payload[0]["y"] == [1.0]
