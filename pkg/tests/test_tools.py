import json

import numpy as np
import pandas as pd

from spherekit import tools


class TestThreads:
    def test_default(self, monkeypatch):
        monkeypatch.delenv(tools.THREADS_VARIABLE, raising=False)
        assert tools.thread_count() == 1

    def test_from_environment(self, monkeypatch):
        monkeypatch.setenv(tools.THREADS_VARIABLE, "3")
        assert tools.thread_count() == 3

    def test_invalid_value(self, monkeypatch, caplog):
        monkeypatch.setenv(tools.THREADS_VARIABLE, "zero")
        assert tools.thread_count() == 1
        assert "Ignoring" in caplog.text

    def test_parallel_map_keeps_order(self, monkeypatch):
        monkeypatch.setenv(tools.THREADS_VARIABLE, "4")
        assert tools.parallel_map(lambda x: x * x, range(20)) == [
            x * x for x in range(20)
        ]

    def test_parallel_map_empty(self, monkeypatch):
        monkeypatch.setenv(tools.THREADS_VARIABLE, "4")
        assert tools.parallel_map(abs, []) == []


class TestOutput:
    def test_plain(self):
        data = {"a": np.arange(2), "b": np.float64(-np.inf), 3: np.bool_(1)}
        assert tools.plain(data) == {"a": [0, 1], "b": "-inf", "3": True}

    def test_json_is_sorted(self):
        text = tools.to_json({"z": float("nan"), "a": 0.1})
        assert list(json.loads(text)) == ["a", "z"]
        assert json.loads(text)["z"] == "nan"

    def test_csv_precision(self):
        frame = pd.DataFrame({"a": [0.1], "b": [1 / 3]})
        lines = tools.frame_to_csv(frame).splitlines()
        assert lines == ["a,b", "0.10000000000000001,0.33333333333333331"]

    def test_mapping_to_text(self):
        text = tools.mapping_to_text(
            {"bound": 2 / 3, "nodes": [0.5, 1.0], "potential": {"c": 1.0}}
        )
        assert "0.666666666667" in text
        assert "0.5, 1" in text
        assert "potential.c" in text

    def test_mapping_to_frame(self):
        frame = tools.mapping_to_frame({"b": {"c": [1, 2]}, "a": 1.0})
        expected = pd.DataFrame(
            [("a", "1"), ("b.c", "1, 2")], columns=["field", "value"]
        )
        pd.testing.assert_frame_equal(frame, expected)
