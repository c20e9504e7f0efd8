import json

import numpy as np
import pytest

from bumplab import GridFunction, constant, gaussian, make_grid
from bumplab.io import (
    read_grid_function_csv,
    write_curve_csv,
    write_grid_function_csv,
    write_json,
)


def test_grid_function_csv_roundtrip(tmp_path):
    g = make_grid(2.0, 64)
    rng = np.random.default_rng(1)
    f = GridFunction(g, rng.standard_normal(64))
    path = tmp_path / "f.csv"
    write_grid_function_csv(f, path)
    back = read_grid_function_csv(path)
    assert back.grid == g
    assert np.array_equal(back.values, f.values)  # 17 significant digits round-trip


def test_grid_function_csv_format(tmp_path):
    g = make_grid(1.0, 4)
    path = tmp_path / "f.csv"
    write_grid_function_csv(constant(g, 1.0 / 3.0), path)
    lines = path.read_text().splitlines()
    assert lines[0] == "x,value"
    assert len(lines) == 5
    assert lines[1].split(",") == ["-0.75", "0.33333333333333331"]


def test_curve_csv(tmp_path):
    path = tmp_path / "c.csv"
    write_curve_csv(path, ("N", "tail"), [(1.0, 0.25), (2.0, 0.125)])
    assert path.read_text() == "N,tail\n1,0.25\n2,0.125\n"


def test_write_json_deterministic(tmp_path):
    obj = {"b": 1.0 / 3.0, "a": [1, 2], "nested": {"z": 0.1, "y": None}}
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    write_json(p1, obj)
    write_json(p2, json.loads(p1.read_text()))
    assert p1.read_bytes() == p2.read_bytes()


def test_read_rejects_malformed(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("x,value\n0.0,1.0\n")
    with pytest.raises(ValueError):
        read_grid_function_csv(path)
    path.write_text("wrong,header\n0.0,1.0\n")
    with pytest.raises(ValueError):
        read_grid_function_csv(path)


def test_atomic_write_leaves_no_temp_files(tmp_path):
    g = make_grid(1.0, 8)
    write_grid_function_csv(gaussian(g, 0.0, 0.5), tmp_path / "w.csv")
    write_json(tmp_path / "w.json", {"ok": True})
    leftovers = [p for p in tmp_path.iterdir() if p.suffix == ".tmp"]
    assert leftovers == []
