import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from truncfourier.config import DEFAULT_TOLERANCES, ConfigError, RunConfig, ZGrid, load_config
from truncfourier.formats import (
    atomic_write,
    csv_text,
    fmt,
    read_halfline,
    read_model_element,
    sidecar_path,
    write_halfline,
    write_model_element,
)
from truncfourier.halfline import HalfLineFunction, LogGrid, MuGrid
from truncfourier.unitary import ModelElement


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_fmt_roundtrips_exactly(v):
    assert float(fmt(v)) == v


def test_csv_text_layout():
    text = csv_text(("a", "b"), [(1.0, 0.1)], comments=["note"])
    assert text == "# note\na,b\n1,0.10000000000000001\n"


def test_atomic_write_leaves_no_temp(tmp_path):
    target = tmp_path / "sub" / "f.txt"
    atomic_write(target, "hello\n")
    atomic_write(target, "again\n")
    assert target.read_text() == "again\n"
    assert [p.name for p in target.parent.iterdir()] == ["f.txt"]


def test_halfline_roundtrip(tmp_path, rng):
    g = LogGrid(-5.0, 5.0, 64)
    x = HalfLineFunction(g, rng.normal(size=64) + 1j * rng.normal(size=64))
    path = tmp_path / "x.csv"
    write_halfline(x, path)
    assert json.loads(sidecar_path(path).read_text())["n"] == 64
    y = read_halfline(path)
    assert y.grid == g
    assert np.array_equal(y.values, x.values)


def test_model_element_roundtrip(tmp_path, rng):
    mg = MuGrid(3.0, 40)
    phi = ModelElement(mg, rng.normal(size=40) + 1j, rng.normal(size=40) - 2j)
    path = tmp_path / "phi.csv"
    write_model_element(phi, path)
    back = read_model_element(path)
    assert np.array_equal(back.plus, phi.plus) and np.array_equal(back.minus, phi.minus)


def test_reader_errors(tmp_path):
    g = LogGrid(-1.0, 1.0, 8)
    path = tmp_path / "x.csv"
    write_halfline(HalfLineFunction(g, np.ones(8, complex)), path)
    sidecar_path(path).write_text(json.dumps(LogGrid(-1.0, 1.0, 9).to_dict()))
    with pytest.raises(ValueError, match="rows"):
        read_halfline(path)
    sidecar_path(path).write_text(json.dumps(LogGrid(-2.0, 1.0, 8).to_dict()))
    with pytest.raises(ValueError, match="xi column"):
        read_halfline(path)
    sidecar_path(path).unlink()
    with pytest.raises(ValueError, match="sidecar"):
        read_halfline(path)
    bad = tmp_path / "bad.csv"
    bad.write_text("mu,re\n1,2\n")
    sidecar_path(bad).write_text(json.dumps(g.to_dict()))
    with pytest.raises(ValueError, match="header"):
        read_halfline(bad)


def test_default_config_is_valid():
    cfg = load_config()
    assert cfg == RunConfig()
    assert cfg.log_grid.n == cfg.n and cfg.mu_grid.m == cfg.m
    assert set(cfg.tolerances) == set(DEFAULT_TOLERANCES)
    json.dumps(cfg.to_dict())


def test_zgrid_points_order():
    pts = ZGrid(0.0, 1.0, 0.0, 2.0, 3).points()
    assert pts[:3] == [0j, 0.5 + 0j, 1 + 0j]
    assert pts[-1] == 1 + 2j and len(pts) == 9


def test_load_config_file(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"n": 512, "amplitudes": [1, 3], "tolerances": {"parseval": 1e-4},
                                "z_grid": {"steps": 5}}))
    cfg = load_config(path)
    assert cfg.n == 512 and cfg.amplitudes == (1.0, 3.0)
    assert cfg.tol("parseval") == 1e-4 and cfg.tol("roundtrip") == DEFAULT_TOLERANCES["roundtrip"]
    assert cfg.z_grid.steps == 5


@pytest.mark.parametrize("raw", [
    {"bogus": 1},
    {"n": 1},
    {"eta_min": 3.0, "eta_max": 1.0},
    {"mu_max": -1.0},
    {"amplitudes": [0.0]},
    {"amplitudes": []},
    {"deltas": [0.1, 0.2]},
    {"tolerances": {"nope": 1.0}},
    {"tolerances": {"parseval": -1.0}},
    {"z_grid": {"steps": 1}},
    {"z_grid": {"re_min": 1.0, "re_max": 0.0}},
    {"z_grid": {"color": 1}},
    [1, 2],
])
def test_invalid_configs(tmp_path, raw):
    path = tmp_path / "c.json"
    path.write_text(json.dumps(raw))
    with pytest.raises(ConfigError):
        load_config(path)


def test_unreadable_config(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigError):
        load_config(bad)


def test_overrides_validate():
    cfg = RunConfig().with_overrides(n=256, mu_max=None)
    assert cfg.n == 256 and cfg.mu_max == RunConfig().mu_max
    with pytest.raises(ConfigError):
        RunConfig().with_overrides(n=1)
