import numpy as np
import pytest

from qcollide import (
    CdfGrid,
    Exponential,
    RngStream,
    ValidationError,
    simulate_queue,
)
from qcollide.reports import (
    read_csv,
    write_cdf_comparison_csv,
    write_cdf_csv,
    write_queue_trace_csv,
    write_rows,
    write_state_csv,
    write_sweep_csv,
)


def test_write_rows_round_trip(tmp_path):
    path = tmp_path / "t.csv"
    values = [0.1, 1.0 / 3.0, 1e-17, 123456.789, 2.0**-52]
    write_rows(path, ["a"], [(v,) for v in values])
    _, cols = read_csv(path)
    assert np.array_equal(cols["a"], values)  # repr floats survive exactly
    data = path.read_bytes()
    assert b"\r" not in data
    assert data.endswith(b"\n")


def test_queue_trace_csv(tmp_path):
    trace = simulate_queue(Exponential(0.5), Exponential(1.0), 50, RngStream(2))
    path = tmp_path / "q.csv"
    write_queue_trace_csv(path, trace)
    header, cols = read_csv(path)
    assert header == ["n", "T", "S", "Wq", "I", "t_arrive", "t_depart"]
    assert np.array_equal(cols["n"], np.arange(1, 51))
    assert np.array_equal(cols["Wq"], trace.waiting)
    assert np.array_equal(cols["t_depart"], trace.departure_time)


def test_sweep_csv(tmp_path):
    path = tmp_path / "s.csv"
    write_sweep_csv(path, "r", [(0.3, 0.2, 0.001, 0.0001)])
    header, cols = read_csv(path)
    assert header == ["r", "E_C", "Var_C", "stderr"]
    assert cols["E_C"][0] == 0.2


def test_cdf_csvs(tmp_path):
    x = np.linspace(0.0, 2.0, 5)
    grid = CdfGrid(x, np.array([0.1, 0.3, 0.5, 0.9, 1.0]), 0.1)
    write_cdf_csv(tmp_path / "f.csv", grid)
    header, cols = read_csv(tmp_path / "f.csv")
    assert header == ["x", "F"]
    assert np.array_equal(cols["F"], grid.values)
    write_cdf_comparison_csv(tmp_path / "c.csv", x, grid.values, grid.values + 0.001)
    header, cols = read_csv(tmp_path / "c.csv")
    assert header == ["x", "F_numeric", "F_empirical", "abs_diff"]
    assert np.allclose(cols["abs_diff"], 0.001)


def test_state_csv(tmp_path):
    rho = np.array([[0.5, 0.25 - 0.1j], [0.25 + 0.1j, 0.5]])
    path = tmp_path / "rho.csv"
    write_state_csv(path, rho)
    text = path.read_text()
    lines = text.strip().split("\n")
    assert lines[0] == "part,i,j,value"
    assert len(lines) == 9
    assert "re,0,1,0.25" in lines
    assert "im,0,1,-0.1" in lines


def test_read_csv_errors(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("")
    with pytest.raises(ValidationError):
        read_csv(path)
    path.write_text("a,b\n")
    with pytest.raises(ValidationError):
        read_csv(path)  # header but no rows
    path.write_text("a,b\n1.0\n")
    with pytest.raises(ValidationError):
        read_csv(path)  # ragged row
    path.write_text("a,b\n1.0,oops\n")
    with pytest.raises(ValidationError):
        read_csv(path)  # non-numeric cell
    with pytest.raises(ValidationError):
        read_csv(tmp_path / "missing.csv")


def test_rewrite_is_byte_identical(tmp_path):
    trace = simulate_queue(Exponential(0.5), Exponential(1.0), 20, RngStream(9))
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    write_queue_trace_csv(a, trace)
    write_queue_trace_csv(b, trace)
    assert a.read_bytes() == b.read_bytes()
