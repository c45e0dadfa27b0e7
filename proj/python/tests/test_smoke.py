import math

import pytest

import iobt


def test_lp_simple():
    r = iobt.solve_lp([1.0, 1.0], [[1.0, 1.0]], [1.0])
    assert r["status"] == "optimal"
    assert math.isclose(r["value"], 1.0)
    assert math.isclose(sum(r["x"]), 1.0)


def test_lp_statuses():
    assert iobt.solve_lp([1.0], [[1.0], [-1.0]], [1.0, -2.0])["status"] == "infeasible"
    assert iobt.solve_lp([1.0, 0.0], [[-1.0, 1.0]], [1.0])["status"] == "unbounded"


def test_lp_shape_errors():
    with pytest.raises(ValueError):
        iobt.solve_lp([1.0, 2.0], [[1.0]], [1.0])


def test_zero_variable_negative_objective():
    assert iobt.zero_variable_test([1.0, -1.0], [], [], 1)


def test_stage_game_two_by_two():
    r = iobt.solve_stage_game([[3, 1], [2, 2]], [[0, 1], [1, 0]])
    assert r["b"] == 0
    assert math.isclose(r["value_a"], 2.5, abs_tol=1e-9)
    assert math.isclose(sum(r["q"]), 1.0)


def test_stage_game_uncoupled():
    r = iobt.solve_stage_game([[1.0]], [[0.0]], [[False]])
    assert r["b"] is None


def test_solve_nfse():
    r = iobt.solve(mode="nfse", seed=3, scale=0.1)
    assert r["devices"] == 100
    assert math.isclose(sum(p for _, p in r["q_star"]), 1.0, abs_tol=1e-9)
    assert r["verdict"] in ("Guaranteed", "NotGuaranteed")


def test_solve_equal():
    r = iobt.solve(mode="equal", seed=3, scale=0.1)
    assert len(r["q_star"]) == 5
    assert r["verdict"] is None


def test_bad_mode():
    with pytest.raises(ValueError):
        iobt.solve(mode="greedy")


def test_missing_config():
    with pytest.raises(ValueError):
        iobt.solve(config="/nonexistent/config.json")
    assert iobt.run_cli(["solve", "--config", "/nonexistent/config.json"]) == 2


def test_scenario_rows():
    rows = iobt.run_scenario(2, scale=0.1, runs=1, seed=1, modes=["nfse"])
    assert [r["value"] for r in rows] == [0, 20, 40, 60, 80, 100]
    assert all(r["mode"] == "nfse" and r["T"] == 1 for r in rows)
    again = iobt.run_scenario(2, scale=0.1, runs=1, seed=1, modes=["nfse"])
    assert rows == again
