import json
import math

import numpy as np
import pytest

import nlpar


def test_constant_state_is_stationary():
    k = nlpar.KernelSpec.fractional_laplacian(1, 0.5)
    g = nlpar.Grid(1, 8.0, 128)
    f = nlpar.solve(k, g, [2.0] * g.size, exterior="constant", parameter=2.0, t_end=0.5)
    assert f.values.shape == (len(f.times), g.size)
    assert np.max(np.abs(f.values - 2.0)) < 1e-12


def test_tail_of_one_has_closed_form():
    k = nlpar.KernelSpec.fractional_laplacian(1, 0.5)
    g = nlpar.Grid(1, 8.0, 256)
    f = nlpar.solve(k, g, [1.0] * g.size, exterior="constant", parameter=1.0, t_end=1.0)
    assert nlpar.tail(f, "constant", 1.0, 0.0, 1.0, 0.0, 1.0) == pytest.approx(2.0, rel=1e-2)


def test_heat_kernel_and_phi():
    assert nlpar.heat_kernel(0.5, 0.0, 1.0) == pytest.approx(1.0 / math.pi, rel=1e-12)
    assert nlpar.phi(0.0, 1, 0.5) == 1.0


def test_harnack_on_constant_state():
    k = nlpar.KernelSpec.fractional_laplacian(1, 0.5)
    g = nlpar.Grid(1, 8.0, 128)
    f = nlpar.solve(k, g, [1.0] * g.size, exterior="constant", parameter=1.0, t_end=4.0)
    rep = nlpar.verify_harnack(f, "constant", 1.0, 0.0, 1.0, 3.0, 2.0)
    assert rep["C_emp"] == pytest.approx(1.0, abs=1e-10)
    assert rep["pass_"]


def test_config_errors_are_value_errors():
    with pytest.raises(ValueError, match="alpha"):
        nlpar.config_hash("[kernel]\norder_s = 0.3\n[geometry]\nalpha = 1.9\n")
    with pytest.raises(ValueError, match="unknown key"):
        nlpar.config_hash("[grid]\nbogus = 1\n")


def test_run_writes_summary(tmp_path):
    text = "[grid]\nnodes_N = 64\n[time]\nstep_dt = 1/16\n[run]\nseed = 7\n"
    code, log = nlpar.run(text, "verify", str(tmp_path))
    assert code in (0, 2)
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["seed"] == 7
    assert summary["config_hash"] == nlpar.config_hash(text)
    header = (tmp_path / "results.csv").read_text().splitlines()[0]
    assert header.startswith("theorem_id,member_id,N,dt,s,lambda")
