import math

import numpy as np
import pytest

import rotorsim as rs


def test_wavepacket_is_a_normalised_pure_state():
    rho = rs.wavepacket(0.4, 0.3, 16)
    assert rho.dim == 33
    assert rho.trace() == pytest.approx(1.0, abs=1e-12)
    assert rho.purity() == pytest.approx(1.0, abs=1e-12)
    m = rho.matrix
    assert m.shape == (33, 33)
    assert np.allclose(m, m.conj().T)


def test_revival_returns_the_initial_state():
    rho0 = rs.wavepacket(0.3, 0.0, 16)
    spec = rs.GeneratorSpec(rs.BathParams(1.0, 0.0), mode=rs.GeneratorMode.unitary_only)
    cfg = rs.EvolutionConfig()
    cfg.t_final = rs.revival_time()
    cfg.dt = cfg.t_final / 20000
    cfg.record_interval = cfg.t_final
    cfg.check_positivity = False
    r = rs.evolve(rho0, spec, cfg)
    assert rs.fidelity(rho0, r.final_state) > 1 - 1e-6
    assert r.max_trace_drift < 1e-10


def test_wigner_of_a_superposed_packet_goes_negative():
    rho = rs.wavepacket(0.2, 0.0, 24)
    spec = rs.GeneratorSpec(rs.BathParams(1.0, 0.0), mode=rs.GeneratorMode.unitary_only)
    cfg = rs.EvolutionConfig()
    cfg.t_final = rs.revival_time() / 8
    cfg.dt = 1e-3
    cfg.record_interval = cfg.t_final
    r = rs.evolve(rho, spec, cfg)
    w = rs.wigner(r.final_state, 98)
    assert w.shape == (98, 49)
    assert w.min() < -1e-3


def test_gibbs_state_is_stationary_under_unitary_part():
    pot = rs.PotentialSpec.double_well(4.0)
    bath = rs.BathParams(2.0, 0.0)
    rho = rs.gibbs_state(pot, bath, 40)
    spec = rs.GeneratorSpec(bath, pot, rs.GeneratorMode.unitary_only, rs.Representation.matrix)
    assert np.abs(rs.apply_generator(spec, rho).matrix).max() < 1e-10


def test_steady_state_of_free_rotor_matches_exact_profile():
    bath = rs.BathParams(3.0, 1.0)
    spec = rs.GeneratorSpec(bath)
    seed = rs.gibbs_state(rs.PotentialSpec(), bath, 40)
    ss = rs.steady_state(spec, seed, tolerance=1e-11)
    exact = rs.free_equilibrium(3.0, 1.0, 1.0, 40)
    assert rs.trace_distance(ss.state, exact) < 1e-7


def test_diffusion_kernel_is_normalised():
    table = rs.diffusion_kernel(1.0, 0.5, 8, 64)
    assert table.normalization() == pytest.approx(1.0, abs=1e-10)


def test_sweep_point_is_close_to_gibbs_when_hot():
    hot = rs.sweep_point(12.8)
    cold = rs.sweep_point(0.8)
    assert hot.ok and cold.ok
    assert hot.d1 < cold.d1 < 0.5
    assert hot.boundary_population <= 1e-8


def test_config_round_trip_and_errors():
    text = rs.preset_text("fig2")
    assert "fig2" in rs.preset_names()
    once = rs.validate_config(text)
    assert rs.validate_config(once) == once
    with pytest.raises(rs.ConfigError):
        rs.validate_config("name: x\nbogus: 1\n")
    with pytest.raises(rs.ConfigError):
        rs.preset_text("missing")


def test_run_scenario_writes_artifacts(tmp_path):
    text = """
name: smoke
kind: evolve
units: {hbar: 1.0, temperature: 2.0, gamma: 0.5}
potential:
  - {k: 1, cos: 0.5, sin: 0.0}
initial: {type: wavepacket, sigma: 0.5, alpha0: 0.0}
evolution: {truncation: 12, t_final: 0.2}
outputs: {snapshot_times: [0.1]}
"""
    code, _ = rs.run_scenario(text, tmp_path)
    assert code == 0
    assert (tmp_path / "observables.csv").exists()
    scripts = rs.emit_plots(tmp_path)
    assert any(s.endswith("plot_wigner.py") for s in scripts)


def test_units():
    s = rs.Scaling(0.5)
    assert s.v0 == pytest.approx(4.0)
    assert s.time(2.0) == pytest.approx(1.0)
    assert rs.revival_time(0.5) == pytest.approx(8 * math.pi)


def test_acceptance_criterion_runs():
    reports = rs.run_acceptance([1])
    assert len(reports) == 1
    assert reports[0]["passed"], reports[0]
