import math

import pytest

import ridel


def test_symmetric_agent():
    s = ridel.solve_agent(ridel.RIInstance([0.5, 0.5], ridel.PayoffMatrix.state_matching(2), 1.0))
    assert s.beta.beta == pytest.approx([0.5, 0.5], abs=1e-12)
    assert s.net_value == pytest.approx(math.log((math.e + 1) / 2), abs=1e-12)
    assert s.kkt_residual <= 1e-9


def test_binary_precisions():
    p = ridel.binary_precisions(0.6, 1.0)
    assert p.p_Rr == pytest.approx(0.872878, abs=1e-6)
    assert p.p_Ll == pytest.approx(0.518329, abs=1e-6)


def test_delegation_report():
    r = ridel.delegation_report([0.7, 0.3], 1.0)
    want = math.sqrt(0.7) / (math.sqrt(0.7) + math.sqrt(0.3))
    assert r.mu_star[0] == pytest.approx(want, abs=1e-12)
    assert r.value_optimal > r.value_aligned > r.value_no_learning
    assert ridel.consideration_sizes([0.7, 0.2, 0.1], 1.0) == (1, 2)


def test_transfers_and_contracts():
    t = ridel.belief_to_transfers(0.7, 0.7, 1.0)
    assert t.tau[0] == pytest.approx(-0.1935004, abs=1e-6)
    inst = ridel.RIInstance([0.7, 0.3], ridel.PayoffMatrix.state_matching(2), 1.0)
    assert ridel.transfers_to_belief(t, inst)[0] == pytest.approx(0.604356, abs=1e-6)
    assert ridel.optimal_outcome_contract(0.7, 0.7, 1.0).tau_high == 0.0
    th = ridel.contract_thresholds(0.7, 1.0)
    assert th["mu_bar_1"] < 0.604356 < 0.7 < th["mu_bar_2"]
    best, _ = ridel.optimal_restriction([0.5, 0.3, 0.2], 1.0)
    assert best == [0, 1, 2]


def test_implementability_and_communication():
    cert = ridel.implementability_check([0.3, 0.3, 0.4], ridel.nonimplementable_payoffs(0.1), 1.0)
    assert not cert.feasible
    assert cert.dual_witness == pytest.approx([-10.5, -10.5, 20.0], abs=1e-8)
    assert ridel.verify_communication_equilibrium([0.5, 0.3, 0.2], 1.0)
    assert all(ridel.obedience_check(ridel.optimal_belief_general([0.5, 0.3, 0.2]), 1.0).values())


def test_errors():
    with pytest.raises(ridel.InvalidInput):
        ridel.RIInstance([0.5, 0.5], ridel.PayoffMatrix.state_matching(2), -1.0)
    with pytest.raises(ValueError):
        ridel.Belief([0.5, 0.6])
    cfg = ridel.SolverConfig()
    cfg.max_iters = 1
    inst = ridel.RIInstance([0.5, 0.3, 0.2], ridel.PayoffMatrix.state_matching(3), 1.0)
    with pytest.raises(ridel.NonConvergence):
        ridel.solve_agent(inst, cfg)
