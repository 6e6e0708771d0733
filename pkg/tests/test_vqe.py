import numpy as np
import pytest

from nisqchem.ansatz import AnsatzSpec, build
from nisqchem.circuits import Circuit, Gate
from nisqchem.qsim import NoiseModel, expectation
from nisqchem.qubitop import QubitOperator
from nisqchem.vqe import (
    AdamParams,
    OptimizeConfig,
    OptimizeTrace,
    SpsaParams,
    TraceStep,
    gradient,
    minimize,
)

from .conftest import H2_E_FCI
from .helpers import tapered_problem

Z0 = QubitOperator({((0, "Z"),): 1.0})


def _rx_circuit():
    return Circuit(1, 0, (Gate("RX", (0,), parameter_slot=0),), 1)


def test_gradient_analytic_rx():
    c = _rx_circuit()
    # E(theta) = cos(theta)
    assert gradient(Z0, c, [0.0])[0] == pytest.approx(0.0, abs=1e-12)
    assert gradient(Z0, c, [np.pi / 2])[0] == pytest.approx(-1.0, abs=1e-12)
    theta = 0.83
    assert gradient(Z0, c, [theta])[0] == pytest.approx(-np.sin(theta), abs=1e-12)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_gradient_matches_finite_differences(seed):
    rng = np.random.default_rng(seed)
    circuit = build(AnsatzSpec(n_system=2, n_ancilla=1, n_layers=1))
    op = QubitOperator(
        {
            ((0, "Z"),): 0.7,
            ((1, "X"),): -0.4,
            ((0, "X"), (1, "Z")): 0.25,
            ((0, "Y"), (1, "Y")): 0.15,
        },
        n_qubits=2,
    )
    theta = rng.uniform(-np.pi, np.pi, circuit.n_params)
    grad = gradient(op, circuit, theta)
    h = 1e-5
    for k in range(circuit.n_params):
        tp, tm = theta.copy(), theta.copy()
        tp[k] += h
        tm[k] -= h
        fd = (expectation(op, circuit, tp) - expectation(op, circuit, tm)) / (2 * h)
        assert grad[k] == pytest.approx(fd, abs=1e-6)


def test_adam_minimizes_single_qubit():
    cfg = OptimizeConfig(optimizer="adam", max_iters=500, seed=1, tol=1e-12)
    trace = minimize(Z0, _rx_circuit(), cfg)
    assert trace.best_energy == pytest.approx(-1.0, abs=1e-6)
    assert len(trace.records) <= 500
    assert trace.best_energy == min(r.energy for r in trace.records)
    # evaluated best point reproduces the recorded best energy
    assert expectation(Z0, _rx_circuit(), trace.best_params) == pytest.approx(
        trace.best_energy, abs=1e-12
    )


def test_running_minimum_nonincreasing_and_variational():
    op, circuit, _ = tapered_problem_small()
    cfg = OptimizeConfig(optimizer="adam", max_iters=120, seed=3)
    trace = minimize(op, circuit, cfg)
    run_min = np.minimum.accumulate([r.energy for r in trace.records])
    assert all(np.diff(run_min) <= 1e-15)
    lam_min = float(np.linalg.eigvalsh(op.matrix()).min())
    assert all(r.energy >= lam_min - 1e-9 for r in trace.records)


def tapered_problem_small():
    z = QubitOperator({((0, "Z"),): 1.0, ((1, "Z"),): 0.5, ((0, "X"), (1, "X")): 0.2},
                      n_qubits=2)
    circuit = build(AnsatzSpec(n_system=2, n_ancilla=1, n_layers=1))
    return z, circuit, None


def test_h2_haa_adam_reaches_chemical_accuracy(h2_ints):
    op, circuit, e_casci = tapered_problem(h2_ints, n_ancilla=1, n_layers=2)
    assert e_casci == pytest.approx(H2_E_FCI, abs=1e-10)
    cfg = OptimizeConfig(optimizer="adam", max_iters=250, seed=0, tol=1e-12)
    trace = minimize(op, circuit, cfg)
    assert abs(trace.best_energy - e_casci) < 1.6e-3


def test_h2_haa_spsa_best_of_seeds(h2_ints):
    # gains scaled up from the canonical defaults: the reference-prepped
    # landscape is nearly flat at the start and needs large early kicks
    op, circuit, e_casci = tapered_problem(h2_ints, n_ancilla=1, n_layers=2)
    best = np.inf
    for seed in range(5):
        cfg = OptimizeConfig(
            optimizer="spsa", max_iters=800, seed=seed, tol=1e-12,
            spsa=SpsaParams(a=20.0, c=0.2),
        )
        trace = minimize(op, circuit, cfg)
        best = min(best, trace.best_energy)
        if abs(best - e_casci) < 1.6e-3:
            break
    assert abs(best - e_casci) < 1.6e-3


def test_layerwise_schedule_parity(h2_ints):
    op, circuit, e_casci = tapered_problem(h2_ints, n_ancilla=1, n_layers=2)
    budget = 200
    single_finals, layer_finals = [], []
    for seed in range(5):
        single = minimize(op, circuit, OptimizeConfig(max_iters=budget, seed=seed, tol=1e-12))
        layered = minimize(
            op, circuit,
            OptimizeConfig(max_iters=budget, seed=seed, layerwise=True, tol=1e-12),
        )
        single_finals.append(single.best_energy)
        layer_finals.append(layered.best_energy)
    assert np.median(layer_finals) <= np.median(single_finals) + 1e-3


def test_layerwise_needs_layer_spans():
    c = Circuit(1, 0, (Gate("RX", (0,), parameter_slot=0),), 1)
    with pytest.raises(ValueError, match="layer"):
        minimize(Z0, c, OptimizeConfig(layerwise=True, max_iters=10))


def test_seed_determinism_bitwise():
    op, circuit, _ = tapered_problem_small()
    cfg = OptimizeConfig(optimizer="spsa", max_iters=60, seed=42)
    t1 = minimize(op, circuit, cfg)
    t2 = minimize(op, circuit, cfg)
    assert t1.records == t2.records
    assert np.array_equal(t1.best_params, t2.best_params)
    assert t1.to_csv() == t2.to_csv()


def test_noisy_optimization_uses_noisy_landscape():
    op, circuit, _ = tapered_problem_small()
    noise = NoiseModel(p1=5e-3, p2=2e-2)
    cfg = OptimizeConfig(optimizer="adam", max_iters=40, seed=5, noise=noise)
    trace = minimize(op, circuit, cfg)
    noisy_best = expectation(op, circuit, trace.best_params, noise)
    assert noisy_best == pytest.approx(trace.best_energy, abs=1e-12)


def test_trace_csv_format():
    trace = OptimizeTrace(
        records=(TraceStep(1, -0.5, 1.0, 0.25, 0.05),),
        best_energy=-0.5,
        best_params=np.zeros(1),
    )
    assert trace.to_csv() == "iter,energy,grad_norm,step_size\n1,-0.5,0.25,0.05\n"


def test_invalid_configs_rejected():
    with pytest.raises(ValueError):
        OptimizeConfig(optimizer="lbfgs")
    with pytest.raises(ValueError):
        AdamParams(beta1=1.5)
    with pytest.raises(ValueError):
        OptimizeConfig(max_iters=0)
