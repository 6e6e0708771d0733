"""Variational minimization of circuit expectation values.

Gradients use the parameter-shift rule (exact for RX/RZ generators); the
optimizers are Adam and SPSA with their canonical update rules.  Under a
noise model both optimize the noisy landscape directly.  The layer-wise
schedule trains each entangling layer on its prefix circuit, freezes it,
appends the next, and finishes with a global polish pass over all
parameters.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .circuits import Circuit
from .qsim import NoiseModel, expectation, expectation_batch
from .qubitop import QubitOperator

CONVERGENCE_WINDOW = 10


class NonFiniteEnergyError(RuntimeError):
    """Raised when the objective turns non-finite; carries the partial trace."""

    def __init__(self, message, trace):
        super().__init__(message)
        self.trace = trace


@dataclass(frozen=True)
class AdamParams:
    lr: float = 0.05
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8

    def __post_init__(self):
        if self.lr <= 0 or self.epsilon <= 0:
            raise ValueError("lr and epsilon must be positive")
        if not (0 < self.beta1 < 1 and 0 < self.beta2 < 1):
            raise ValueError("beta1/beta2 must lie in (0, 1)")


@dataclass(frozen=True)
class SpsaParams:
    a: float = 0.2
    c: float = 0.1
    A: float | None = None  # defaults to max_iters / 10
    alpha: float = 0.602
    gamma: float = 0.101

    def __post_init__(self):
        if self.a <= 0 or self.c <= 0 or self.alpha <= 0 or self.gamma <= 0:
            raise ValueError("SPSA gains must be positive")


@dataclass(frozen=True)
class OptimizeConfig:
    optimizer: str = "adam"
    max_iters: int = 300
    seed: int = 0
    adam: AdamParams = field(default_factory=AdamParams)
    spsa: SpsaParams = field(default_factory=SpsaParams)
    layerwise: bool = False
    tol: float = 1e-10
    noise: NoiseModel | None = None

    def __post_init__(self):
        if self.optimizer not in ("adam", "spsa"):
            raise ValueError(f"unknown optimizer {self.optimizer!r}")
        if self.max_iters < 1:
            raise ValueError("max_iters must be positive")
        if self.tol <= 0:
            raise ValueError("tol must be positive")


@dataclass(frozen=True)
class TraceStep:
    iteration: int
    energy: float
    param_norm: float
    grad_norm: float
    step_size: float


@dataclass(frozen=True)
class OptimizeTrace:
    records: tuple[TraceStep, ...]
    best_energy: float
    best_params: np.ndarray
    last_params: tuple[np.ndarray, ...] = ()

    def to_csv(self) -> str:
        lines = ["iter,energy,grad_norm,step_size"]
        for r in self.records:
            lines.append(
                f"{r.iteration},{float(r.energy)!r},{float(r.grad_norm)!r},{float(r.step_size)!r}"
            )
        return "\n".join(lines) + "\n"


def gradient(
    op: QubitOperator,
    circuit: Circuit,
    params,
    noise: NoiseModel | None = None,
    slots=None,
) -> np.ndarray:
    """Parameter-shift gradient dE/dtheta_k = [E(+pi/2) - E(-pi/2)] / 2.

    ``slots`` restricts evaluation to a subset of parameter slots; the
    remaining entries stay zero.  The 2 * n_params shifted evaluations are
    independent of each other (safe to fan out).
    """
    params = np.asarray(params, dtype=float)
    if len(params) != circuit.n_params:
        raise ValueError(f"expected {circuit.n_params} parameters, got {len(params)}")
    grad = np.zeros_like(params)
    active = list(range(circuit.n_params)) if slots is None else list(slots)
    if not active:
        return grad
    if noise is None:
        batch = np.repeat(params[None, :], 2 * len(active), axis=0)
        for i, k in enumerate(active):
            batch[2 * i, k] += np.pi / 2
            batch[2 * i + 1, k] -= np.pi / 2
        energies = expectation_batch(op, circuit, batch)
        grad[active] = 0.5 * (energies[0::2] - energies[1::2])
        return grad
    for k in active:
        shifted = params.copy()
        shifted[k] += np.pi / 2
        e_plus = expectation(op, circuit, shifted, noise)
        shifted[k] -= np.pi
        e_minus = expectation(op, circuit, shifted, noise)
        grad[k] = 0.5 * (e_plus - e_minus)
    return grad


def minimize(op: QubitOperator, circuit: Circuit, cfg: OptimizeConfig) -> OptimizeTrace:
    """Run the configured optimizer; deterministic for a fixed (cfg, seed).

    Initial parameters are drawn uniformly from (-0.1, 0.1).  A phase stops
    early once |dE| < tol on 10 consecutive iterations.  With
    ``cfg.layerwise`` the circuit must carry layer spans; best energy and
    parameters are tracked over full-circuit evaluations.
    """
    rng = np.random.default_rng(cfg.seed)
    theta = rng.uniform(-0.1, 0.1, circuit.n_params)
    state = _RunState(op=op, cfg=cfg, rng=rng)
    if not cfg.layerwise:
        _run_phase(state, circuit, theta, slots=range(circuit.n_params),
                   iters=cfg.max_iters, full=True)
    else:
        if not circuit.layers:
            raise ValueError("layer-wise optimization needs layer spans on the circuit")
        n_layers = len(circuit.layers)
        per_layer = max(1, cfg.max_iters // (2 * n_layers))
        polish = max(1, cfg.max_iters - n_layers * per_layer)
        for li, span in enumerate(circuit.layers):
            prefix = Circuit(
                n_system=circuit.n_system,
                n_ancilla=circuit.n_ancilla,
                gates=circuit.gates[: span.gate_end],
                n_params=span.slot_end,
                layers=circuit.layers[: li + 1],
            )
            sub = theta[: span.slot_end]
            _run_phase(state, prefix, sub, slots=range(span.slot_start, span.slot_end),
                       iters=per_layer, full=(li == n_layers - 1))
            theta[: span.slot_end] = sub
        _run_phase(state, circuit, theta, slots=range(circuit.n_params),
                   iters=polish, full=True)
    if state.best_params is None:
        raise RuntimeError("no full-circuit evaluation recorded")
    return OptimizeTrace(
        records=tuple(state.records),
        best_energy=state.best_energy,
        best_params=state.best_params,
        last_params=tuple(state.last_params),
    )


@dataclass
class _RunState:
    op: QubitOperator
    cfg: OptimizeConfig
    rng: np.random.Generator
    records: list = field(default_factory=list)
    best_energy: float = np.inf
    best_params: np.ndarray | None = None
    last_params: list = field(default_factory=list)
    iteration: int = 0


def _run_phase(state: _RunState, circuit: Circuit, theta: np.ndarray, slots, iters: int, full: bool):
    cfg = state.cfg
    slots = list(slots)
    adam_m = np.zeros_like(theta)
    adam_v = np.zeros_like(theta)
    spsa_A = cfg.spsa.A if cfg.spsa.A is not None else cfg.max_iters / 10.0
    previous_energy = None
    flat_count = 0
    for t in range(1, iters + 1):
        energy = expectation(state.op, circuit, theta, cfg.noise)
        if not np.isfinite(energy):
            trace = OptimizeTrace(
                records=tuple(state.records),
                best_energy=state.best_energy,
                best_params=state.best_params if state.best_params is not None else theta.copy(),
                last_params=tuple(state.last_params),
            )
            raise NonFiniteEnergyError(f"non-finite energy at iteration {state.iteration}", trace)

        if cfg.optimizer == "adam":
            grad = gradient(state.op, circuit, theta, cfg.noise, slots=slots)
            adam_m = cfg.adam.beta1 * adam_m + (1 - cfg.adam.beta1) * grad
            adam_v = cfg.adam.beta2 * adam_v + (1 - cfg.adam.beta2) * grad**2
            m_hat = adam_m / (1 - cfg.adam.beta1**t)
            v_hat = adam_v / (1 - cfg.adam.beta2**t)
            step = cfg.adam.lr * m_hat / (np.sqrt(v_hat) + cfg.adam.epsilon)
            grad_norm = float(np.linalg.norm(grad))
            step_size = float(np.linalg.norm(step))
            theta -= step
        else:
            ck = cfg.spsa.c / t**cfg.spsa.gamma
            delta = state.rng.choice([-1.0, 1.0], size=len(theta))
            mask = np.zeros_like(theta)
            mask[slots] = 1.0
            delta = delta * mask
            e_plus = expectation(state.op, circuit, theta + ck * delta, cfg.noise)
            e_minus = expectation(state.op, circuit, theta - ck * delta, cfg.noise)
            ghat = (e_plus - e_minus) / (2.0 * ck) * delta
            ak = cfg.spsa.a / (spsa_A + t) ** cfg.spsa.alpha
            grad_norm = float(np.linalg.norm(ghat))
            step_size = float(ak * grad_norm)
            theta -= ak * ghat

        state.iteration += 1
        state.records.append(
            TraceStep(
                iteration=state.iteration,
                energy=float(energy),
                param_norm=float(np.linalg.norm(theta)),
                grad_norm=grad_norm,
                step_size=step_size,
            )
        )
        if full:
            if energy < state.best_energy:
                state.best_energy = float(energy)
                # theta was updated after the evaluation; store the evaluated point
                state.best_params = _pre_update(theta, step if cfg.optimizer == "adam" else ak * ghat)
            state.last_params.append(_pre_update(theta, step if cfg.optimizer == "adam" else ak * ghat))
            if len(state.last_params) > 10:
                state.last_params.pop(0)
        if previous_energy is not None and abs(energy - previous_energy) < cfg.tol:
            flat_count += 1
            if flat_count >= CONVERGENCE_WINDOW:
                break
        else:
            flat_count = 0
        previous_energy = energy


def _pre_update(theta: np.ndarray, step: np.ndarray) -> np.ndarray:
    return (theta + step).copy()
