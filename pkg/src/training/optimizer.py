"""Adam with decoupled weight decay and a step-halving learning-rate schedule."""

from dataclasses import dataclass, field
from typing import Dict, Mapping, Tuple

import numpy as np

from src.utils.errors import NonFiniteGradientError


@dataclass
class OptimizerState:
    """Moments per parameter name plus hyper-parameters and the step counter."""

    base_lr: float = 1e-4
    beta1: float = 0.9
    beta2: float = 0.99
    eps: float = 1e-8
    weight_decay: float = 4e-4
    step: int = 0
    m: Dict[str, np.ndarray] = field(default_factory=dict)
    v: Dict[str, np.ndarray] = field(default_factory=dict)

    @classmethod
    def from_config(cls, config) -> "OptimizerState":
        return cls(base_lr=config.base_lr, beta1=config.beta1, beta2=config.beta2,
                   eps=config.eps, weight_decay=config.weight_decay)


def lr_at(iteration: int, base_lr: float, decay_every: int) -> float:
    """base_lr * 0.5 ** floor(iteration / decay_every)."""
    if iteration < 0:
        raise ValueError(f"iteration must be >= 0, got {iteration}")
    return base_lr * 0.5 ** (iteration // decay_every)


def adam_step(
    params: Mapping[str, np.ndarray],
    grads: Mapping[str, np.ndarray],
    state: OptimizerState,
    lr: float,
) -> Tuple[Dict[str, np.ndarray], OptimizerState]:
    """
    One bias-corrected Adam update.

    Weight decay is decoupled: p <- p - lr * weight_decay * p is applied
    before the moment update.

    Args:
        params: Current values per name
        grads: Gradients per name (same shapes)
        state: Moments and hyper-parameters; advanced in place
        lr: Learning rate for this step

    Returns:
        Tuple of (new parameter values, state)

    Raises:
        NonFiniteGradientError: If any gradient entry is NaN or infinite
    """
    for name, g in grads.items():
        bad = int(np.size(g) - np.count_nonzero(np.isfinite(g)))
        if bad:
            raise NonFiniteGradientError(name, bad)

    state.step += 1
    bc1 = 1.0 - state.beta1 ** state.step
    bc2 = 1.0 - state.beta2 ** state.step

    updated: Dict[str, np.ndarray] = {}
    for name, p in params.items():
        p = np.array(p, dtype=np.float64)
        g = np.asarray(grads.get(name, np.zeros_like(p)), dtype=np.float64)
        if g.shape != p.shape:
            raise ValueError(f"gradient shape {g.shape} differs from parameter '{name}' {p.shape}")
        if name not in state.m:
            state.m[name] = np.zeros_like(p)
            state.v[name] = np.zeros_like(p)

        p -= lr * state.weight_decay * p
        state.m[name] = state.beta1 * state.m[name] + (1.0 - state.beta1) * g
        state.v[name] = state.beta2 * state.v[name] + (1.0 - state.beta2) * (g * g)
        m_hat = state.m[name] / bc1
        v_hat = state.v[name] / bc2
        p -= lr * m_hat / (np.sqrt(v_hat) + state.eps)
        updated[name] = p
    return updated, state
