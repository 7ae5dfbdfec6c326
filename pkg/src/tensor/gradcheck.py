"""Central finite-difference checks for the analytic gradients."""

from typing import Callable, Dict, Mapping, Optional

import numpy as np

from .tensor import Tensor, no_grad


def _coordinates(size: int, max_coords: Optional[int], rng: Optional[np.random.Generator]) -> np.ndarray:
    if max_coords is None or max_coords >= size:
        return np.arange(size)
    rng = rng if rng is not None else np.random.default_rng(0)
    return np.sort(rng.choice(size, size=max_coords, replace=False))


def _relative_error(analytic: float, numeric: float) -> float:
    return abs(analytic - numeric) / max(1.0, abs(analytic))


def finite_diff_check(
    f: Callable[[Tensor], Tensor],
    x: Tensor,
    h: float = 1e-5,
    max_coords: Optional[int] = None,
    rng: Optional[np.random.Generator] = None,
) -> float:
    """
    Compare the analytic gradient of a scalar function against central differences.

    Args:
        f: Scalar-valued function of one tensor
        x: Point to check at
        h: Finite-difference step
        max_coords: Check only this many randomly chosen coordinates
        rng: Generator used to pick the coordinates

    Returns:
        Max over checked coordinates of |analytic - numeric| / max(1, |analytic|)
    """
    errors = check_gradients(lambda ts: f(ts["x"]), {"x": x.data}, h=h,
                             max_coords=max_coords, rng=rng)
    return errors["x"]


def check_gradients(
    f: Callable[[Mapping[str, Tensor]], Tensor],
    values: Mapping[str, np.ndarray],
    h: float = 1e-5,
    max_coords: Optional[int] = None,
    rng: Optional[np.random.Generator] = None,
    names: Optional[list] = None,
) -> Dict[str, float]:
    """
    Finite-difference check of a scalar function of several named tensors.

    Args:
        f: Function of a name -> tensor mapping returning a scalar tensor
        values: Point to check at
        h: Finite-difference step
        max_coords: Per-tensor cap on checked coordinates
        rng: Generator used to pick the coordinates
        names: Subset of names to check (default: all)

    Returns:
        Max relative error per checked name
    """
    leaves = {name: Tensor(v, requires_grad=True, name=name) for name, v in values.items()}
    f(leaves).backward()

    errors: Dict[str, float] = {}
    for name in (names if names is not None else list(values)):
        base = np.array(values[name], dtype=np.float64)
        grad = leaves[name].grad
        analytic = grad.data.ravel() if grad is not None else np.zeros(base.size)
        worst = 0.0
        for index in _coordinates(base.size, max_coords, rng):
            shifted = {}
            for sign in (1.0, -1.0):
                probe = base.copy().ravel()
                probe[index] += sign * h
                point = {n: Tensor(v) for n, v in values.items()}
                point[name] = Tensor(probe.reshape(base.shape))
                with no_grad():
                    shifted[sign] = f(point).item()
            numeric = (shifted[1.0] - shifted[-1.0]) / (2.0 * h)
            worst = max(worst, _relative_error(float(analytic[index]), numeric))
        errors[name] = worst
    return errors
