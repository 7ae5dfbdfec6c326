"""Least-squares similarity alignment of point trajectories (Umeyama)."""

from typing import Tuple

import numpy as np

DEGENERATE_EPS = 1e-18


def umeyama_align(est: np.ndarray, gt: np.ndarray, with_scale: bool = True) -> Tuple[float, np.ndarray, np.ndarray]:
    """
    Find (s, R, t) minimizing sum ||gt_i - (s * R @ est_i + t)||^2.

    Args:
        est: Estimated points, shape (n, 3)
        gt: Reference points, shape (n, 3)
        with_scale: Estimate the scale; s = 1 otherwise

    Returns:
        Tuple of (scale, 3x3 rotation, translation vector)

    Raises:
        ValueError: On shape mismatch or when all estimated points coincide
    """
    est = np.asarray(est, dtype=np.float64)
    gt = np.asarray(gt, dtype=np.float64)
    if est.shape != gt.shape or est.ndim != 2 or est.shape[1] != 3:
        raise ValueError(f"umeyama_align: expected two (n, 3) arrays, got {est.shape} and {gt.shape}")
    n = est.shape[0]
    if n == 0:
        raise ValueError("umeyama_align: no points")

    mu_est = est.mean(axis=0)
    mu_gt = gt.mean(axis=0)
    est_c = est - mu_est
    gt_c = gt - mu_gt

    sigma2 = float((est_c ** 2).sum()) / n
    if sigma2 <= DEGENERATE_EPS:
        raise ValueError("umeyama_align: degenerate input, all points are identical")

    # correlation
    C = gt_c.T @ est_c / n
    U, D, Vt = np.linalg.svd(C)
    S = np.eye(3)
    if np.linalg.det(U) * np.linalg.det(Vt) < 0:
        S[2, 2] = -1.0

    R = U @ S @ Vt
    s = float(np.trace(np.diag(D) @ S)) / sigma2 if with_scale else 1.0
    t = mu_gt - s * R @ mu_est
    return s, R, t


def apply_similarity(points: np.ndarray, scale: float, R: np.ndarray, t: np.ndarray) -> np.ndarray:
    """Map (n, 3) points through x -> s * R @ x + t."""
    return scale * np.asarray(points, dtype=np.float64) @ R.T + t


def alignment_residual(est: np.ndarray, gt: np.ndarray, scale: float, R: np.ndarray, t: np.ndarray) -> float:
    """Sum of squared distances after alignment."""
    diff = np.asarray(gt, dtype=np.float64) - apply_similarity(est, scale, R, t)
    return float((diff ** 2).sum())
