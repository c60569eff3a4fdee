"""Extremal singular values of the stabilized section by power iteration.

Everything here works on the squared map M^T M (or its shifted complement),
so the basic engine only ever sees a Hermitian positive semidefinite
operator. A Rayleigh-quotient residual gives the usual a-posteriori
guarantee: the reported estimate lies within residual of some true
eigenvalue, which the report maps back to the singular-value scale.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import qk_operator as qk


class ZeroVector(ValueError):
    """A residual bound was requested for the zero vector."""


class NonConvergence(RuntimeError):
    """Power iteration hit max_iter; carries the last iterate."""

    def __init__(self, message: str, estimate: float, vector: np.ndarray,
                 residual: float, iters: int):
        super().__init__(message)
        self.estimate = estimate
        self.vector = vector
        self.residual = residual
        self.iters = iters


@dataclass(frozen=True)
class PowerResult:
    value: float
    vector: np.ndarray
    residual: float
    iters: int


@dataclass(frozen=True)
class SpectrumReport:
    K: int
    sigma_max: float
    sigma_min: float
    residual_max: float
    residual_min: float
    iters_max: int
    iters_min: int
    condition_holds: bool


def aposteriori_bound(apply: Callable, x: np.ndarray, lam: float) -> float:
    """||A x - lam x|| / ||x||: distance from lam to the nearest eigenvalue
    of the Hermitian map A."""
    nx = float(np.linalg.norm(x))
    if nx == 0.0:
        raise ZeroVector("residual bound needs a nonzero vector")
    return float(np.linalg.norm(apply(x) - lam * x)) / nx


def _start_vector(dim: int, seed) -> np.ndarray:
    rng = np.random.default_rng(seed)
    x = rng.uniform(-1.0, 1.0, dim) + 1j * rng.uniform(-1.0, 1.0, dim)
    return x / np.linalg.norm(x)


def power_largest(apply: Callable, dim: int, tol: float = 1e-8,
                  max_iter: int = 20000, seed=0) -> PowerResult:
    """Largest eigenvalue of a Hermitian PSD map by plain power iteration.

    Stops when the residual ||A x - lam x|| drops below tol on unit vectors.
    Raises NonConvergence (carrying the final iterate) past max_iter.
    """
    x = _start_vector(dim, seed)
    lam = 0.0
    res = np.inf
    for it in range(1, max_iter + 1):
        y = apply(x)
        lam = float(np.real(np.vdot(x, y)))
        res = float(np.linalg.norm(y - lam * x))
        if res <= tol:
            return PowerResult(lam, x, res, it)
        ny = float(np.linalg.norm(y))
        if ny == 0.0:
            # x is in the kernel: 0 is an exact eigenvalue
            return PowerResult(0.0, x, 0.0, it)
        x = y / ny
    raise NonConvergence(
        f"power iteration stalled at residual {res:.3e} after {max_iter} steps",
        lam, x, res, max_iter,
    )


def power_smallest_singular(apply: Callable, apply_adjoint: Callable, dim: int,
                            lam_max: float, tol: float = 1e-8,
                            max_iter: int = 20000, seed=0,
                            avoid: np.ndarray | None = None) -> PowerResult:
    """Smallest singular value of M through the shifted squared map.

    Iterates on lam_shift I - M^T M with lam_shift = lam_max (1 + 1e-6), so
    the map stays PSD whenever lam_max dominates the true top eigenvalue of
    M^T M (pass the power_largest estimate plus its residual). The top
    eigenvalue mu of the shift gives sigma_min = sqrt(lam_shift - mu); the
    returned residual is already mapped onto the singular-value scale.

    avoid: a vector to project out when stagnation is detected (use the
    converged top eigenvector, which the shift turns into a nuisance
    near-kernel direction).
    """
    lam_shift = lam_max * (1.0 + 1e-6)

    def shifted(x):
        return lam_shift * x - apply_adjoint(apply(x))

    x = _start_vector(dim, seed)
    mu = 0.0
    res = np.inf
    last_checked = np.inf
    for it in range(1, max_iter + 1):
        y = shifted(x)
        mu = float(np.real(np.vdot(x, y)))
        res = float(np.linalg.norm(y - mu * x))
        if res <= tol:
            break
        if avoid is not None and it % 200 == 0:
            if res > 0.5 * last_checked:
                y = y - avoid * np.vdot(avoid, y)
            last_checked = res
        ny = float(np.linalg.norm(y))
        if ny == 0.0:
            res = 0.0
            break
        x = y / ny
    else:
        raise NonConvergence(
            f"shifted iteration stalled at residual {res:.3e} after {max_iter} steps",
            float(np.sqrt(max(lam_shift - mu, 0.0))), x, res, max_iter,
        )
    sig_sq = max(lam_shift - mu, 0.0)
    sigma = float(np.sqrt(sig_sq))
    # |sigma - sigma_true| <= res / (sigma + sigma_true), and the true value
    # is at least sqrt(sig_sq - res)
    denom = sigma + float(np.sqrt(max(sig_sq - res, 0.0)))
    mapped = res / denom if denom > 0 else float(np.sqrt(res))
    return PowerResult(sigma, x, mapped, it)


def dense_extremes(K: int, mem_cap_gb: float = 1.0) -> tuple[float, float]:
    """(sigma_min, sigma_max) of the dense section, for oracle-scale K."""
    op = qk.build_operator(K)
    A = np.eye(op.dim) - qk.qk_dense(K, mem_cap_gb) + op.pinf.matrix()
    svals = np.linalg.svd(A, compute_uv=False)
    return float(svals[-1]), float(svals[0])


def spectrum_report(K: int, tol: float = 1e-8, seed=0,
                    max_iter: int = 20000) -> SpectrumReport:
    """Build the section at K and certify its extremal singular values."""
    op = qk.build_operator(K)

    def apply(x):
        return qk.matvec(op, x)

    def apply_t(x):
        return qk.matvec_transpose(op, x)

    def squared(x):
        return apply_t(apply(x))

    top = power_largest(squared, op.dim, tol=tol, max_iter=max_iter, seed=seed)
    sigma_max = float(np.sqrt(max(top.value, 0.0)))
    denom = sigma_max + float(np.sqrt(max(top.value - top.residual, 0.0)))
    res_max = top.residual / denom if denom > 0 else float(np.sqrt(top.residual))

    bottom = power_smallest_singular(
        apply, apply_t, op.dim, top.value + top.residual,
        tol=tol, max_iter=max_iter, seed=seed, avoid=top.vector,
    )
    return SpectrumReport(
        K=K,
        sigma_max=sigma_max,
        sigma_min=bottom.value,
        residual_max=res_max,
        residual_min=bottom.residual,
        iters_max=top.iters,
        iters_min=bottom.iters,
        condition_holds=bool(bottom.value - bottom.residual > 0.5),
    )
