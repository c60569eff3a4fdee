"""Interpolating dual certificates.

Given an atomic measure with unit-modulus signs, build the trigonometric
polynomial eta(theta) = sum_j a_j D(theta - tau_j) + b_j D'(theta - tau_j)
(D the centered Dirichlet kernel of cutoff n) satisfying eta(tau_j) = sign_j
and eta'(tau_j) = 0, then verify |eta| < 1 away from the atoms on a dense
grid with a Lipschitz safety margin.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import trigpoly as tp


class SeparationTooSmall(ValueError):
    """The atoms are too close for the interpolation system to be provably invertible."""


class SingularSystem(ArithmeticError):
    """The interpolation system could not be factorized."""


@dataclass(frozen=True)
class AtomicMeasure:
    """Atoms tau_j in [0,1) with unit-modulus complex signs, at cutoff n."""

    n: int
    atoms: np.ndarray
    signs: np.ndarray

    def __post_init__(self):
        atoms = np.atleast_1d(np.asarray(self.atoms, dtype=float))
        signs = np.atleast_1d(np.asarray(self.signs, dtype=np.complex128))
        if self.n < 1:
            raise ValueError("cutoff n must be a positive integer")
        if atoms.shape != signs.shape or atoms.ndim != 1:
            raise ValueError("atoms and signs must be matching 1-d arrays")
        # the empty measure is legal (projector/Gram paths use it); the
        # certificate solver separately requires at least one atom
        if np.any((atoms < 0) | (atoms >= 1)):
            raise ValueError("atom positions must lie in [0, 1)")
        if atoms.size and np.max(np.abs(np.abs(signs) - 1.0)) > 1e-12:
            raise ValueError("signs must have unit modulus")
        if atoms.size > 1:
            d = _pairwise_wrap_dist(atoms)
            if np.min(d) <= 0:
                raise ValueError("atom positions must be pairwise distinct modulo 1")
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "signs", signs)

    @property
    def size(self) -> int:
        return self.atoms.size

    @property
    def separation(self) -> float:
        """Minimum wrap-around distance between atoms (inf for a single atom)."""
        if self.size < 2:
            return np.inf
        return float(np.min(_pairwise_wrap_dist(self.atoms)))


def _pairwise_wrap_dist(atoms):
    diff = np.abs(atoms[:, None] - atoms[None, :]) % 1.0
    d = np.minimum(diff, 1.0 - diff)
    return d[np.triu_indices(atoms.size, k=1)]


def measure_from_json(doc) -> AtomicMeasure:
    """Build a measure from {"n": int, "atoms": [{"position": p, "sign": [re, im]}]}."""
    if isinstance(doc, (str, bytes)):
        doc = json.loads(doc)
    try:
        n = int(doc["n"])
        atoms = [float(a["position"]) for a in doc["atoms"]]
        signs = [complex(a["sign"][0], a["sign"][1]) for a in doc["atoms"]]
    except (KeyError, TypeError, IndexError) as exc:
        raise ValueError(f"malformed measure document: {exc}") from exc
    return AtomicMeasure(n, np.array(atoms), np.array(signs))


@dataclass(frozen=True)
class Certificate:
    """Solved certificate coefficients for a measure."""

    measure: AtomicMeasure
    a: np.ndarray
    b: np.ndarray
    n: int


def _gamma(n: int) -> float:
    # sqrt of |second derivative at 0| of the centered kernel
    return float(np.sqrt(4 * np.pi**2 * n * (n + 1) / 3))


def _kernel_blocks(m: AtomicMeasure):
    spec = tp.DirichletSpec(m.n)
    diffs = m.atoms[:, None] - m.atoms[None, :]
    return tuple(tp.dirichlet_deriv(spec, diffs, k) for k in (0, 1, 2))


def build_system(m: AtomicMeasure):
    """Interpolation system in the scaled unknowns (a, gamma*b).

    Block form [[D0, D1/g], [-D1/g, -D2/g^2]] with g = sqrt(|D''(0)|); the
    single-atom case reduces to the identity. Right-hand side is (signs, 0).
    """
    if m.size == 0:
        raise ValueError("need at least one atom to build the interpolation system")
    D0, D1, D2 = _kernel_blocks(m)
    g = _gamma(m.n)
    top = np.hstack([D0, D1 / g])
    bot = np.hstack([-D1 / g, -D2 / g**2])
    matrix = np.vstack([top, bot]).astype(np.complex128)
    rhs = np.concatenate([m.signs, np.zeros(m.size, dtype=np.complex128)])
    return matrix, rhs


def _log_s(size: int) -> float:
    return float(np.log(size)) if size > 1 else 0.0


def system_norm_bounds(m: AtomicMeasure) -> dict:
    """Row-sum (Gershgorin) bounds on the deviation of the system from the identity.

    Keys b0, b1, b2 bound the three kernel blocks; operator_norm bounds the
    whole system's deviation and must stay below 1 for a safe Neumann-series
    inversion argument.
    """
    logS = _log_s(m.size)
    if logS == 0.0:
        return {"b0": 0.0, "b1": 0.0, "b2": 0.0, "operator_norm": 0.0}
    delta_n = m.separation * m.n
    b0 = logS / (4 * delta_n)
    b1 = np.sqrt(3) * logS / delta_n
    b2 = 9 * logS / (4 * delta_n)
    return {"b0": b0, "b1": b1, "b2": b2, "operator_norm": max(b0 + b1, b1 + b2)}


def coefficient_bounds(m: AtomicMeasure) -> dict:
    """Bounds on the solved certificate coefficients.

    a_bound = 1 + eps1 with eps1 the closed-form row-sum estimate in terms of
    (|S|, n, separation). gamma_b_bound comes from the block elimination
    b = -D2^{-1} D1 (D0 - D1 D2^{-1} D1)^{-1} v, whose infinity norms are
    computed from the actual kernel matrices, so it holds by
    submultiplicativity whenever the Schur complement is invertible.
    """
    logS = _log_s(m.size)
    if logS == 0.0:
        return {"eps1": 0.0, "a_bound": 1.0, "gamma_b_bound": 0.0}
    r = logS / (m.separation * m.n)
    if 9 * r / 4 >= 1.0:
        return {"eps1": np.inf, "a_bound": np.inf, "gamma_b_bound": np.inf}
    h = 1.0 / (1.0 - 9 * r / 4)
    eps1 = r / 4 + 3 * r**2 * h

    D0, D1, D2 = _kernel_blocks(m)
    d2inv_d1 = np.linalg.solve(D2, D1)
    schur_inv = np.linalg.inv(D0 - D1 @ d2inv_d1)
    gb = _gamma(m.n) * np.linalg.norm(d2inv_d1, np.inf) * np.linalg.norm(schur_inv, np.inf)
    return {"eps1": eps1, "a_bound": 1.0 + eps1, "gamma_b_bound": float(gb)}


def solve_certificate(m: AtomicMeasure) -> Certificate:
    bounds = system_norm_bounds(m)
    if bounds["operator_norm"] >= 1.0:
        raise SeparationTooSmall(
            f"deviation bound {bounds['operator_norm']:.3f} >= 1 "
            f"(separation {m.separation:.4g} at n={m.n})"
        )
    matrix, rhs = build_system(m)
    try:
        sol = np.linalg.solve(matrix, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(str(exc)) from exc
    if not np.all(np.isfinite(sol)):
        raise SingularSystem("non-finite solution")
    S = m.size
    g = _gamma(m.n)
    return Certificate(measure=m, a=sol[:S], b=sol[S:] / g, n=m.n)


def eval_eta(c: Certificate, theta, deriv_order: int = 0):
    """Evaluate eta or one of its first two derivatives at theta (scalar or array)."""
    if deriv_order not in (0, 1, 2):
        raise ValueError("deriv_order must be 0, 1 or 2")
    spec = tp.DirichletSpec(c.n)
    th = np.atleast_1d(np.asarray(theta, dtype=float))
    out = np.zeros(th.shape, dtype=np.complex128)
    for tau, aj, bj in zip(c.measure.atoms, c.a, c.b):
        out += aj * tp.dirichlet_deriv(spec, th - tau, deriv_order)
        out += bj * tp.dirichlet_deriv(spec, th - tau, deriv_order + 1)
    if np.isscalar(theta) or np.ndim(theta) == 0:
        return complex(out[0])
    return out


def eta_coeffs(c: Certificate) -> tp.TrigPoly:
    """Coefficient array of eta: c_k = (1/(2n+1)) sum_j (a_j + 2 i pi k b_j) e^{-2 i pi k tau_j}."""
    n = c.n
    k = np.arange(-n, n + 1)
    phases = np.exp(-2j * np.pi * np.outer(k, c.measure.atoms))
    ck = (phases @ c.a + 2j * np.pi * k * (phases @ c.b)) / (2 * n + 1)
    return tp.TrigPoly(n, ck)


def verify_bounded(c: Certificate, grid_mult: int = 10) -> dict:
    """Check |eta| < 1 away from the atoms.

    Samples |eta| on grid_mult*(2n+1) points, excludes a radius-1/n
    neighborhood of each atom (main lobe plus first sidelobe), and adds the
    crude Lipschitz slack pi*n*max|c_k|/grid_mult covering the gap between
    adjacent samples. certified is True when grid max + slack < 1.
    """
    if grid_mult < 4:
        raise ValueError("grid_mult must be at least 4")
    n = c.n
    G = grid_mult * (2 * n + 1)
    theta = np.arange(G) / G
    vals = np.abs(eval_eta(c, theta))

    dist = np.abs(theta[:, None] - c.measure.atoms[None, :]) % 1.0
    dist = np.minimum(dist, 1.0 - dist)
    off = np.min(dist, axis=1) > 1.0 / n

    max_c = float(np.max(np.abs(eta_coeffs(c).coeffs)))
    slack = np.pi * n * max_c / grid_mult

    if not np.any(off):
        return {"sup_off_atom": np.nan, "argmax": np.nan, "certified": False}
    idx = np.argmax(np.where(off, vals, -np.inf))
    sup_off = float(vals[idx])
    return {
        "sup_off_atom": sup_off,
        "argmax": float(theta[idx]),
        "certified": bool(sup_off + slack < 1.0),
    }


def neumann_bounds(m: AtomicMeasure) -> dict:
    """Measured deviations of the interpolation system from the identity, next
    to their closed-form counterparts.

    Every entry is {"measured": x, "bound": y} with x computed from the
    actual kernel matrices (induced infinity norms) and y the analytic
    row-sum bound in terms of (|S|, n, separation).
    """
    n = m.n
    S = m.size
    D0, D1, D2 = _kernel_blocks(m)
    g2 = _gamma(n) ** 2
    eye = np.eye(S)

    k = np.arange(-n, n + 1)
    U = np.exp(2j * np.pi * np.outer(k, m.atoms))
    gram = U.conj().T @ U / (2 * n + 1)
    dev_uu = float(np.linalg.norm(eye - gram, np.inf))

    meas_d0 = float(np.linalg.norm(D0 - eye, np.inf))
    meas_d1 = float(np.linalg.norm(D1, np.inf)) / _gamma(n)
    meas_d2 = float(np.linalg.norm(-D2 / g2 - eye, np.inf))

    matrix, _ = build_system(m)
    meas_op = float(np.linalg.norm(np.eye(2 * S) - matrix, np.inf))

    logS = _log_s(S)
    if logS == 0.0:
        dev_bound = b0 = b1 = b2 = op_bound = 0.0
    else:
        delta = m.separation
        dev_bound = 2 * logS / ((2 * n + 1) * delta)
        nb = system_norm_bounds(m)
        b0, b1, b2, op_bound = nb["b0"], nb["b1"], nb["b2"], nb["operator_norm"]

    return {
        "dev_UU": {"measured": dev_uu, "bound": dev_bound},
        "bound_D0": {"measured": meas_d0, "bound": b0},
        "bound_D1": {"measured": meas_d1, "bound": b1},
        "bound_D2": {"measured": meas_d2, "bound": b2},
        "operator_norm": {"measured": meas_op, "bound": op_bound},
    }
