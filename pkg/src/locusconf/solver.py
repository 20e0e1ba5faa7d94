"""Equilibrium of the charged trigonometric Calogero-Moser system.

The energy is convex on the chamber of cyclically ordered angles and blows up
on its boundary, so the equilibrium is its unique minimiser once the rotation
is fixed by pinning ``theta_1 = 0``.  We minimise over the remaining ``n - 1``
angles with damped Newton steps, halving any step that leaves the chamber and
backtracking until the Armijo condition holds.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .arrangement import (
    COLLISION_THRESHOLD,
    TWO_PI,
    Arrangement,
    ChargedEnsemble,
    as_multiplicities,
    charges_from_multiplicities,
    wrap_angle,
)
from .exceptions import CollisionError, NonConvergenceError, SchemaError

logger = logging.getLogger(__name__)

#: smallest gap between neighbouring particles a trial step may leave
FEASIBILITY_GAP = 1e-10

GAUGE = {"fixed_index": 0, "value": 0.0}


@dataclass(frozen=True)
class SolverConfig:
    """Knobs for :func:`solve_equilibrium`.

    ``initializer`` is ``"equally_spaced"`` or a sequence of cyclically ordered
    starting angles (rotated so the first is 0 before use).
    """

    grad_tol: float = 1e-12
    max_iters: int = 200
    initializer: Union[str, Sequence[float]] = "equally_spaced"
    shrink: float = 0.5
    armijo: float = 1e-4
    max_halvings: int = 80

    def __post_init__(self):
        if not self.grad_tol > 0:
            raise ValueError("grad_tol must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")
        if not 0 < self.shrink < 1:
            raise ValueError("shrink must lie in (0, 1)")
        if not 0 < self.armijo < 0.5:
            raise ValueError("armijo must lie in (0, 0.5)")
        if isinstance(self.initializer, str):
            if self.initializer != "equally_spaced":
                raise ValueError(f"unknown initializer {self.initializer!r}")
        else:
            object.__setattr__(self, "initializer", tuple(float(t) for t in self.initializer))


@dataclass(frozen=True)
class IterationRecord:
    potential: float
    gradient_inf_norm: float
    step: float
    newton: bool
    thetas: tuple = ()


@dataclass(frozen=True)
class SolveResult:
    """Converged equilibrium.

    ``gradient_inf_norm`` is the stopping metric: the infinity norm of the
    reduced gradient divided by the largest charge product.
    """

    arrangement: Arrangement
    gradient_inf_norm: float
    iterations: int
    potential_value: float
    gauge: dict = field(default_factory=lambda: dict(GAUGE))
    hessian_min_eigenvalue: float = float("nan")
    trace: tuple = ()

    def to_dict(self) -> dict:
        out = self.arrangement.to_dict()
        out.update(
            gradient_inf_norm=self.gradient_inf_norm,
            iterations=self.iterations,
            potential=self.potential_value,
            gauge=dict(self.gauge),
            hessian_min_eigenvalue=self.hessian_min_eigenvalue,
        )
        return out


def _pair_matrices(thetas: np.ndarray):
    half = (thetas[None, :] - thetas[:, None]) / 2
    s = np.sin(half)
    c = np.cos(half)
    np.fill_diagonal(s, 1.0)
    np.fill_diagonal(c, 0.0)
    if np.any(np.abs(s) < COLLISION_THRESHOLD):
        raise CollisionError("particles collide")
    return s, c


def _energy(thetas: np.ndarray, q: np.ndarray) -> float:
    s, _ = _pair_matrices(thetas)
    qq = np.outer(q, q)
    np.fill_diagonal(qq, 0.0)
    return float(np.sum(qq / s**2))


def _full_gradient(thetas: np.ndarray, q: np.ndarray) -> np.ndarray:
    s, c = _pair_matrices(thetas)
    qq = np.outer(q, q)
    np.fill_diagonal(qq, 0.0)
    return 2.0 * np.sum(qq * c / s**3, axis=1)


def _full_hessian(thetas: np.ndarray, q: np.ndarray) -> np.ndarray:
    # second derivative of 1/sin^2(t/2) is (1 + 2 cos^2(t/2)) / (2 sin^4(t/2));
    # each unordered pair appears twice in the energy
    s, c = _pair_matrices(thetas)
    qq = np.outer(q, q)
    np.fill_diagonal(qq, 0.0)
    w = np.triu(qq * (1 + 2 * c**2) / s**4, 1)
    w = w + w.T  # exactly symmetric
    h = -w
    np.fill_diagonal(h, np.sum(w, axis=1))
    return h


def _energy_change(thetas: np.ndarray, step: np.ndarray, q: np.ndarray) -> float:
    """``E(thetas + step) - E(thetas)`` without cancellation.

    Uses ``1/sin^2 a - 1/sin^2 b = sin(b - a) sin(b + a) / (sin^2 a sin^2 b)`` so
    the change stays accurate even when it is far below the energy's rounding.
    """
    a = ((thetas + step)[None, :] - (thetas + step)[:, None]) / 2
    b = (thetas[None, :] - thetas[:, None]) / 2
    b_minus_a = -(step[None, :] - step[:, None]) / 2
    sa, sb = np.sin(a), np.sin(b)
    np.fill_diagonal(sa, 1.0)
    np.fill_diagonal(sb, 1.0)
    qq = np.outer(q, q)
    np.fill_diagonal(qq, 0.0)
    return float(np.sum(qq * np.sin(b_minus_a) * np.sin(b + a) / (sa**2 * sb**2)))


def reduced_gradient(ensemble) -> np.ndarray:
    """Partial derivatives of the energy in ``theta_2..theta_n`` (``theta_1`` pinned)."""
    e = ensemble.ensemble if isinstance(ensemble, Arrangement) else ensemble
    return _full_gradient(e.theta_array(), e.charge_array())[1:]


def reduced_hessian(ensemble) -> np.ndarray:
    """Hessian of the energy in ``theta_2..theta_n``; positive definite inside the chamber."""
    e = ensemble.ensemble if isinstance(ensemble, Arrangement) else ensemble
    return _full_hessian(e.theta_array(), e.charge_array())[1:, 1:]


def canonical_rotation(arrangement: Arrangement) -> Arrangement:
    """Rotate so the first line sits at angle 0."""
    t = np.asarray(arrangement.thetas)
    rotated = wrap_angle(t - t[0])
    rotated[0] = 0.0
    return Arrangement.from_angles(rotated.tolist(), arrangement.mults)


def equally_spaced(n: int) -> np.ndarray:
    return TWO_PI * np.arange(n) / n


def _feasible(thetas: np.ndarray) -> bool:
    gaps = np.diff(np.append(thetas, TWO_PI))
    return bool(thetas[0] == 0.0 and np.all(gaps > FEASIBILITY_GAP))


def _initial_point(n: int, cfg: SolverConfig) -> np.ndarray:
    if cfg.initializer == "equally_spaced":
        return equally_spaced(n)
    t = np.asarray(cfg.initializer, dtype=float)
    if len(t) != n:
        raise SchemaError(f"initial angles have length {len(t)}, expected {n}")
    t = wrap_angle(t - t[0])
    t[0] = 0.0
    if not _feasible(t):
        raise SchemaError("initial angles are not strictly cyclically ordered")
    return t


def solve_equilibrium(m, cfg: SolverConfig | None = None) -> SolveResult:
    """Unique equilibrium (up to rotation) for the cyclic multiplicity list ``m``.

    Raises :class:`NonConvergenceError` if the stopping metric is not reached
    within ``cfg.max_iters`` Newton iterations.
    """
    cfg = cfg or SolverConfig()
    m = as_multiplicities(m)
    n = len(m)
    q = np.array(charges_from_multiplicities(m), dtype=float)
    qq_max = float(np.max(np.outer(q, q)[~np.eye(n, dtype=bool)]))

    theta = _initial_point(n, cfg)
    trace = []
    iterations = 0
    while True:
        grad = _full_gradient(theta, q)[1:]
        metric = float(np.max(np.abs(grad))) / qq_max
        if metric <= cfg.grad_tol:
            break
        if iterations >= cfg.max_iters:
            raise NonConvergenceError(
                f"no convergence after {iterations} iterations (metric {metric:.3e})",
                thetas=theta.tolist(),
                gradient_inf_norm=metric,
                iterations=iterations,
            )

        hess = _full_hessian(theta, q)[1:, 1:]
        newton = True
        try:
            direction = -np.linalg.solve(hess, grad)
            if not np.all(np.isfinite(direction)) or grad @ direction >= 0:
                raise np.linalg.LinAlgError("not a descent direction")
        except np.linalg.LinAlgError:
            newton = False
            direction = -grad / max(float(np.max(np.abs(grad))), 1.0)

        step = np.concatenate(([0.0], direction))
        t = 1.0
        halvings = 0
        while not _feasible(theta + t * step):
            t *= cfg.shrink
            halvings += 1
            if halvings > cfg.max_halvings:
                raise NonConvergenceError("no feasible step", theta.tolist(), metric, iterations)
        slope = float(grad @ direction)
        while True:
            change = _energy_change(theta, t * step, q)
            if change <= cfg.armijo * t * slope:
                break
            t *= cfg.shrink
            halvings += 1
            if halvings > cfg.max_halvings:
                raise NonConvergenceError(
                    f"line search stalled (metric {metric:.3e})", theta.tolist(), metric, iterations
                )
        theta = theta + t * step
        iterations += 1
        trace.append(IterationRecord(_energy(theta, q), metric, t, newton, tuple(theta.tolist())))
        logger.debug("iter %d: step %.3g metric %.3e", iterations, t, metric)

    hess = _full_hessian(theta, q)[1:, 1:]
    arrangement = Arrangement(ChargedEnsemble(tuple(theta.tolist()), tuple(int(v) for v in q)), m)
    return SolveResult(
        arrangement=arrangement,
        gradient_inf_norm=metric,
        iterations=iterations,
        potential_value=_energy(theta, q),
        hessian_min_eigenvalue=float(np.linalg.eigvalsh(hess)[0]),
        trace=tuple(trace),
    )
