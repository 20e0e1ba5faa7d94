"""Independent checks for the solver: finite differences, symmetric-ansatz
bisection and multi-start uniqueness.

Nothing here calls the solver's gradient or Hessian kernels.  The finite
difference routines only touch the energy and force from
:mod:`locusconf.arrangement`; the family oracles write out their own scalar
force balance.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .arrangement import TWO_PI, ChargedEnsemble, as_multiplicities, cm_force, cm_potential, wrap_angle
from .exceptions import LocusConfError
from .solver import SolverConfig, canonical_rotation, solve_equilibrium

MIN_RANDOM_GAP = 1e-3


class BracketError(LocusConfError, ValueError):
    """No sign change over the bisection bracket."""


@dataclass(frozen=True)
class BisectionProblem:
    residual: Callable[[float], float]
    lo: float
    hi: float
    tol: float = 1e-14

    def __post_init__(self):
        if not self.residual(self.lo) * self.residual(self.hi) < 0:
            raise BracketError(f"no sign change on [{self.lo}, {self.hi}]")


def bisect(problem: BisectionProblem) -> float:
    """Plain bisection down to ``tol`` or until the midpoint stops moving."""
    lo, hi = problem.lo, problem.hi
    f_lo = problem.residual(lo)
    while hi - lo > problem.tol:
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        f_mid = problem.residual(mid)
        if f_mid == 0.0:
            return mid
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _pull(q: float, half_gap: float) -> float:
    # force from a charge q at signed half-gap (other - self)/2
    return q * math.cos(half_gap) / math.sin(half_gap) ** 3


def a2_residual(m: int) -> Callable[[float], float]:
    """Force on the particle at ``phi`` for the ansatz ``(0, phi, 2pi - phi)``,
    charges ``(m(m+1), 2, 2)``."""
    q = m * (m + 1)
    return lambda phi: _pull(q, -phi / 2) + _pull(2, math.pi - phi)


def solve_A2_family(m: int, tol: float = 1e-14) -> float:
    """Angle ``phi`` of the equilibrium ``(0, phi, 2pi - phi)`` for multiplicities ``(m, 1, 1)``.

    The reflection through the heavy line swaps the two light lines, so the
    unique equilibrium must be symmetric and a single unknown remains.
    """
    if m < 1:
        raise ValueError("m must be positive")
    if m == 1:
        return TWO_PI / 3
    return bisect(BisectionProblem(a2_residual(m), 1e-6, math.pi - 1e-6, tol))


def c2_residual(m: int, l: int) -> Callable[[float], float]:
    """Force on the particle at ``phi`` for the ansatz ``(0, phi, pi, 2pi - phi)``,
    charges ``(m(m+1), 2, l(l+1), 2)``."""
    qm, ql = m * (m + 1), l * (l + 1)
    return lambda phi: _pull(qm, -phi / 2) + _pull(ql, (math.pi - phi) / 2) + _pull(2, math.pi - phi)


def solve_C2_family(m: int, l: int, tol: float = 1e-14):
    """``(phi, pi)``: free angle and the fixed angle of the line of multiplicity ``l``
    in the equilibrium ``(0, phi, pi, 2pi - phi)`` for multiplicities ``(m, 1, l, 1)``."""
    if m < 1 or l < 1:
        raise ValueError("m and l must be positive")
    if m == l:
        return math.pi / 2, math.pi
    return bisect(BisectionProblem(c2_residual(m, l), 1e-6, math.pi - 1e-6, tol)), math.pi


def a2_angles(m: int) -> np.ndarray:
    phi = solve_A2_family(m)
    return np.array([0.0, phi, TWO_PI - phi])


def c2_angles(m: int, l: int) -> np.ndarray:
    phi, mid = solve_C2_family(m, l)
    return np.array([0.0, phi, mid, TWO_PI - phi])


def fd_gradient(ensemble: ChargedEnsemble, h: float = 1e-6) -> np.ndarray:
    """Central differences of the energy in each angle."""
    if not h > 0:
        raise ValueError("h must be positive")
    t = ensemble.theta_array()
    out = np.empty(ensemble.n)
    for i in range(ensemble.n):
        out[i] = (_shifted_energy(t, ensemble.charges, i, h) - _shifted_energy(t, ensemble.charges, i, -h)) / (2 * h)
    return out


def _shifted_energy(t, charges, i, h):
    s = t.copy()
    s[i] += h
    # the shifted angle may leave [0, 2pi); the energy is 2pi periodic
    s = np.mod(s, TWO_PI)
    order = np.argsort(s, kind="stable")
    return cm_potential(ChargedEnsemble(tuple(s[order]), tuple(np.asarray(charges)[order])))


def fd_reduced_hessian(ensemble: ChargedEnsemble, h: float = 1e-6) -> np.ndarray:
    """Central differences of the gradient ``2 * cm_force`` in ``theta_2..theta_n``."""
    t = ensemble.theta_array()
    n = ensemble.n
    out = np.empty((n - 1, n - 1))
    for col in range(1, n):
        plus = _shifted_forces(t, ensemble.charges, col, h)
        minus = _shifted_forces(t, ensemble.charges, col, -h)
        out[:, col - 1] = 2 * (plus - minus)[1:] / (2 * h)
    return out


def _shifted_forces(t, charges, i, h):
    s = t.copy()
    s[i] += h
    s = np.mod(s, TWO_PI)
    order = np.argsort(s, kind="stable")
    e = ChargedEnsemble(tuple(s[order]), tuple(np.asarray(charges)[order]))
    forces = np.array([cm_force(e, k) for k in range(e.n)])
    back = np.empty_like(forces)
    back[order] = forces
    return back


def relative_error(approx, exact) -> float:
    """Infinity-norm error relative to the infinity norm of ``exact``."""
    approx, exact = np.asarray(approx, float), np.asarray(exact, float)
    scale = float(np.max(np.abs(exact)))
    err = float(np.max(np.abs(approx - exact)))
    return err / scale if scale > 0 else err


def random_ordered_angles(n: int, rng: np.random.Generator, min_gap: float = MIN_RANDOM_GAP) -> np.ndarray:
    """Sorted uniform angles with the first reset to 0 and every cyclic gap at least ``min_gap``."""
    if n * min_gap >= TWO_PI:
        raise ValueError("min_gap too large for n angles")
    while True:
        t = np.concatenate(([0.0], np.sort(rng.uniform(0.0, TWO_PI, n - 1))))
        if np.all(np.diff(np.append(t, TWO_PI)) >= min_gap):
            return t


def random_ensemble(rng: np.random.Generator, n: int, max_mult: int, min_gap: float = MIN_RANDOM_GAP):
    """Random ordered ensemble at a random rotation, charges from multiplicities up to ``max_mult``."""
    t = random_ordered_angles(n, rng, min_gap)
    t = wrap_angle(t + rng.uniform(0.0, TWO_PI))
    m = rng.integers(1, max_mult + 1, size=n)
    order = np.argsort(t)
    t, m = t[order], m[order]
    return ChargedEnsemble(tuple(t), tuple(int(v * (v + 1)) for v in m)), tuple(int(v) for v in m)


def multistart_uniqueness(m, trials: int = 20, seed: int = 0, cfg=None) -> float:
    """Largest per-angle disagreement between solves from ``trials`` random starts,
    after rotating each result to put the first line at 0."""
    if trials < 2:
        raise ValueError("trials must be at least 2")
    m = as_multiplicities(m)
    rng = np.random.default_rng(seed)
    base = cfg or SolverConfig()
    results = []
    for _ in range(trials):
        start = random_ordered_angles(len(m), rng)
        run = solve_equilibrium(
            m,
            SolverConfig(
                grad_tol=base.grad_tol,
                max_iters=base.max_iters,
                initializer=tuple(start),
                shrink=base.shrink,
                armijo=base.armijo,
            ),
        )
        results.append(np.asarray(canonical_rotation(run.arrangement).thetas))
    worst = 0.0
    for a in range(trials):
        for b in range(a + 1, trials):
            d = np.abs(results[a] - results[b])
            worst = max(worst, float(np.max(np.minimum(d, TWO_PI - d))))
    return worst


# Suites behind ``locusconf check``.

UNIQUENESS_LISTS = ((1, 1, 1), (2, 1, 1, 1), (3, 1, 2, 1), (2, 2, 1, 1, 1, 1))
GRADIENT_MIN_GAP = 0.25


@dataclass(frozen=True)
class CheckRow:
    name: str
    value: float
    tolerance: float
    passed: bool

    def to_dict(self) -> dict:
        return {"name": self.name, "value": self.value, "tolerance": self.tolerance, "passed": self.passed}


def _row(name, value, tol):
    return CheckRow(name, float(value), tol, bool(value < tol))


def gradient_suite(seed: int = 0, samples: int = 100) -> list:
    """Force against finite differences of the energy on random ensembles."""
    rng = np.random.default_rng(seed)
    worst_fd = worst_sum = 0.0
    for _ in range(samples):
        n = int(rng.integers(2, 9))
        ens, _ = random_ensemble(rng, n, 4, GRADIENT_MIN_GAP)
        grad = 2 * np.array([cm_force(ens, i) for i in range(n)])
        worst_fd = max(worst_fd, relative_error(fd_gradient(ens), grad))
        worst_sum = max(worst_sum, abs(float(np.sum(grad))))
    return [
        _row(f"2*force vs central differences ({samples} ensembles)", worst_fd, 1e-6),
        _row("gradient sums to zero", worst_sum, 1e-9),
    ]


def family_suite() -> list:
    """Solver output against the symmetric-ansatz bisection oracles."""
    rows = []
    for m in range(1, 6):
        got = np.asarray(solve_equilibrium((m, 1, 1)).arrangement.thetas)
        rows.append(_row(f"A2 m={m}", np.max(np.abs(got - a2_angles(m))), 1e-10))
    for m in range(1, 5):
        for l in range(1, 5):
            got = np.asarray(solve_equilibrium((m, 1, l, 1)).arrangement.thetas)
            rows.append(_row(f"C2 m={m} l={l}", np.max(np.abs(got - c2_angles(m, l))), 1e-10))
    return rows


def uniqueness_suite(seed: int = 0, trials: int = 20) -> list:
    return [
        _row(f"unique equilibrium {m}", multistart_uniqueness(m, trials, seed), 1e-8)
        for m in UNIQUENESS_LISTS
    ]


SUITES = {"gradients": gradient_suite, "families": family_suite, "uniqueness": uniqueness_suite}
