"""Arrangements of lines in the real plane and their charged particle ensembles.

A line through the origin with unit normal ``(cos(t/2), sin(t/2))`` is encoded
by the particle angle ``t`` in ``[0, 2*pi)``.  The particle picture lives on the
double cover: the line itself sits at visual angle ``t/2``.  A line of
multiplicity ``m`` carries the charge ``q = m(m+1)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .exceptions import CollisionError, SchemaError, SingularityError

TWO_PI = 2.0 * math.pi

#: ``|sin((theta_j - theta_i)/2)|`` below this is treated as a collision.
COLLISION_THRESHOLD = 1e-12

# relative residuals whose every term vanishes to rounding are reported as 0
_DEGENERATE_SCALE = 64 * np.finfo(float).eps


@dataclass(frozen=True)
class MultiplicityList:
    """Cyclic list of positive integer multiplicities.

    Indexing is cyclic: ``m[i]`` means ``m[i mod n]``.
    """

    values: tuple

    def __post_init__(self):
        vals = tuple(self.values)
        if len(vals) < 2:
            raise SchemaError(f"need at least 2 multiplicities, got {len(vals)}")
        for v in vals:
            if isinstance(v, bool) or int(v) != v or int(v) < 1:
                raise SchemaError(f"multiplicities must be positive integers, got {v!r}")
        object.__setattr__(self, "values", tuple(int(v) for v in vals))

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, i: int) -> int:
        return self.values[i % len(self.values)]

    def __iter__(self) -> Iterator[int]:
        return iter(self.values)

    def charges(self) -> tuple:
        return charges_from_multiplicities(self)


def as_multiplicities(m) -> MultiplicityList:
    if isinstance(m, MultiplicityList):
        return m
    return MultiplicityList(tuple(m))


def charges_from_multiplicities(m) -> tuple:
    """Charges ``q_i = m_i (m_i + 1)``, in the same cyclic order."""
    m = as_multiplicities(m)
    return tuple(v * (v + 1) for v in m)


def is_cyclically_ordered(thetas: Sequence[float]) -> bool:
    """True if the angles increase around the circle, starting from some index."""
    t = np.asarray(thetas, dtype=float)
    n = len(t)
    if n < 2:
        return True
    descents = int(np.sum(np.roll(t, -1) <= t))
    # distinct angles read cyclically have exactly one wrap-around descent
    return descents == 1


@dataclass(frozen=True)
class ChargedEnsemble:
    """Charged particles at angles ``thetas`` on the circle."""

    thetas: tuple
    charges: tuple

    def __post_init__(self):
        thetas = tuple(float(t) for t in self.thetas)
        charges = tuple(self.charges)
        if len(thetas) != len(charges):
            raise SchemaError("thetas and charges differ in length")
        if len(thetas) < 2:
            raise SchemaError("an ensemble needs at least 2 particles")
        for t in thetas:
            if not (0.0 <= t < TWO_PI) or not math.isfinite(t):
                raise SchemaError(f"angle {t!r} outside [0, 2pi)")
        for q in charges:
            if isinstance(q, bool) or int(q) != q or int(q) < 1:
                raise SchemaError(f"charges must be positive integers, got {q!r}")
        if len(set(thetas)) != len(thetas):
            raise CollisionError("angles must be pairwise distinct")
        if not is_cyclically_ordered(thetas):
            raise SchemaError("angles are not cyclically ordered")
        object.__setattr__(self, "thetas", thetas)
        object.__setattr__(self, "charges", tuple(int(q) for q in charges))

    @property
    def n(self) -> int:
        return len(self.thetas)

    def theta_array(self) -> np.ndarray:
        return np.array(self.thetas)

    def charge_array(self) -> np.ndarray:
        return np.array(self.charges, dtype=float)


@dataclass(frozen=True)
class Arrangement:
    """A real central line arrangement in the plane, with multiplicities."""

    ensemble: ChargedEnsemble
    mults: MultiplicityList

    def __post_init__(self):
        mults = as_multiplicities(self.mults)
        object.__setattr__(self, "mults", mults)
        if len(mults) != self.ensemble.n:
            raise SchemaError("multiplicities and angles differ in length")
        if tuple(self.ensemble.charges) != charges_from_multiplicities(mults):
            raise SchemaError("charges must equal m(m+1) for every line")

    @classmethod
    def from_angles(cls, thetas: Sequence[float], mults) -> "Arrangement":
        mults = as_multiplicities(mults)
        return cls(ChargedEnsemble(tuple(thetas), charges_from_multiplicities(mults)), mults)

    @property
    def n(self) -> int:
        return self.ensemble.n

    @property
    def thetas(self) -> tuple:
        return self.ensemble.thetas

    @property
    def charges(self) -> tuple:
        return self.ensemble.charges

    def normals(self) -> np.ndarray:
        return np.array([normal_vector(t) for t in self.thetas])

    def to_dict(self) -> dict:
        return {"multiplicities": list(self.mults.values), "thetas": [float(t) for t in self.thetas]}

    @classmethod
    def from_dict(cls, data) -> "Arrangement":
        if not isinstance(data, dict):
            raise SchemaError("arrangement JSON must be an object")
        try:
            mults = data["multiplicities"]
            thetas = data["thetas"]
        except KeyError as exc:
            raise SchemaError(f"missing key {exc.args[0]!r}") from None
        if not isinstance(mults, list) or not isinstance(thetas, list):
            raise SchemaError("'multiplicities' and 'thetas' must be lists")
        if len(mults) != len(thetas):
            raise SchemaError("'multiplicities' and 'thetas' differ in length")
        for t in thetas:
            if isinstance(t, bool) or not isinstance(t, (int, float)):
                raise SchemaError(f"angle {t!r} is not a number")
        for v in mults:
            if isinstance(v, bool) or not isinstance(v, int):
                raise SchemaError(f"multiplicity {v!r} is not an integer")
        return cls.from_angles(thetas, mults)


def normal_vector(theta: float) -> np.ndarray:
    return np.array([math.cos(theta / 2), math.sin(theta / 2)])


def spanning_vector(theta: float) -> np.ndarray:
    return np.array([-math.sin(theta / 2), math.cos(theta / 2)])


def wrap_angle(theta):
    """Representative of ``theta`` in ``[0, 2*pi)``."""
    w = np.mod(theta, TWO_PI)
    # np.mod can round up to exactly 2*pi for tiny negative inputs
    return np.where(w >= TWO_PI, 0.0, w)


def _ensemble(e) -> ChargedEnsemble:
    return e.ensemble if isinstance(e, Arrangement) else e


def _half_gaps(thetas: np.ndarray):
    """Matrices of sin and cos of ``(theta_j - theta_i)/2``, indexed ``[i, j]``."""
    half = (thetas[None, :] - thetas[:, None]) / 2
    s = np.sin(half)
    c = np.cos(half)
    off = ~np.eye(len(thetas), dtype=bool)
    if np.any(np.abs(s[off]) < COLLISION_THRESHOLD):
        i, j = np.argwhere((np.abs(s) < COLLISION_THRESHOLD) & off)[0]
        raise CollisionError(f"particles {i} and {j} collide")
    return s, c


def locus_terms(ensemble: ChargedEnsemble, i: int, k: int):
    """Terms of the order-``k`` locus sum at line ``i``.

    Returns ``(terms, scale)`` where ``terms[j] = q_j cos^(2k-1)/sin^(2k+1)`` of
    ``(theta_j - theta_i)/2`` for ``j != i`` and ``scale`` is the same sum with the
    cosine factors dropped, which bounds ``sum(|terms|)`` from above.
    """
    e = _ensemble(ensemble)
    t = e.theta_array()
    q = e.charge_array()
    others = np.arange(e.n) != i
    half = (t[others] - t[i]) / 2
    s = np.sin(half)
    c = np.cos(half)
    if np.any(np.abs(s) < COLLISION_THRESHOLD):
        raise CollisionError(f"particle {i} collides with a neighbour")
    terms = q[others] * c ** (2 * k - 1) / s ** (2 * k + 1)
    scale = float(np.sum(q[others] / np.abs(s) ** (2 * k + 1)))
    return terms, scale


def relative_magnitude(residual: float, terms: np.ndarray, scale: float) -> float:
    """``|residual| / sum(|terms|)``, or 0 when every term is rounding noise."""
    mag = float(np.sum(np.abs(terms)))
    if mag <= _DEGENERATE_SCALE * scale:
        return 0.0
    return abs(residual) / mag


def cm_potential(ensemble) -> float:
    """Charged trigonometric Calogero-Moser energy, summed over ordered pairs."""
    e = _ensemble(ensemble)
    s, _ = _half_gaps(e.theta_array())
    q = e.charge_array()
    off = ~np.eye(e.n, dtype=bool)
    qq = np.outer(q, q)
    return float(np.sum(qq[off] / s[off] ** 2))


def cm_force(ensemble, i: int) -> float:
    """Force on particle ``i``: ``q_i sum_j q_j cos/sin^3`` of the half gaps.

    The derivative of :func:`cm_potential` in ``theta_i`` is twice this, since
    the potential counts every pair in both orders.
    """
    e = _ensemble(ensemble)
    terms, _ = locus_terms(e, i, 1)
    return e.charges[i] * float(np.sum(terms))


def cm_forces(ensemble) -> np.ndarray:
    e = _ensemble(ensemble)
    return np.array([cm_force(e, i) for i in range(e.n)])


def force_balance_ratio(ensemble, i: int) -> float:
    """``|cm_force_i| / (q_i * sum_j |term_j|)``: the scale-free imbalance at ``i``."""
    e = _ensemble(ensemble)
    terms, scale = locus_terms(e, i, 1)
    force = cm_force(e, i)
    mag = float(np.sum(np.abs(terms)))
    if mag <= _DEGENERATE_SCALE * scale:
        return 0.0
    return abs(force) / (e.charges[i] * mag)


def is_equilibrium(ensemble, tol: float) -> bool:
    """Zero-force test: every particle's force balance ratio is below ``tol``."""
    e = _ensemble(ensemble)
    return max(force_balance_ratio(e, i) for i in range(e.n)) < tol


def schrodinger_potential(arrangement: Arrangement, x) -> float:
    """``u(x) = sum_i m_i(m_i+1) / <alpha_i, x>^2`` with unit normals."""
    x = np.asarray(x, dtype=float)
    t = arrangement.ensemble.theta_array()
    dots = np.cos(t / 2) * x[0] + np.sin(t / 2) * x[1]
    if np.any(np.abs(dots) < COLLISION_THRESHOLD * max(1.0, float(np.linalg.norm(x)))):
        raise SingularityError("x lies on a line of the arrangement")
    q = arrangement.ensemble.charge_array()
    return float(np.sum(q / dots**2))
