"""Locus equations, reflection symmetry and coarse symmetry checks."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .arrangement import (
    TWO_PI,
    Arrangement,
    as_multiplicities,
    locus_terms,
    relative_magnitude,
    wrap_angle,
)
from .exceptions import OrderError

DEFAULT_FIRST_TOL = 1e-9
DEFAULT_LOCUS_TOL = 1e-8
DEFAULT_REFLECTION_TOL = 1e-9


@dataclass(frozen=True)
class LineRecord:
    index: int
    multiplicity: int
    residuals: tuple
    relative: tuple
    first_locus_pass: bool
    all_locus_pass: bool
    reflection_invariant: bool

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "multiplicity": self.multiplicity,
            "residuals": list(self.residuals),
            "relative": list(self.relative),
            "first_locus_pass": self.first_locus_pass,
            "all_locus_pass": self.all_locus_pass,
            "reflection_invariant": self.reflection_invariant,
        }


@dataclass(frozen=True)
class LocusReport:
    """Residuals of every locus equation at every line, plus verdicts.

    The raw residuals are always kept so borderline verdicts can be audited.
    """

    lines: tuple
    first_locus_pass: bool
    all_locus_pass: bool
    coarsely_coxeter: bool
    tolerance: dict = field(default_factory=dict)

    @property
    def max_relative(self) -> float:
        return max(max(r.relative) for r in self.lines)

    def to_dict(self) -> dict:
        return {
            "lines": [r.to_dict() for r in self.lines],
            "first_locus_pass": self.first_locus_pass,
            "all_locus_pass": self.all_locus_pass,
            "coarsely_coxeter": self.coarsely_coxeter,
            "tolerance": dict(self.tolerance),
        }


def locus_residual(arrangement: Arrangement, i: int, k: int):
    """Signed residual of the ``k``-th locus equation at line ``i`` and its relative size.

    The equation is evaluated at the spanning vector of line ``i``; with unit
    normals it reduces to ``sum_j q_j cos^(2k-1) / sin^(2k+1)`` of the half gaps.
    """
    m_i = arrangement.mults[i]
    if not 1 <= k <= m_i:
        raise OrderError(f"order k={k} outside 1..{m_i} at line {i}")
    terms, scale = locus_terms(arrangement.ensemble, i, k)
    residual = float(np.sum(terms))
    return residual, relative_magnitude(residual, terms, scale)


def is_first_locus(arrangement: Arrangement, tol: float = DEFAULT_FIRST_TOL) -> bool:
    return all(locus_residual(arrangement, i, 1)[1] < tol for i in range(arrangement.n))


def is_coarsely_symmetric(m) -> bool:
    """Every index with multiplicity above 1 is a mirror of the cyclic list."""
    return not coarse_symmetry_violations(m)


def coarse_symmetry_violations(m) -> list:
    """``(i, j)`` pairs with ``m_i > 1`` and ``m_{i+j} != m_{i-j}``."""
    m = as_multiplicities(m)
    n = len(m)
    bad = []
    for i in range(n):
        if m[i] <= 1:
            continue
        for j in range(1, n // 2 + 1):
            if m[i + j] != m[i - j]:
                bad.append((i, j))
    return bad


def reflection_image(arrangement: Arrangement, i: int) -> Arrangement:
    """Reflect the arrangement across line ``i``.

    Angles map by ``t -> 2 t_i - t``.  Reflection reverses the cyclic order, so
    the image is relabelled with position ``i + j`` holding the image of line
    ``i - j``; its multiplicities then read ``m'_{i+j} = m_{i-j}``.
    """
    n = arrangement.n
    t = arrangement.ensemble.theta_array()
    src = [(2 * i - p) % n for p in range(n)]
    new_t = wrap_angle(2 * t[i] - t[src])
    new_t[i] = t[i]
    new_m = [arrangement.mults[s] for s in src]
    return Arrangement.from_angles(new_t.tolist(), new_m)


def _circular_distance(a, b):
    d = np.abs(np.asarray(a) - np.asarray(b)) % TWO_PI
    return np.minimum(d, TWO_PI - d)


def arrangements_match(a: Arrangement, b: Arrangement, tol: float) -> bool:
    """Same multiset of (angle mod 2pi, multiplicity) pairs, angles within ``tol``.

    Both angle lists are sorted and compared under every cyclic alignment; a
    sorted circle admits no better pairing than one of those.
    """
    if a.n != b.n:
        return False
    oa = np.argsort(a.thetas, kind="stable")
    ob = np.argsort(b.thetas, kind="stable")
    ta, tb = np.asarray(a.thetas)[oa], np.asarray(b.thetas)[ob]
    ma = np.asarray(a.mults.values)[oa]
    mb = np.asarray(b.mults.values)[ob]
    for shift in range(a.n):
        tb_s = np.roll(tb, shift)
        mb_s = np.roll(mb, shift)
        if np.array_equal(ma, mb_s) and np.all(_circular_distance(ta, tb_s) <= tol):
            return True
    return False


def is_reflection_invariant(arrangement: Arrangement, i: int, tol: float = DEFAULT_REFLECTION_TOL) -> bool:
    return arrangements_match(arrangement, reflection_image(arrangement, i), tol)


def is_coarsely_coxeter(arrangement: Arrangement, tol: float = DEFAULT_REFLECTION_TOL) -> bool:
    return all(
        is_reflection_invariant(arrangement, i, tol)
        for i in range(arrangement.n)
        if arrangement.mults[i] > 1
    )


def is_locus_configuration(
    arrangement: Arrangement,
    tol: float = DEFAULT_LOCUS_TOL,
    first_tol: float | None = None,
    reflection_tol: float = DEFAULT_REFLECTION_TOL,
) -> LocusReport:
    """Evaluate all locus equations ``k = 1..m_i`` at every line.

    ``first_tol`` applies to the ``k = 1`` equations and defaults to ``tol``;
    ``tol`` applies to the higher orders.  A line passes all its equations only
    if it also passes the first one.
    """
    if first_tol is None:
        first_tol = tol
    records = []
    for i in range(arrangement.n):
        m_i = arrangement.mults[i]
        res, rel = zip(*(locus_residual(arrangement, i, k) for k in range(1, m_i + 1)))
        first_ok = rel[0] < first_tol
        all_ok = first_ok and all(r < tol for r in rel[1:])
        records.append(
            LineRecord(
                index=i,
                multiplicity=m_i,
                residuals=tuple(res),
                relative=tuple(rel),
                first_locus_pass=first_ok,
                all_locus_pass=all_ok,
                reflection_invariant=is_reflection_invariant(arrangement, i, reflection_tol),
            )
        )
    coarse = all(r.reflection_invariant for r in records if r.multiplicity > 1)
    return LocusReport(
        lines=tuple(records),
        first_locus_pass=all(r.first_locus_pass for r in records),
        all_locus_pass=all(r.all_locus_pass for r in records),
        coarsely_coxeter=coarse,
        tolerance={"first": first_tol, "locus": tol, "reflection": reflection_tol},
    )
