import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import direct_first_residual
from locusconf.arrangement import Arrangement, cm_force, is_equilibrium, wrap_angle
from locusconf.exceptions import OrderError
from locusconf.locus import (
    arrangements_match,
    coarse_symmetry_violations,
    is_coarsely_coxeter,
    is_coarsely_symmetric,
    is_first_locus,
    is_locus_configuration,
    is_reflection_invariant,
    locus_residual,
    reflection_image,
)
from locusconf.solver import solve_equilibrium

TWO_PI = 2 * math.pi


def equally_spaced(mults):
    n = len(mults)
    return Arrangement.from_angles([TWO_PI * i / n for i in range(n)], mults)


@pytest.mark.parametrize("mults", [(1, 1), (3, 2), (5, 5)])
def test_perpendicular_lines_have_zero_residuals(mults):
    a = Arrangement.from_angles((0.0, math.pi), mults)
    for i in range(2):
        for k in range(1, mults[i] + 1):
            res, rel = locus_residual(a, i, k)
            assert abs(res) < 1e-13
            assert rel == 0.0


def test_equally_spaced_first_residual_vanishes():
    a = equally_spaced((1, 1, 1))
    for i in range(3):
        res, rel = locus_residual(a, i, 1)
        assert abs(res) < 1e-14
        assert rel < 1e-14


def test_order_error():
    a = equally_spaced((2, 1, 1))
    with pytest.raises(OrderError):
        locus_residual(a, 1, 2)
    with pytest.raises(OrderError):
        locus_residual(a, 0, 0)


@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_a2_heavy_line_all_orders(m):
    a = solve_equilibrium((m, 1, 1)).arrangement
    for k in range(1, m + 1):
        assert locus_residual(a, 0, k)[1] < 1e-8


def test_first_residual_matches_force():
    a = solve_equilibrium((2, 3, 1, 1)).arrangement
    b = Arrangement.from_angles((0.0, 1.0, 2.0), (1, 1, 1))
    for arr in (a, b):
        for i in range(arr.n):
            assert cm_force(arr.ensemble, i) == arr.charges[i] * locus_residual(arr, i, 1)[0]


def test_first_locus_verdicts():
    assert is_first_locus(equally_spaced((1, 1, 1, 1, 1)))
    assert is_first_locus(equally_spaced((3, 3, 3)))
    generic = Arrangement.from_angles((0.0, 1.0, 2.0), (1, 1, 1))
    direct = [direct_first_residual(generic.thetas, generic.charges, i) for i in range(3)]
    assert max(abs(d) for d in direct) > 1.0
    assert not is_first_locus(generic)
    assert is_first_locus(solve_equilibrium((2, 3, 1, 1)).arrangement, 1e-8)


def test_coxeter_arrangements_are_locus_configurations():
    for mults in [(1, 1), (4, 4, 4), (2, 5, 2, 5), (3, 1, 3, 1, 3, 1), (2,) * 8]:
        rep = is_locus_configuration(equally_spaced(mults), 1e-8)
        assert rep.all_locus_pass and rep.coarsely_coxeter


def test_new_family_is_locus_configuration():
    rep = is_locus_configuration(solve_equilibrium((2, 1, 1, 1)).arrangement, 1e-8)
    assert rep.all_locus_pass


def test_non_coarsely_symmetric_report_is_emitted():
    rep = is_locus_configuration(solve_equilibrium((2, 3, 1, 1)).arrangement, 1e-8, first_tol=1e-9)
    assert rep.first_locus_pass
    assert [len(line.residuals) for line in rep.lines] == [2, 3, 1, 1]
    assert set(rep.to_dict()) >= {"lines", "first_locus_pass", "all_locus_pass", "coarsely_coxeter", "tolerance"}


def test_report_invariants():
    for mults in [(2, 3, 1, 1), (2, 1, 1, 1), (3, 1, 2, 1)]:
        rep = is_locus_configuration(solve_equilibrium(mults).arrangement)
        for line in rep.lines:
            assert all(0.0 <= r <= 1.0 for r in line.relative)
            assert line.first_locus_pass or not line.all_locus_pass
        assert rep.first_locus_pass or not rep.all_locus_pass
    generic = is_locus_configuration(Arrangement.from_angles((0.0, 1.0, 2.5, 4.0), (2, 1, 3, 1)))
    assert not generic.first_locus_pass and not generic.all_locus_pass


@pytest.mark.parametrize(
    "mults, expected",
    [
        ((4, 1, 2, 1), True),
        ((1, 1, 5, 1), True),
        ((2, 3, 1, 1), False),
        ((1, 1, 1, 1, 1), True),
        ((2, 1, 1, 1), True),
        ((2, 1, 1, 2, 1, 1), True),
        ((2, 2, 1, 1, 1, 1), False),
        ((3, 1, 2, 1), True),
        ((2, 1, 1), True),
        ((2, 1, 2), False),
        ((2, 1, 3), False),
    ],
)
def test_coarse_symmetry(mults, expected):
    assert is_coarsely_symmetric(mults) is expected


def test_coarse_symmetry_violations_named():
    assert coarse_symmetry_violations((2, 3, 1, 1)) == [(0, 1), (1, 1)]


def test_reflection_fixes_its_line_and_is_involution(rng):
    t = np.sort(rng.uniform(0, TWO_PI, 5))
    a = Arrangement.from_angles(t.tolist(), (1, 2, 3, 1, 4))
    for i in range(5):
        img = reflection_image(a, i)
        assert img.thetas[i] == a.thetas[i]
        back = reflection_image(img, i)
        assert back.mults == a.mults
        d = np.abs(np.asarray(back.thetas) - np.asarray(a.thetas))
        assert np.max(np.minimum(d, TWO_PI - d)) < 1e-14


def test_reflection_relabels_multiplicities():
    a = Arrangement.from_angles((0.0, 1.0, 2.0, 3.5, 5.0), (1, 2, 3, 4, 5))
    img = reflection_image(a, 1)
    for j in range(5):
        assert img.mults[1 + j] == a.mults[1 - j]


def test_coxeter_reflection_image_equals_original():
    a = equally_spaced((2, 1, 2, 1, 2, 1))
    for i in range(6):
        assert arrangements_match(a, reflection_image(a, i), 1e-12)
        assert is_reflection_invariant(a, i, 1e-12)


def test_matching_handles_wraparound():
    a = Arrangement.from_angles((1e-13, 2.0, 4.0), (1, 2, 1))
    b = Arrangement.from_angles((2.0, 4.0, TWO_PI - 1e-13), (2, 1, 1))
    assert arrangements_match(a, b, 1e-12)
    assert not arrangements_match(a, b, 1e-14)


def test_solver_output_reflection_invariant_at_heavy_line():
    a = solve_equilibrium((2, 1, 1, 1)).arrangement
    assert is_reflection_invariant(a, 0, 1e-9)
    perturbed = Arrangement.from_angles((0.0, a.thetas[1] + 0.05, a.thetas[2], a.thetas[3]), a.mults)
    assert not is_reflection_invariant(perturbed, 0, 1e-9)


def test_coarsely_coxeter():
    assert is_coarsely_coxeter(solve_equilibrium((3, 1, 2, 1)).arrangement)
    assert is_coarsely_coxeter(Arrangement.from_angles((0.0, 0.3, 2.0), (1, 1, 1)))
    # recorded, not a theorem
    assert not is_coarsely_coxeter(solve_equilibrium((2, 3, 1, 1)).arrangement)


@st.composite
def mirror_symmetric(draw):
    """Arrangement made reflection symmetric about line 0 by construction."""
    half = draw(st.integers(1, 4))
    with_opposite = draw(st.booleans())
    gaps = draw(st.lists(st.floats(0.2, 1.0), min_size=half, max_size=half))
    angles = np.cumsum(gaps) * (math.pi - 0.2) / (sum(gaps) + 0.2)
    mults = draw(st.lists(st.integers(1, 4), min_size=half, max_size=half))
    m0 = draw(st.integers(1, 5))
    thetas = [0.0, *angles]
    ms = [m0, *mults]
    if with_opposite:
        thetas.append(math.pi)
        ms.append(draw(st.integers(1, 4)))
    thetas += [TWO_PI - t for t in angles[::-1]]
    ms += mults[::-1]
    rot = draw(st.floats(0, TWO_PI))
    t = wrap_angle(np.asarray(thetas) + rot)
    shift = int(np.argmin(t))
    return Arrangement.from_angles(np.roll(t, -shift).tolist(), list(np.roll(ms, -shift))), (-shift) % len(ms)


@settings(max_examples=60)
@given(mirror_symmetric())
def test_reflection_cancellation(case):
    a, i = case
    assert is_reflection_invariant(a, i, 1e-12)
    for k in range(1, a.mults[i] + 1):
        assert locus_residual(a, i, k)[1] < 1e-10


SUITE = [
    *(solve_equilibrium(m).arrangement for m in [(1, 1, 1), (2, 1, 1), (2, 3, 1, 1), (3, 1, 2, 1), (2, 1, 1, 2, 1, 1)]),
    Arrangement.from_angles((0.0, 1.0, 2.0), (1, 1, 1)),
    Arrangement.from_angles((0.0, math.pi / 2 + 1e-6, math.pi, 3 * math.pi / 2), (1, 1, 1, 1)),
    Arrangement.from_angles((0.0, 2.4, 3.9), (2, 1, 1)),
]


@pytest.mark.parametrize("a", SUITE)
@pytest.mark.parametrize("tol", [1e-12, 1e-9, 1e-6])
def test_first_locus_equals_zero_force(a, tol):
    assert is_first_locus(a, tol) == is_equilibrium(a.ensemble, tol)


@pytest.mark.parametrize("a", SUITE)
def test_coarse_pipeline(a):
    if is_first_locus(a, 1e-9) and is_coarsely_coxeter(a, 1e-9):
        assert is_locus_configuration(a, 1e-8).all_locus_pass
