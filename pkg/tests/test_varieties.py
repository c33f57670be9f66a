import itertools
import random
from fractions import Fraction

import pytest

from ratiodist.field import CapExceededError, Field
from ratiodist.fourier import decode_point
from ratiodist.varieties import (
    norm_value,
    phi,
    ratio_sphere,
    rt_ft_closed,
    s0_ft_closed,
    s0_ft_rational,
    verify_rt_ft,
    verify_s0_ft,
    zero_sphere,
)


def test_phi_examples():
    F3 = Field(3)
    for x in [(0, 0, 0, 0), (1, 2, 0, 1), (2, 2, 2, 2)]:
        assert phi(F3, x, x) == 0
    assert phi(F3, (1, 0, 1, 0), (0, 0, 0, 0)) == 1
    for F in (F3, Field(5), Field(7)):
        assert phi(F, (1, 0, 0, 0), (0, 0, 0, 0)) == 0
    with pytest.raises(ValueError, match="even"):
        phi(F3, (1, 0, 0), (0, 0, 0))


def test_phi_dilation_invariance_exhaustive_d2():
    # the head and tail norms both scale by lam**2, so the ratio is unchanged
    for q in (3, 5):
        F = Field(q)
        pts = list(itertools.product(range(q), repeat=2))
        for x in pts:
            for y in pts:
                base = phi(F, x, y)
                for lam in range(1, q):
                    lx = tuple(F.mul(lam, c) for c in x)
                    ly = tuple(F.mul(lam, c) for c in y)
                    assert phi(F, lx, ly) == base


def test_phi_dilation_and_translation_sampled_d4():
    rng = random.Random(9)
    F = Field(5)
    for _ in range(50):
        x = tuple(rng.randrange(5) for _ in range(4))
        y = tuple(rng.randrange(5) for _ in range(4))
        v = tuple(rng.randrange(5) for _ in range(4))
        lam = rng.randrange(1, 5)
        assert phi(F, x, y) == phi(
            F, tuple(F.mul(lam, c) for c in x), tuple(F.mul(lam, c) for c in y)
        )
        assert phi(F, x, y) == phi(
            F, tuple(F.add(c, w) for c, w in zip(x, v)), tuple(F.add(c, w) for c, w in zip(y, v))
        )


def test_zero_sphere_sizes():
    assert zero_sphere(Field(3), 2).points() == [(0, 0)]
    assert len(zero_sphere(Field(5), 2)) == 9
    for q in (3, 5, 7, 11, 13):
        F = Field(q)
        assert len(zero_sphere(F, 1)) == 1
        expected = 2 * q - 1 if q % 4 == 1 else 1
        assert len(zero_sphere(F, 2)) == expected


def test_zero_sphere_against_direct_enumeration():
    F = Field(7)
    oracle = {
        (x, y, z)
        for x in range(7)
        for y in range(7)
        for z in range(7)
        if (x * x + y * y + z * z) % 7 == 0
    }
    assert set(zero_sphere(F, 3).points()) == oracle


def test_ratio_sphere_partition_and_size():
    F3 = Field(3)
    # norms in F_3^2: 1 point of norm 0, 4 of norm 1, 4 of norm 2; matched
    # nonzero head/tail norms give |R_1| = 4*4 + 4*4 = 32
    r1 = ratio_sphere(F3, 4, 1)
    assert len(r1) == 32
    seen = set()
    total = 0
    for t in range(3):
        rt = ratio_sphere(F3, 4, t)
        codes = set(rt)
        assert not codes & seen
        seen |= codes
        total += len(rt)
    assert total == 81
    assert (0, 0, 0, 0) in ratio_sphere(F3, 4, 0).points()
    with pytest.raises(ValueError):
        ratio_sphere(F3, 3, 1)
    with pytest.raises(CapExceededError):
        ratio_sphere(F3, 4, 1, cap=10)


def test_s0_closed_form_spot_values():
    F3 = Field(3)
    # half-dimension 2 with -1 a nonsquare: constant 1/9 at every frequency
    for m in range(9):
        assert s0_ft_closed(F3, 2, decode_point(3, 2, m)).as_fraction() == Fraction(1, 9)
    # half-dimension 4: zero frequency value 1/3 + 1/9 - 1/27
    v = s0_ft_closed(F3, 4, (0, 0, 0, 0))
    assert v.as_fraction() == Fraction(1, 3) + Fraction(1, 9) - Fraction(1, 27)
    assert v.as_fraction() == Fraction(11, 27)
    # odd half-dimension 3: nonnull frequency gives eta(-norm)/q^2
    for mp in [(1, 0, 0), (1, 1, 0), (2, 1, 1)]:
        nv = norm_value(F3, mp)
        if nv == 0:
            continue
        want = Fraction(F3.eta(F3.neg(nv)), 9)
        assert s0_ft_closed(F3, 3, mp).as_fraction() == want
    with pytest.raises(ValueError):
        s0_ft_closed(F3, 1, (0,))


def test_s0_zero_frequency_is_the_density():
    for n, q in [(2, 3), (2, 5), (3, 3), (3, 5), (4, 3), (5, 3)]:
        F = Field(q)
        sphere = zero_sphere(F, n)
        value = s0_ft_closed(F, n, (0,) * n).as_fraction()
        assert value == Fraction(len(sphere), q**n)


def test_s0_rational_cases_match_closed_form():
    for n, q in [(2, 3), (2, 5), (3, 3), (3, 5), (4, 3), (4, 5), (5, 3), (6, 3)]:
        F = Field(q)
        for m in range(0, q**n, max(1, q**n // 64)):
            mp = decode_point(q, n, m)
            assert s0_ft_rational(F, n, mp) == s0_ft_closed(F, n, mp)


@pytest.mark.parametrize("n,q", [(2, 5), (4, 3), (3, 7)])
def test_verify_s0_ft(n, q):
    res = verify_s0_ft(Field(q), n)
    assert res.ok, res.failure
    assert res.checked == q**n


def test_rt_closed_form_zero_frequency():
    F3 = Field(3)
    v = rt_ft_closed(F3, 4, 1, (0,) * 4)
    assert v.as_fraction() == Fraction(len(ratio_sphere(F3, 4, 1)), 81)
    v = rt_ft_closed(F3, 6, 2, (0,) * 6)
    assert v.as_fraction() == Fraction(len(ratio_sphere(F3, 6, 2)), 729)


def test_rt_closed_form_rejections():
    F3 = Field(3)
    with pytest.raises(ValueError, match="t != 0"):
        rt_ft_closed(F3, 4, 0, (0,) * 4)
    with pytest.raises(ValueError, match="even"):
        rt_ft_closed(F3, 5, 1, (0,) * 5)


@pytest.mark.parametrize("d,q", [(4, 3), (4, 5)])
def test_verify_rt_ft(d, q):
    res = verify_rt_ft(Field(q), d)
    assert res.ok, res.failure
    assert res.checked == (q - 1) * q**d
