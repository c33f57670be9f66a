import random
from fractions import Fraction

import pytest

from ratiodist.field import CapExceededError, Field
from ratiodist.fourier import PointSet, random_pointset
from ratiodist.counting import (
    nu_brute,
    nu_fourier,
    nu_fourier_profile,
    nu_lower_bound,
    nu_lower_bound_d4,
    nu_profile_brute,
    phi_image,
    threshold_experiment,
)
from ratiodist.isotropic import sharpness_set
from ratiodist.varieties import ratio_sphere

F3 = Field(3)


def null_plane(field):
    """The half-space cross origin set in dimension 4: codes 0..q^2-1."""
    return PointSet(field, 4, range(field.q**2))


def test_nu_brute_singleton():
    ps = PointSet(F3, 4, [17])
    profile = nu_profile_brute(ps)
    assert profile[0] == 1 and profile[1:].sum() == 0


def test_nu_brute_null_plane():
    # 9 points, all 81 ordered pairs have ratio 0
    ps = null_plane(F3)
    profile = nu_profile_brute(ps)
    assert profile[0] == len(ps) ** 2 == 81
    assert profile[1] == 0 and profile[2] == 0


def test_nu_brute_budget():
    ps = null_plane(F3)
    with pytest.raises(CapExceededError, match="81 pairs"):
        nu_profile_brute(ps, budget=80)
    assert nu_brute(ps, 0) == 81
    with pytest.raises(ValueError):
        nu_brute(ps, 3)


def test_nu_fourier_full_space():
    # pairs at level t are exactly translates of the level-t sphere
    full = PointSet.full_space(F3, 4)
    assert nu_fourier(full, 1) == 81 * len(ratio_sphere(F3, 4, 1)) == 2592
    assert nu_fourier(full, 2) == 81 * len(ratio_sphere(F3, 4, 2))


def test_nu_fourier_null_plane_and_rejections():
    ps = null_plane(F3)
    assert nu_fourier(ps, 1) == 0
    assert nu_fourier(ps, 2) == 0
    with pytest.raises(ValueError, match="t != 0"):
        nu_fourier(ps, 0)
    with pytest.raises(ValueError):
        nu_fourier(ps, 5)


@pytest.mark.parametrize("q,sizes", [(3, (5, 9)), (5, (5, 20)), (7, (20, 49))])
def test_oracle_equivalence_d4(q, sizes):
    F = Field(q)
    rng = random.Random(100 + q)
    for size in sizes:
        for _ in range(5):
            ps = random_pointset(F, 4, size, rng)
            brute = nu_profile_brute(ps)
            spectral = nu_fourier_profile(ps)
            for t in range(1, q):
                assert spectral[t] == int(brute[t]), (q, size, t)
            assert int(brute.sum()) == size * size


@pytest.mark.parametrize("d", [6, 8])
def test_oracle_equivalence_high_dimension(d):
    rng = random.Random(d)
    for size in (20, 60):
        ps = random_pointset(F3, d, size, rng)
        brute = nu_profile_brute(ps)
        spectral = nu_fourier_profile(ps)
        assert {t: int(brute[t]) for t in (1, 2)} == spectral


def test_oracle_equivalence_extension_field():
    F9 = Field(3, 2)
    rng = random.Random(9)
    for size in (5, 20):
        ps = random_pointset(F9, 4, size, rng)
        brute = nu_profile_brute(ps)
        spectral = nu_fourier_profile(ps)
        assert all(spectral[t] == int(brute[t]) for t in range(1, 9))


def test_nu_monotone_under_insertion():
    rng = random.Random(21)
    ps = random_pointset(F3, 4, 12, rng)
    base = nu_profile_brute(ps)
    extra = next(c for c in range(81) if c not in ps)
    bigger = PointSet(F3, 4, list(ps.codes) + [extra])
    assert (nu_profile_brute(bigger) >= base).all()


def test_phi_image_examples():
    assert phi_image(null_plane(F3)) == {0}
    # in F_5, 2*2 = -1, so the null line {(t, 2t)} kills the tail norms
    F5 = Field(5)
    sharp = sharpness_set(F5, 4)
    assert phi_image(sharp.points) == {0}
    assert phi_image(PointSet.full_space(F3, 4)) == {0, 1, 2}
    assert phi_image(PointSet.empty(F3, 4)) == set()
    # forcing the spectral route gives the same image
    ps = random_pointset(F3, 4, 15, random.Random(4))
    assert phi_image(ps, budget=10) == phi_image(ps)


def test_lower_bound_d4_values():
    assert nu_lower_bound_d4(9, 3) == 0
    assert nu_lower_bound_d4(10, 3) == Fraction(40, 9)
    assert nu_lower_bound_d4(12, 3) == Fraction(4, 9) * 12 * 3 == 16


def test_lower_bound_d4_is_a_real_bound():
    rng = random.Random(33)
    for _ in range(10):
        ps = random_pointset(F3, 4, 12, rng)
        profile = nu_profile_brute(ps)
        assert min(int(profile[t]) for t in (1, 2)) >= 16


def test_lower_bound_general_values():
    # part2 at (d, q, |E|) = (6, 3, 81) is negative: documents the threshold
    assert nu_lower_bound(81, 3, 6, "part2") == 2187 - 729 - 6561
    assert nu_lower_bound(729, 3, 8, "B") == Fraction(729**2, 3) - Fraction(4 * 729**2, 9) - 4 * 3**5 * 729
    # case A at d = 12: at |E| = 3^8 the two leading terms cancel exactly
    # (that size admits a {0}-image construction, so the bound must not be
    # positive there); a constant factor above the threshold it turns positive
    assert Fraction(3**16, 3) == 3 ** ((3 * 12 - 8) // 4) * 3**8
    assert nu_lower_bound(3**8, 3, 12, "A") < 0
    assert nu_lower_bound(2 * 3**8, 3, 12, "A") > 0


def test_lower_bound_hypothesis_rejections():
    with pytest.raises(ValueError, match="d ≡ 4"):
        nu_lower_bound(10, 3, 8, "A")
    with pytest.raises(ValueError, match="q ≡ 3"):
        nu_lower_bound(10, 5, 4, "A")
    with pytest.raises(ValueError, match="d ≡ 0"):
        nu_lower_bound(10, 3, 6, "B")
    with pytest.raises(ValueError, match="d ≡ 2"):
        nu_lower_bound(10, 3, 8, "part2")
    with pytest.raises(ValueError, match="unknown case"):
        nu_lower_bound(10, 3, 8, "C")


def test_positive_bounds_force_positive_counts():
    # part2 bound turns positive for large sets in F_3^6
    size = 500
    bound = nu_lower_bound(size, 3, 6, "part2")
    assert bound > 0
    ps = random_pointset(F3, 6, size, random.Random(6))
    spectral = nu_fourier_profile(ps)
    assert min(spectral.values()) >= bound
    # case A applies in dimension 4 as well; the full space clears it
    bound_a = nu_lower_bound(81, 3, 4, "A")
    assert bound_a > 0
    assert nu_fourier(PointSet.full_space(F3, 4), 1) >= bound_a


def test_threshold_experiment_deterministic_and_covering():
    r1 = threshold_experiment(F3, 4, [9, 10], 25, seed=7)
    r2 = threshold_experiment(F3, 4, [9, 10], 25, seed=7)
    assert r1 == r2
    by_size = {rec["size"]: rec for rec in r1}
    assert by_size[10]["covered"] == 25  # one past the q^2 threshold: always covers
    assert by_size[10]["coverage_fraction"] == "1"
    with pytest.raises(ValueError, match="exceeds"):
        threshold_experiment(F3, 4, [100], 1, seed=0)


def test_threshold_experiment_planted_adversary():
    planted = null_plane(F3)
    report = threshold_experiment(F3, 4, [9], 10, seed=3, planted=[planted])
    assert report[0]["planted_images"] == [[0]]
