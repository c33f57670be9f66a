import random
from fractions import Fraction

import pytest

from ratiodist.cyclotomic import CycNum, chi
from ratiodist.field import CapExceededError, Field
from ratiodist.fourier import (
    PointSet,
    decode_point,
    dft,
    encode_point,
    inversion_check,
    load_pointset,
    plancherel_sum,
    random_pointset,
    save_pointset,
)


def test_encoding_roundtrip():
    for q, n in [(3, 4), (5, 2), (9, 3)]:
        for code in range(0, q**n, 7):
            assert encode_point(q, decode_point(q, n, code)) == code


def test_pointset_validation():
    F = Field(3)
    with pytest.raises(ValueError, match="duplicate"):
        PointSet(F, 2, [1, 1])
    with pytest.raises(ValueError):
        PointSet(F, 2, [9])
    ps = PointSet(F, 2, [4, 0, 2])
    assert list(ps.codes) == [0, 2, 4]
    assert 2 in ps and 3 not in ps


def test_dft_edge_sets():
    F = Field(3)
    zero = CycNum.zero(3, 3)
    table = dft(PointSet.empty(F, 2))
    assert all(table.value(m) == zero for m in range(9))
    table = dft(PointSet.full_space(F, 2))
    assert table.value(0) == CycNum.rational(3, 3, 9)
    assert all(table.value(m) == zero for m in range(1, 9))
    table = dft(PointSet(F, 2, [0]))
    assert all(table.value(m) == CycNum.one(3, 3) for m in range(9))


def test_zero_frequency_is_the_size():
    rng = random.Random(3)
    for F, n in [(Field(3), 4), (Field(5), 2), (Field(3, 2), 2)]:
        ps = random_pointset(F, n, 11, rng)
        assert dft(ps).value(0) == CycNum.rational(F.p, F.q, 11)


def test_plancherel_examples():
    F3 = Field(3)
    assert plancherel_sum(dft(PointSet.full_space(F3, 2))) == 1
    rng = random.Random(0)
    ps = random_pointset(F3, 4, 7, rng)
    assert plancherel_sum(dft(ps)) == Fraction(7, 81)
    # the zero sphere in F_5^2 has 9 points: count them directly
    F5 = Field(5)
    pts = [(x, y) for x in range(5) for y in range(5) if (x * x + y * y) % 5 == 0]
    assert len(pts) == 9
    sphere = PointSet.from_coords(F5, pts)
    assert plancherel_sum(dft(sphere)) == Fraction(9, 25)


def test_inversion_examples():
    F3 = Field(3)
    assert inversion_check(PointSet(F3, 2, [0]), dft(PointSet(F3, 2, [0])))
    rng = random.Random(5)
    ps = random_pointset(F3, 4, 10, rng)
    assert inversion_check(ps, dft(ps))
    F5 = Field(5)
    pts = [(x, y) for x in range(5) for y in range(5) if (x * x + y * y) % 5 == 0]
    sphere = PointSet.from_coords(F5, pts)
    assert inversion_check(sphere, dft(sphere))


def test_conjugate_symmetry_of_real_indicators():
    rng = random.Random(11)
    F = Field(7)
    ps = random_pointset(F, 2, 12, rng)
    table = dft(ps)
    for m in range(49):
        neg_m = encode_point(7, [F.neg(c) for c in decode_point(7, 2, m)])
        assert table.value(neg_m) == table.value(m).conj()


@pytest.mark.parametrize("F,n", [(Field(3), 4), (Field(5), 2), (Field(3, 2), 2)])
def test_translation_modulation_law(F, n):
    rng = random.Random(n + F.q)
    ps = random_pointset(F, n, 8, rng)
    v = tuple(rng.randrange(F.q) for _ in range(n))
    shifted = dft(ps.translate(v))
    base = dft(ps)
    for m in range(F.q**n):
        mc = decode_point(F.q, n, m)
        dot = 0
        for a, b in zip(mc, v):
            dot = F.add(dot, F.mul(a, b))
        assert shifted.value(m) == chi(F, F.neg(dot)) * base.value(m)


def test_dft_cap_names_size():
    F = Field(3)
    with pytest.raises(CapExceededError, match="81"):
        dft(PointSet(F, 4, [0]), cap=80)


def test_table_export_rows():
    F = Field(3)
    rows = dft(PointSet(F, 2, [0, 4])).json_rows(frequencies=[0, 1])
    assert rows[0]["m"] == 0
    # canonical form: the zero-frequency value 2/q^2 carries its content in the scale
    assert rows[0]["coeffs"] == [1, 0]
    assert rows[0]["scale_num"] == 2 and rows[0]["scale_qexp"] == 2
    assert {"embed_re", "embed_im"} <= set(rows[1])


def test_pointset_file_roundtrip(tmp_path):
    rng = random.Random(2)
    for F, n in [(Field(7), 2), (Field(3, 2), 3)]:
        ps = random_pointset(F, n, 9, rng)
        path = tmp_path / f"set_{F.q}.txt"
        save_pointset(ps, path)
        header = path.read_text().splitlines()[0]
        assert header == f"q={F.designation()} n={n}"
        assert load_pointset(path) == ps


def test_pointset_file_errors(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("not a header\n0,0\n")
    with pytest.raises(ValueError, match="header"):
        load_pointset(bad)
    bad.write_text("q=3 n=2\n0,0,0\n")
    with pytest.raises(ValueError, match="expected 2"):
        load_pointset(bad)
    bad.write_text("q=3 n=2\n0,7\n")
    with pytest.raises(ValueError, match="out of range"):
        load_pointset(bad)
    bad.write_text("q=3 n=2\n1,1\n1,1\n")
    with pytest.raises(ValueError, match="duplicate"):
        load_pointset(bad)
    bad.write_text("q=3 n=2\nx,1\n")
    with pytest.raises(ValueError, match="non-integer"):
        load_pointset(bad)


def test_random_pointset_limits():
    F = Field(3)
    with pytest.raises(ValueError, match="distinct"):
        random_pointset(F, 2, 10, random.Random(0))
    ps = random_pointset(F, 2, 9, random.Random(0))
    assert len(ps) == 9
