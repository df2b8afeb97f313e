import numpy as np
import pytest
from hypothesis import given, strategies as st

from torsionkit import chern
from torsionkit.chern import ChernError, ChernMatrix

M = ChernMatrix.parse
entries = st.integers(-50, 50)
matrices = st.builds(lambda a, b: ChernMatrix.of([a, b]),
                     st.lists(entries, min_size=3, max_size=3),
                     st.lists(entries, min_size=3, max_size=3))


@pytest.mark.parametrize("src,dst", [
    ("[[1,2,3],[4,5,6]]", "[[4,5,6],[-1,-2,-3]]"),
    ("[[0,0,0],[0,0,0]]", "[[0,0,0],[0,0,0]]"),
    ("[[1,0,0],[0,0,0]]", "[[0,0,0],[-1,0,0]]"),
])
def test_phi_values(src, dst):
    assert str(chern.apply_phi(M(src))) == dst


def test_shift_and_hat_values():
    assert str(chern.apply_shift(M("[[1,2,3],[4,5,6]]"))) == "[[-1,-2,-3],[-4,-5,-6]]"
    assert chern.apply_shift(chern.ZERO) == chern.ZERO
    assert str(chern.apply_phi_hat(M("[[1,2,3],[4,5,6]]"))) == "[[4,5,6],[-1,-2,-3]]"
    assert chern.apply_phi_hat(chern.ZERO) == chern.ZERO


@given(matrices)
def test_group_laws(m):
    assert chern.apply_shift(chern.apply_shift(m)) == m
    assert chern.apply_phi(chern.apply_phi(m)) == chern.apply_shift(m)
    assert chern.apply_phi(chern.apply_phi_hat(m)) == chern.apply_shift(m)
    m4 = m
    for _ in range(4):
        m4 = chern.apply_phi(m4)
    assert m4 == m


def test_phi_hat_against_shift_on_box():
    for m in chern.as_matrices(chern.box(2)):
        assert chern.apply_phi(chern.apply_phi_hat(m)) == chern.apply_shift(m)


@pytest.mark.parametrize("text,c,d", [
    ("[[0,0,0],[0,0,7]]", 3, 0),
    ("[[2,0,0],[0,0,0]]", 0, 3),
    ("[[0,1,0],[2,0,0]]", 1, 2),
])
def test_codim_and_dim(text, c, d):
    assert chern.codim(M(text)) == c
    assert chern.dim_sheaf(M(text)) == d


@pytest.mark.parametrize("text,e", [
    ("[[0,0,0],[0,3,1]]", 1),
    ("[[0,0,0],[5,0,0]]", 2),
    ("[[0,0,4],[0,0,0]]", 0),
])
def test_dpi_upper(text, e):
    assert chern.dpi_upper(M(text)) == e


def test_empty_max_note():
    assert chern.dpi_upper_note(M("[[0,0,4],[0,0,0]]"))
    assert chern.dpi_upper_note(M("[[0,0,0],[0,0,1]]")) is None


def test_zero_class_errors():
    with pytest.raises(ChernError, match="codim undefined for the zero class"):
        chern.codim(chern.ZERO)
    for fn in (chern.dpi_upper, chern.dim_sheaf):
        with pytest.raises(ChernError):
            fn(chern.ZERO)
    with pytest.raises(ChernError):
        chern.wit_necessary(chern.ZERO, 0)


def test_admissibility():
    assert chern.is_sheaf_admissible(M("[[0,1,0],[2,0,0]]"))
    assert not chern.is_sheaf_admissible(M("[[-1,0,0],[0,0,0]]"))
    assert not chern.is_sheaf_admissible(chern.ZERO)
    # positive sum, one negative leading entry: only the strict form rejects it
    m = M("[[0,-1,0],[2,0,0]]")
    assert not chern.is_sheaf_admissible(m)
    assert chern.is_sheaf_admissible(m, strict_leading=False)


def test_wit_necessary():
    assert not chern.wit_necessary(M("[[0,1,0],[2,0,0]]"), 1)
    assert chern.wit_necessary(M("[[0,0,0],[0,0,7]]"), 0)
    assert not chern.wit_necessary(M("[[0,0,0],[0,0,7]]"), 1)
    with pytest.raises(ChernError):
        chern.wit_necessary(M("[[0,0,0],[0,0,7]]"), 2)


@pytest.mark.parametrize("bad", ["[[1,2]]", "[[1,2,3]]", "nope", "[[1,2,3],[4,5,6.5]]",
                                 "[[true,0,0],[0,0,0]]"])
def test_parse_rejects(bad):
    with pytest.raises(ChernError):
        M(bad)


def test_roundtrip_text():
    assert str(M("[[0, 1, 0], [2, 0, 0]]")) == "[[0,1,0],[2,0,0]]"


def test_big_integers_are_exact():
    big = 10 ** 30
    m = ChernMatrix.of([[big, 0, 0], [0, 0, 1]])
    assert chern.apply_phi(m).row1 == (-big, 0, 0)


def test_transform_map_matches_phi():
    for i in (0, 1):
        tm = chern.transform_map(i)
        m = M("[[1,2,3],[4,5,6]]")
        image = chern.apply_phi(m)
        if i == 1:
            image = chern.apply_shift(image)
        for (r, c), (sign, (sr, sc)) in tm.items():
            assert image[r, c] == sign * m[sr, sc]


def test_batches_agree_with_scalar():
    ms = chern.box(1)
    assert len(ms) == 729
    sample = ms[::37]
    for arr, m in zip(sample, chern.as_matrices(sample)):
        assert np.array_equal(chern.phi_batch(arr[None])[0], np.array(chern.apply_phi(m).rows()))
        assert chern.admissible_batch(arr[None])[0] == chern.is_sheaf_admissible(m)
        if not m.is_zero():
            assert chern.codim_batch(arr[None])[0] == chern.codim(m)
            assert chern.dpi_upper_batch(arr[None])[0] == chern.dpi_upper(m)
            for i in (0, 1):
                assert chern.wit_necessary_batch(arr[None], i)[0] == chern.wit_necessary(m, i)
