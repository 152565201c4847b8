from fractions import Fraction

import pytest

from spectre_tiles import assembly as A


def matpow(m, n):
    r = [[1, 0], [0, 1]]
    for _ in range(n):
        r = [[sum(r[i][k] * m[k][j] for k in range(2)) for j in range(2)] for i in range(2)]
    return r


@pytest.mark.parametrize("n", range(0, 10))
def test_counts_are_matrix_powers(n):
    m = matpow(A.SUBST_MATRIX, n)
    assert A.count_vector(n) == (m[0][0], m[1][0])
    assert A.count_vector(n, A.MYSTIC) == (m[0][1], m[1][1])


@pytest.mark.parametrize("n,tiles", [(0, 1), (1, 9), (2, 71), (3, 559)])
def test_geometric_tile_counts(n, tiles):
    unit = A.iterate(n)
    lone, myst = A.count_vector(n)
    st = A.stats(unit)
    assert st.spectres == tiles == lone + 2 * myst
    assert st.mystics == myst


def test_level_two_split():
    assert A.count_vector(2) == (55, 8)


def test_eigenvalues_exact():
    hi, lo = A.subst_matrix_eigen()
    assert (hi.a, hi.b, hi.r) == (4, 1, 15)
    assert hi + lo == A.Surd(Fraction(8), Fraction(0), 15)
    assert hi * lo == A.Surd(Fraction(1), Fraction(0), 15)


def test_ratio_converges():
    r = A.ratio_sequence(12)
    lam = 4 + 15 ** 0.5
    errs = [abs(float(x) - lam) for x in r]
    assert errs[-1] < 1e-6
    assert all(b <= a for a, b in zip(errs[1:], errs[2:]))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_soundness_and_handedness(n):
    rep = A.soundness(A.iterate(n))
    assert rep.ok, rep
    assert rep.handedness == {n % 2 == 1}


def test_mystic_seed():
    unit = A.iterate(2, A.MYSTIC)
    assert A.stats(unit).spectres == sum(x * y for x, y in zip(A.count_vector(2, A.MYSTIC), (1, 2)))
    assert A.soundness(unit).ok


def test_straight_runs_of_one_tile():
    from spectre_tiles.tiles import TILE11
    runs = A.max_straight_runs(TILE11)
    assert sorted(runs) == [1] * 12 + [2]


def test_keypoint_chain_shares_nonempty():
    assert A.keypoint_chain_shares(A.iterate(2))
