import numpy as np
import pytest

import dyadiclab as dl
from dyadiclab.dyadic import Grid, Signal, constant
from dyadiclab import hankel as hk
from dyadiclab.norms import OperatorMatrix, operator_norm
from dyadiclab.transforms import fourier_mode

rng = np.random.default_rng(17)


def test_hankel_toeplitz_structure():
    H = hk.hankel_matrix([1, 0, 0, 0, 0], 3)
    assert H.matrix.entries[0, 0] == 1.0
    assert np.count_nonzero(H.matrix.entries) == 1
    assert abs(H.norm() - 1.0) < 1e-14

    H2 = hk.hankel_matrix([0, 0, 1, 0, 0], 3)
    # the antidiagonal i + j = 2
    expect = np.zeros((3, 3))
    expect[0, 2] = expect[1, 1] = expect[2, 0] = 1.0
    assert np.allclose(H2.matrix.entries, expect)
    assert abs(H2.norm() - 1.0) < 1e-12

    T = hk.toeplitz_matrix([0, 0, 1, 0, 0], 3)
    assert np.allclose(T.entries, np.eye(3))


def test_intertwining():
    b = hk.random_symbol(6, rng)
    H = hk.hankel_matrix(b.coeffs, 6)
    assert hk.check_intertwining(H) == 0.0
    # random non-Hankel matrix has positive defect
    fake = hk.HankelOp(OperatorMatrix(rng.standard_normal((6, 6)), ("m", 6), ("m", 6)), "matrix_on_l2")
    assert hk.check_intertwining(fake) > 1e-6
    # nonscalar Toeplitz does not intertwine
    T = hk.toeplitz_matrix(rng.standard_normal(11), 6)
    fakeT = hk.HankelOp(T, "matrix_on_l2")
    assert hk.check_intertwining(fakeT) > 1e-6


def test_operator_equals_structural_matrix():
    b = hk.random_symbol(8, rng)
    Hop = hk.hankel_operator_1d(b)
    Hstruct = hk.hankel_matrix(b.coeffs, 8)
    assert np.max(np.abs(Hop.matrix.entries - Hstruct.matrix.entries)) < 1e-12


def test_rank_one_and_golden_ratio():
    e0 = hk.SymbolCoefficients([1.0])
    H = hk.hankel_operator_1d(e0)
    assert abs(operator_norm(H.matrix) - 1.0) < 1e-12
    golden = hk.SymbolCoefficients([1.0, 1.0])
    Hg = hk.hankel_operator_1d(golden)
    assert np.allclose(Hg.matrix.entries, [[1, 1], [1, 0]], atol=1e-12)
    phi = (1 + np.sqrt(5)) / 2
    assert abs(operator_norm(Hg.matrix) - phi) < 1e-12


def test_depends_on_analytic_part_only():
    M = 6
    b = hk.random_symbol(M, rng)
    g = Grid(6, 1)
    base = hk.hankel_operator_1d(b, g).matrix.entries
    # perturb by antianalytic modes on the grid and recompute columns directly
    perturbed = b.to_signal(g).values + 0.7 * np.exp(-2j * np.pi * 3 * g.points()) \
        + 1.3j * np.exp(-2j * np.pi * 9 * g.points())
    cols = np.empty((M, M), dtype=complex)
    for j in range(M):
        phi = np.exp(2j * np.pi * j * g.points())
        cols[:, j] = (np.fft.fft(perturbed * np.conj(phi)) / g.n_points)[:M]
    assert np.max(np.abs(cols - base)) < 1e-12


def test_sup_norm_dominates():
    b = hk.random_symbol(8, rng)
    g = Grid(6, 1)
    sup = float(np.max(np.abs(b.to_signal(g).values)))
    assert operator_norm(hk.hankel_operator_1d(b).matrix) <= sup + 1e-10


def test_little_hankel():
    u = hk.random_symbol(3, rng)
    v = hk.random_symbol(3, rng)
    # rank-1 norm-1 case
    e00 = hk.SymbolCoefficients(np.array([[1.0]]))
    H0 = hk.little_hankel(e00)
    assert abs(operator_norm(H0.matrix) - 1.0) < 1e-12
    # tensor multiplicativity
    buv = hk.SymbolCoefficients(np.outer(u.coeffs, v.coeffs))
    Huv = hk.little_hankel(buv)
    prod = operator_norm(hk.hankel_operator_1d(u).matrix) * operator_norm(hk.hankel_operator_1d(v).matrix)
    assert abs(operator_norm(Huv.matrix) - prod) < 1e-10
    # structural reduction entrywise
    assert np.max(np.abs(Huv.matrix.entries - hk.little_hankel_structural(buv))) < 1e-12
    # dense SVD vs power iteration on the cross symbol
    c = np.zeros((2, 2), dtype=complex)
    c[0, 1] = c[1, 0] = 1.0
    Hc = hk.little_hankel(hk.SymbolCoefficients(c))
    assert abs(operator_norm(Hc.matrix) - operator_norm(Hc.matrix.entries, method="power")) < 1e-8


def test_commutator_basics():
    g = Grid(6, 1)
    zero = hk.commutator_matrix(constant(g, 2.0 + 1.0j), (1,), mode_cutoff=8)
    assert np.max(np.abs(zero.entries)) < 1e-13
    e1 = fourier_mode(g, 1)
    M1 = hk.commutator_matrix(e1, (1,), mode_cutoff=8)
    assert np.linalg.matrix_rank(M1.entries, tol=1e-10) <= 2
    # norm invariance under circular shift of the symbol samples
    b = hk.random_symbol(8, rng).to_signal(g)
    n0 = operator_norm(hk.commutator_matrix(b, (1,), mode_cutoff=10))
    bs = Signal(g, np.roll(b.values, 7))
    n1 = operator_norm(hk.commutator_matrix(bs, (1,), mode_cutoff=10))
    assert abs(n0 - n1) < 1e-10
    # adjoint pairs with the conjugate symbol
    Mc = hk.commutator_matrix(b.conj(), (1,), mode_cutoff=10)
    M0 = hk.commutator_matrix(b, (1,), mode_cutoff=10)
    assert np.max(np.abs(Mc.entries - M0.adjoint().entries)) < 1e-12


def test_block_identities():
    g1 = Grid(6, 1)
    b = hk.random_symbol(8, rng).to_signal(g1)
    b = b - Signal(g1, np.full(g1.shape, b.mean()))
    assert hk.block_identity_check(b, mode_cutoff=12) < 1e-12
    # constants commute: every block vanishes
    assert hk.block_identity_check(constant(g1, 1.5), mode_cutoff=8) < 1e-13
    g2 = Grid(5, 2)
    b2 = hk.random_symbol(4, rng, dim=2).to_signal(g2)
    assert hk.block_identity_check(b2, mode_cutoff=6) < 1e-12


def test_nehari_ratio_contracts():
    b = hk.random_symbol(8, rng)
    rep = hk.nehari_ratio(b, "dyadic")
    assert rep["ratio"] > 0
    # scale invariance
    rep2 = hk.nehari_ratio(hk.SymbolCoefficients(3.0 * b.coeffs), "dyadic")
    assert abs(rep["ratio"] - rep2["ratio"]) < 1e-9
    with pytest.raises(hk.TruncationError):
        hk.nehari_ratio(hk.SymbolCoefficients([1.0]), "dyadic")  # constant: BMO 0, Hankel 1


def test_nehari_ratio_calibration_point():
    # the single analytic mode: Hankel norm 1, ratio = 1 / bmo(e^{2 pi i x}),
    # a fixed grid-dependent constant
    b = hk.SymbolCoefficients([0.0, 1.0])
    rep = hk.nehari_ratio(b, "dyadic")
    assert abs(rep["hankel_norm"] - 1.0) < 1e-12
    g = Grid(3, 1)
    mode1 = dl.fourier_mode(g, 1)
    expect = 1.0 / dl.bmo_dyadic(mode1).value
    assert abs(rep["ratio"] - expect) < 1e-10


def test_norm_homogeneity_and_phase_invariance():
    b = hk.random_symbol(6, rng)
    base = operator_norm(hk.hankel_operator_1d(b).matrix)
    for c in (2.5, -1.0, np.exp(1j * 0.7), 3.0 * np.exp(-1j * 1.2)):
        scaled = hk.SymbolCoefficients(c * b.coeffs)
        got = operator_norm(hk.hankel_operator_1d(scaled).matrix)
        assert abs(got - abs(c) * base) < 1e-10
