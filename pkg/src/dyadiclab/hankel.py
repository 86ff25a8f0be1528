"""Hankel and Toeplitz matrices, Hankel operators on truncated Hardy spaces,
commutators with the Hilbert transform, and their block identities.

A Hankel operator with analytic symbol b acts by phi -> P(b * conj(phi)).
On the truncated exponential basis the matrix entries reduce to bhat(i+j);
matching the structural matrix is itself one of the tests.  The Hardy
projection used here keeps the k = 0 mode (H^2 contains constants), unlike
the strictly positive projections of the transforms module.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dyadic import Grid, Signal
from .norms import OperatorMatrix, operator_norm
from . import transforms


@dataclass
class SymbolCoefficients:
    """Analytic Fourier coefficients bhat(k), k = 0..M-1 per axis."""

    coeffs: np.ndarray

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=complex)

    @property
    def dim(self) -> int:
        return self.coeffs.ndim

    @property
    def degree(self) -> int:
        return self.coeffs.shape[0]

    def to_signal(self, grid: Grid) -> Signal:
        """Sample sum bhat(k) e^{2 pi i k.x} on the grid (requires N >= 2*degree)."""
        if grid.n_points < 2 * self.degree:
            raise ValueError("grid too coarse for the symbol degree")
        shape = grid.shape
        modes = np.zeros(shape, dtype=complex)
        if self.dim == 1:
            modes[: self.degree] = self.coeffs
        else:
            modes[: self.degree, : self.degree] = self.coeffs
        return Signal(grid, np.fft.ifftn(modes) * grid.n_points ** grid.dim)


def random_symbol(degree: int, rng: np.random.Generator, dim: int = 1) -> SymbolCoefficients:
    shape = (degree,) * dim
    c = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return SymbolCoefficients(c)


@dataclass
class HankelOp:
    """A Hankel-structured operator together with its defining sequence
    (entry (i, j) = sequence[i + j], zero beyond the end)."""

    matrix: OperatorMatrix
    flavor: str  # "matrix_on_l2" | "operator_on_H2" | "little_product"
    sequence: np.ndarray = None

    def norm(self) -> float:
        return operator_norm(self.matrix)

    def sequence_norm(self) -> float:
        """Operator norm of the zero-completed semi-infinite Hankel operator.

        For a finitely supported sequence this equals the norm of the full
        window whose side equals the sequence length, and it is the quantity
        the norm-preserving extension actually preserves.
        """
        if self.sequence is None:
            raise ValueError("no defining sequence attached")
        L = len(self.sequence)
        return operator_norm(hankel_window(self.sequence, L, L))


def hankel_window(seq: np.ndarray, rows: int, cols: int) -> np.ndarray:
    """rows x cols matrix with entry (i, j) = seq[i + j] (zero beyond the end)."""
    seq = np.asarray(seq, dtype=complex)
    out = np.zeros((rows, cols), dtype=complex)
    for i in range(rows):
        hi = min(cols, len(seq) - i)
        if hi > 0:
            out[i, :hi] = seq[i : i + hi]
    return out


def hankel_matrix(alpha, size: int) -> HankelOp:
    """size x size matrix with entries alpha[i+j]."""
    alpha = np.asarray(alpha, dtype=complex)
    if len(alpha) < 2 * size - 1:
        alpha = np.concatenate([alpha, np.zeros(2 * size - 1 - len(alpha), dtype=complex)])
    mat = hankel_window(alpha, size, size)
    om = OperatorMatrix(mat, ("modes", tuple(range(size))), ("modes", tuple(range(size))))
    return HankelOp(om, "matrix_on_l2", sequence=alpha[: 2 * size - 1])


def toeplitz_matrix(alpha_centered, size: int) -> OperatorMatrix:
    """size x size Toeplitz matrix; alpha_centered has length 2*size-1 with
    alpha_centered[size-1] = alpha_0, so entry (i,j) = alpha_{i-j}."""
    a = np.asarray(alpha_centered, dtype=complex)
    if len(a) != 2 * size - 1:
        raise ValueError("need a centered sequence of length 2*size-1")
    mat = np.empty((size, size), dtype=complex)
    for i in range(size):
        for j in range(size):
            mat[i, j] = a[size - 1 + i - j]
    return OperatorMatrix(mat, ("modes", tuple(range(size))), ("modes", tuple(range(size))))


def shift_matrix(size: int) -> np.ndarray:
    S = np.zeros((size, size), dtype=complex)
    for i in range(1, size):
        S[i, i - 1] = 1.0
    return S


def check_intertwining(H: HankelOp) -> float:
    """|| (H S - S* H) restricted to the interior block ||; exactly 0 for Hankel
    structure (the last row/column sees the truncation boundary)."""
    mat = H.matrix.entries
    M = mat.shape[0]
    S = shift_matrix(M)
    D = mat @ S - S.conj().T @ mat
    return float(np.linalg.norm(D[: M - 1, : M - 1]))


# ---------------------------------------------------------------------------
# Hankel operators from symbols, via honest grid computation


def _hardy_projection_modes(values_spec: np.ndarray, keep_axis_nonneg: list) -> np.ndarray:
    return values_spec


def hankel_operator_1d(b: SymbolCoefficients, grid: Grid | None = None) -> HankelOp:
    """Matrix of phi -> P_{k>=0}(b * conj(phi)) on the exponential basis
    e_0..e_{M-1}, computed by sampling on a grid with N >= 4M (alias-free)."""
    if b.dim != 1:
        raise ValueError("use little_hankel for 2D symbols")
    M = b.degree
    if grid is None:
        n = max(3, int(np.ceil(np.log2(4 * M))))
        grid = Grid(n, 1)
    if grid.n_points < 4 * M:
        raise ValueError("need N >= 4*degree to avoid aliasing")
    bs = b.to_signal(grid).values
    N = grid.n_points
    cols = np.empty((M, M), dtype=complex)
    x = grid.points()
    for j in range(M):
        phi = np.exp(2j * np.pi * j * x)
        prod = bs * np.conj(phi)
        spec = np.fft.fft(prod) / N
        cols[:, j] = spec[:M]
    om = OperatorMatrix(cols, ("modes", tuple(range(M))), ("modes", tuple(range(M))))
    return HankelOp(om, "operator_on_H2", sequence=_sequence_from_symbol(b))


def _sequence_from_symbol(b: SymbolCoefficients) -> np.ndarray:
    M = b.degree
    seq = np.zeros(2 * M - 1, dtype=complex)
    seq[:M] = b.coeffs
    return seq


def little_hankel(b: SymbolCoefficients, grid: Grid | None = None) -> HankelOp:
    """Matrix of phi -> P_(+,+){k_i >= 0}(b * conj(phi)) on the bi-mode basis
    {(j1, j2): 0 <= j_i < M}, row-major ordering."""
    if b.dim != 2:
        raise ValueError("little_hankel needs a 2D symbol")
    M = b.degree
    if grid is None:
        n = max(3, int(np.ceil(np.log2(4 * M))))
        grid = Grid(n, 2)
    if grid.n_points < 4 * M:
        raise ValueError("need N >= 4*degree to avoid aliasing")
    bs = b.to_signal(grid).values
    N = grid.n_points
    basis = [(j1, j2) for j1 in range(M) for j2 in range(M)]
    cols = np.empty((M * M, M * M), dtype=complex)
    x = grid.points()
    for col, (j1, j2) in enumerate(basis):
        phi = np.multiply.outer(np.exp(2j * np.pi * j1 * x), np.exp(2j * np.pi * j2 * x))
        spec = np.fft.fft2(bs * np.conj(phi)) / N ** 2
        cols[:, col] = spec[:M, :M].ravel()
    om = OperatorMatrix(cols, ("bimodes", tuple(basis)), ("bimodes", tuple(basis)))
    return HankelOp(om, "little_product")


def little_hankel_structural(b: SymbolCoefficients) -> np.ndarray:
    """Entries bhat(i1+j1, i2+j2) directly from the coefficient array."""
    M = b.degree
    c = np.zeros((2 * M, 2 * M), dtype=complex)
    c[:M, :M] = b.coeffs
    out = np.empty((M * M, M * M), dtype=complex)
    for r, (i1, i2) in enumerate([(a, b_) for a in range(M) for b_ in range(M)]):
        for col, (j1, j2) in enumerate([(a, b_) for a in range(M) for b_ in range(M)]):
            out[r, col] = c[i1 + j1, i2 + j2]
    return out


# ---------------------------------------------------------------------------
# commutators [M_b, H] on the truncated mode basis


def _mode_basis(K: int) -> list:
    return list(range(-K, K + 1))


def commutator_matrix(b: Signal, axes: tuple[int, ...] = (1,), mode_cutoff: int | None = None,
                      variant: str = "imaginary") -> OperatorMatrix:
    """Matrix of the iterated commutator [...[M_b, H_a1], ..., H_ak] on the
    truncated mode basis [-K, K]^d.

    variant 'imaginary' uses the real-for-real multiplier -i sgn(k); variant
    'signum' uses sgn(k) = P_+ - P_-, which matches printed block identities.
    """
    grid = b.grid
    d = grid.dim
    N = grid.n_points
    if mode_cutoff is None:
        mode_cutoff = N // 4
    K = mode_cutoff
    if K > N // 2 - 1:
        raise ValueError("mode cutoff exceeds grid")
    apply_vals = _iterated_commutator_values(b, axes, variant)

    def comm_apply(f: Signal) -> Signal:
        return Signal(grid, apply_vals(f.values))

    modes1d = _mode_basis(K)
    if d == 1:
        basis = [(k,) for k in modes1d]
    elif d == 2:
        basis = [(k1, k2) for k1 in modes1d for k2 in modes1d]
    else:
        raise ValueError("d must be 1 or 2")
    cols = np.empty((len(basis), len(basis)), dtype=complex)
    for c, kvec in enumerate(basis):
        e = transforms.fourier_mode(grid, *kvec)
        out = comm_apply(e)
        spec = np.fft.fftn(out.values) / N ** d
        if d == 1:
            cols[:, c] = [spec[k % N] for (k,) in basis]
        else:
            cols[:, c] = [spec[k1 % N, k2 % N] for (k1, k2) in basis]
    return OperatorMatrix(cols, ("modes", tuple(basis)), ("modes", tuple(basis)))


def _iterated_commutator_values(b: Signal, axes, variant: str):
    """Value-level application of A_d where A_0 = M_b, A_j = [A_{j-1}, H_j]."""
    trans = transforms.hilbert_transform if variant == "imaginary" else transforms.signum_transform
    grid = b.grid

    def hilb(ax, vals):
        return trans(ax, Signal(grid, vals)).values

    apply = lambda vals: b.values * vals
    for ax in axes:
        def nxt(vals, prev=apply, ax=ax):
            return prev(hilb(ax, vals)) - hilb(ax, prev(vals))
        apply = nxt
    return apply


def block_identity_check(b: Signal, mode_cutoff: int | None = None) -> float:
    """Verify the projection block identities of the commutator, in the
    sign-multiplier normalization H' = P_+ - P_-:

      d=1:  P_+ C P_+ = 0,  P_- C P_- = 0,
            P_+ C P_- = -2 P_+ M_b P_-,  P_- C P_+ = +2 P_- M_b P_+.
      d=2:  P_{-s} C P_s = s(1)s(2) * 4 * P_{-s} M_b P_s  for all sign pairs s.

    The factor 2^d comes from H = +-(I - 2P) on mean-free signals.  Returns
    the largest defect over all identities, measured column by column on the
    truncated mode basis (an upper bound for the scaled Frobenius defect).
    """
    grid = b.grid
    d = grid.dim
    N = grid.n_points
    K = mode_cutoff if mode_cutoff is not None else N // 4
    apply_comm = _iterated_commutator_values(b, tuple(range(1, d + 1)), "signum")

    def project(vals: np.ndarray, sigma) -> np.ndarray:
        out = Signal(grid, vals)
        for ax, s in enumerate(sigma, start=1):
            out = transforms.analytic_projection(s, ax, out)
        return out.values

    modes1d = _mode_basis(K)
    if d == 1:
        sigmas = [("+",), ("-",)]
        basis = [(k,) for k in modes1d]
    else:
        sigmas = [(s1, s2) for s1 in "+-" for s2 in "+-"]
        basis = [(k1, k2) for k1 in modes1d for k2 in modes1d]

    defect = 0.0
    for sigma in sigmas:
        minus_sigma = tuple("-" if s == "+" else "+" for s in sigma)
        sign = np.prod([1.0 if s == "+" else -1.0 for s in sigma])
        factor = sign * 2.0 ** d
        for kvec in basis:
            e = transforms.fourier_mode(grid, *kvec).values
            dom = project(e, sigma)
            lhs = project(apply_comm(dom), minus_sigma)
            rhs = factor * project(b.values * dom, minus_sigma)
            defect = max(defect, float(np.max(np.abs(lhs - rhs))) * grid.weight ** 0.5)
        # the diagonal blocks vanish
        for kvec in basis:
            e = transforms.fourier_mode(grid, *kvec).values
            dom = project(e, sigma)
            diag = project(apply_comm(dom), sigma)
            defect = max(defect, float(np.max(np.abs(diag))) * grid.weight ** 0.5)
    return defect


# ---------------------------------------------------------------------------
# Nehari ratio experiments


class TruncationError(RuntimeError):
    pass


def nehari_ratio(b: SymbolCoefficients, bmo_variant: str = "dyadic",
                 grid: Grid | None = None, product_depth: int = 2) -> dict:
    """Computes ||H_b|| and the requested BMO norm of the analytic part of b,
    plus their ratio.  The report records both conventions in play."""
    from . import norms as _norms

    M = b.degree
    if b.dim == 1:
        H = hankel_operator_1d(b, grid)
        g = grid or Grid(max(3, int(np.ceil(np.log2(4 * M)))), 1)
        analytic = b.to_signal(g)
        if bmo_variant == "dyadic":
            bmo_val = _norms.bmo_dyadic(analytic).value
        elif bmo_variant == "dyadic_shift":
            bmo_val = _norms.bmo_dyadic_shift_average(analytic)
        else:
            raise ValueError("1D variants: 'dyadic', 'dyadic_shift'")
    else:
        H = little_hankel(b, grid)
        g = grid or Grid(max(3, int(np.ceil(np.log2(4 * M)))), 2)
        analytic = b.to_signal(g)
        if bmo_variant != "product_exact":
            raise ValueError("2D variant: 'product_exact'")
        bmo_val = _norms.bmo_product(analytic, mode="exact", depth=product_depth).value
    hankel_norm = operator_norm(H.matrix)
    if bmo_val == 0.0 and hankel_norm > 1e-12:
        raise TruncationError("BMO value 0 with nonzero Hankel norm: inconsistent truncation")
    return {
        "hankel_norm": hankel_norm,
        "bmo_value": bmo_val,
        "ratio": hankel_norm / bmo_val if bmo_val > 0 else np.nan,
        "bmo_variant": bmo_variant,
        "degree": M,
        "projection": "analytic (k >= 0, Hardy with DC)",
    }
