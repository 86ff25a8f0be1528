"""Embeddedness, Journe-damped projections, the Carleson-type family, and the
multiparameter lower-bound experiment (the alpha/beta/gamma decomposition).

Embeddedness is computed from the double maximal-function enlargement

    V = { MM 1_{ {MM 1_U > 1/2} } > 1/2 }

on a 3x-padded non-periodic window (so dilation never wraps around), with

    Emb(R; U) = sup { mu >= 1 : mu R inside V }.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dyadic import (
    DyadicInterval,
    DyadicRectangle,
    Grid,
    RectangleCollection,
    Signal,
    haar_tensor,
    zeros,
)
from .norms import (
    BmoReport,
    bmo_minus1,
    bmo_product,
    bmo_product_of_book,
    bmo_rect,
    coefficient_book,
    lp_norm,
)
from .transforms import MeyerFamily, all_analytic_projection


# ---------------------------------------------------------------------------
# padded-window double maximal function and embeddedness


def _padded_strong_maximal(mask: np.ndarray, depth: int) -> np.ndarray:
    """Strong maximal function of an indicator on the 3x-padded window, using
    the dyadic rectangles of the integer-dyadic grid contained in [-1, 2)^2."""
    N = 1 << depth
    L = 3 * N
    f = mask.astype(float)
    best = np.zeros((L, L), dtype=float)

    def axis_blocks(k: int):
        """Aligned block decomposition of [-1, 2) at scale 2^k; returns block
        size in cells and the number of full blocks from the left edge."""
        size = 1 << (depth + k)
        count = L // size  # -1 is a multiple of every 2^k <= 1, so all aligned
        return size, count

    scales = list(range(-depth, 1)) + [1]
    for k1 in scales:
        if k1 == 1:
            # only [0, 2) fits; handle by explicit slice
            s1, c1 = 2 * N, 1
            row_slices = [slice(N, 3 * N)]
        else:
            s1, c1 = axis_blocks(k1)
            row_slices = [slice(i * s1, (i + 1) * s1) for i in range(c1)]
        for k2 in scales:
            if k2 == 1:
                col_slices = [slice(N, 3 * N)]
                s2 = 2 * N
            else:
                s2, c2 = axis_blocks(k2)
                col_slices = [slice(i * s2, (i + 1) * s2) for i in range(c2)]
            if k1 <= 0 and k2 <= 0:
                blocks = f.reshape(L // s1, s1, L // s2, s2)
                avg = blocks.mean(axis=(1, 3))
                blown = np.repeat(np.repeat(avg, s1, axis=0), s2, axis=1)
                np.maximum(best, blown, out=best)
            else:
                for rs in row_slices:
                    for cs in col_slices:
                        avg = f[rs, cs].mean()
                        if avg > 0:
                            view = best[rs, cs]
                            np.maximum(view, avg, out=view)
    return best


def enlarged_set(U_mask: np.ndarray, grid: Grid) -> np.ndarray:
    """V from the double maximal construction, as a mask on the 3x-padded
    window (the unit square occupies the central block [N:2N, N:2N])."""
    if grid.dim != 2:
        raise ValueError("enlarged_set is two-dimensional")
    N = grid.n_points
    L = 3 * N
    padded = np.zeros((L, L), dtype=bool)
    padded[N : 2 * N, N : 2 * N] = U_mask
    m1 = _padded_strong_maximal(padded, grid.depth) > 0.5
    m2 = _padded_strong_maximal(m1, grid.depth) > 0.5
    return m2


def embeddedness(R: DyadicRectangle, U_mask: np.ndarray, grid: Grid,
                 V_mask: np.ndarray | None = None, mu_tol: float = 1e-9) -> float:
    """Emb(R; U) = largest mu >= 1 with the mu-dilate of R inside V,
    found by bisection refined to mu_tol; V on the padded window."""
    s1, s2 = R.cell_slices(grid)
    if not U_mask[s1, s2].all():
        raise ValueError("R must be contained in U")
    V = enlarged_set(U_mask, grid) if V_mask is None else V_mask
    N = grid.n_points

    centers = [iv.center for iv in R.coordinates]
    halves = [iv.length / 2.0 for iv in R.coordinates]

    def dilate_inside(mu: float) -> bool:
        # cells of the padded window intersecting mu*R must all lie in V
        idx = []
        for c, h in zip(centers, halves):
            lo = c - mu * h
            hi = c + mu * h
            if lo < -1.0 or hi > 2.0:
                return False
            a = int(np.floor(lo * N + 1e-12)) + N
            b = int(np.ceil(hi * N - 1e-12)) + N
            idx.append((a, b))
        (a1, b1), (a2, b2) = idx
        return bool(V[a1:b1, a2:b2].all())

    if not dilate_inside(1.0):
        return 1.0
    lo, hi = 1.0, 2.0
    while dilate_inside(hi):
        lo, hi = hi, hi * 2.0
        if hi > 6.0 * N:
            return hi / 2.0
    while hi - lo > mu_tol * lo:
        mid = 0.5 * (lo + hi)
        if dilate_inside(mid):
            lo = mid
        else:
            hi = mid
    return lo


# ---------------------------------------------------------------------------
# damped projection checks


def journe_damped_check(f: Signal, U_mask: np.ndarray, eps: float,
                        family: str = "haar", meyer: MeyerFamily | None = None,
                        depth: int | None = None, mode: str = "exact") -> dict:
    """Compare the product BMO of the damped projection
    sum_{R in U} Emb(R;U)^{-eps} <f, w_R> w_R against bmo_rect(f)."""
    grid = f.grid
    book = coefficient_book(f, family, meyer, depth)
    V = enlarged_set(U_mask, grid)
    damped = {}
    emb_values = {}
    n = grid.depth if depth is None else depth
    tol = 1e-12 * max([abs(c) for c in book.values()] + [1.0])
    for r, c in book.items():
        s1, s2 = r.cell_slices(grid)
        if not U_mask[s1, s2].all():
            continue
        if abs(c) <= tol:
            continue
        mu = embeddedness(r, U_mask, grid, V_mask=V)
        emb_values[r] = mu
        damped[r] = c * mu ** -eps
    if damped:
        lhs = bmo_product_of_book(
            {_coarse_key(r, n): v for r, v in damped.items()}, n, mode=mode
        ).value
    else:
        lhs = 0.0
    rhs = bmo_rect(f, family, meyer, depth).value
    return {
        "lhs_bmo": lhs,
        "rhs_rect_bmo": rhs,
        "ratio": lhs / rhs if rhs > 0 else np.nan,
        "eps": eps,
        "embeddedness": emb_values,
    }


def _coarse_key(r: DyadicRectangle, depth: int) -> DyadicRectangle:
    return r


class JourneCheckError(RuntimeError):
    def __init__(self, message, offenders):
        super().__init__(message)
        self.offenders = offenders


def journe_inequality_checker_d1(f: Signal, collection: RectangleCollection,
                                 V_mask: np.ndarray, emb_map: dict, eta: float,
                                 family: str = "haar", meyer: MeyerFamily | None = None,
                                 depth: int | None = None, mode: str = "exact") -> dict:
    """Verify the two geometric conclusions for a supplied (V, Emb) candidate
    and evaluate the damped inequality with exponent 2d, reporting the
    empirical constant.

      (a) Emb(R) * R inside V for every R in the collection;
      (b) |V| < (1 + eta) |sh(collection)|;
      (c) product-BMO(damped projection) <= K * bmo_minus1(f): K reported.
    """
    grid = f.grid
    N = grid.n_points
    d = grid.dim
    offenders_a = []
    for r in collection.members:
        mu = emb_map[r]
        ok = True
        idx = []
        for iv in r.coordinates:
            c, h = iv.center, iv.length / 2.0
            lo, hi = c - mu * h, c + mu * h
            if lo < -1.0 or hi > 2.0:
                ok = False
                break
            idx.append((int(np.floor(lo * N + 1e-12)) + N, int(np.ceil(hi * N - 1e-12)) + N))
        if ok:
            (a1, b1), (a2, b2) = idx
            ok = bool(V_mask[a1:b1, a2:b2].all())
        if not ok:
            offenders_a.append(r)
    sh_measure = collection.shadow_measure()
    v_measure = float(np.count_nonzero(V_mask)) * grid.weight
    b_ok = v_measure < (1.0 + eta) * sh_measure + 1e-12
    if offenders_a:
        raise JourneCheckError(
            f"{len(offenders_a)} rectangles violate Emb(R)*R inside V", offenders_a
        )
    if not b_ok:
        raise JourneCheckError(
            f"|V| = {v_measure} exceeds (1+eta)|sh| = {(1 + eta) * sh_measure}",
            [("measure", v_measure, sh_measure)],
        )
    book = coefficient_book(f, family, meyer, depth)
    n = grid.depth if depth is None else depth
    damped = {}
    for r in collection.members:
        c = book.get(r, 0.0)
        if abs(c) > 0:
            damped[r] = c * emb_map[r] ** (-2.0 * d)
    lhs = bmo_product_of_book(damped, n, mode=mode).value if damped else 0.0
    rhs = bmo_minus1(f, family, meyer, depth).value
    return {
        "a_ok": True,
        "b_ok": True,
        "v_measure": v_measure,
        "shadow_measure": sh_measure,
        "lhs_bmo": lhs,
        "rhs_minus1": rhs,
        "K_eta": lhs / rhs if rhs > 0 else np.nan,
        "eta": eta,
    }


def trivial_candidate(collection: RectangleCollection) -> tuple[np.ndarray, dict]:
    """Emb = 1 and V = sh(collection) on the padded window: satisfies the
    geometric conclusions with eta = 0 (and no damping)."""
    grid = collection.grid
    N = grid.n_points
    V = np.zeros((3 * N, 3 * N), dtype=bool)
    V[N : 2 * N, N : 2 * N] = collection.shadow_mask()
    emb = {r: 1.0 for r in collection.members}
    return V, emb


def maximal_candidate(collection: RectangleCollection) -> tuple[np.ndarray, dict]:
    """(V, Emb) from the double maximal-function construction."""
    grid = collection.grid
    U = collection.shadow_mask()
    V = enlarged_set(U, grid)
    emb = {r: embeddedness(r, U, grid, V_mask=V) for r in collection.members}
    return V, emb


# ---------------------------------------------------------------------------
# the Carleson-type family


def carleson_rectangles(n: int) -> list[DyadicRectangle]:
    """Nested corner chain anchored at (1/4, 1/4): the a-th member has sides
    2^{-a-2} x 2^{a-n-2}, a = 0..n; all have area 2^{-n-4} and share the
    anchor corner, so the union is a staircase of measure 2^{-n-5} (n+2)."""
    out = []
    for a in range(n + 1):
        i1 = DyadicInterval(-(a + 2), 1 << a)
        i2 = DyadicInterval(a - n - 2, 1 << (n - a))
        out.append(DyadicRectangle((i1, i2)))
    return out


def carleson_family(n: int, grid: Grid, seed: int = 0) -> tuple[Signal, dict]:
    """b_n = sum of eps_a w_{R_a} over the corner chain, with deterministic
    seeded signs; returns the signal and its coefficient book."""
    if grid.dim != 2:
        raise ValueError("carleson_family lives on d = 2")
    if grid.depth < n + 3:
        raise ValueError(f"need grid depth >= {n + 3} for the n = {n} family")
    rng = np.random.default_rng(np.random.Philox(key=np.uint64(seed)))
    rects = carleson_rectangles(n)
    signs = rng.integers(0, 2, size=len(rects)) * 2 - 1
    b = zeros(grid)
    book = {}
    for r, s in zip(rects, signs):
        b = b + float(s) * haar_tensor(r, grid)
        book[r] = float(s)
    return b, book


# ---------------------------------------------------------------------------
# the multiparameter lower-bound experiment


@dataclass
class SymbolDecomposition:
    alpha: Signal
    beta: Signal
    gamma: Signal
    collection: RectangleCollection
    damped_alpha: Signal
    slices: dict = field(default_factory=dict)  # embeddedness level -> Signal


def _meyer_analytic_book(b: Signal, meyer: MeyerFamily) -> dict:
    """Coefficients against the unit-normalized analytic tensor family."""
    book = {}
    for r in meyer.rectangles():
        v = meyer.tensor_analytic(r, normalized=True)
        book[r] = complex(b.inner(v))
    return book


def lower_bound_experiment(b: Signal, collection: RectangleCollection,
                           meyer: MeyerFamily, eta_J: float = 0.01,
                           eta_minus1: float = 0.01) -> dict:
    """The alpha/beta/gamma chain for the Hankel lower bound.

    Normalizes b so the collection's analytic-coefficient mass equals the
    shadow measure, forms alpha (projection onto the collection), beta
    (rectangles inside V but outside the collection), gamma (the rest), and
    reports the norm chain together with the exact algebraic checks:
      * additivity b = alpha + beta + gamma (by construction),
      * ||H_beta alpha|| <= ||beta||_4 ||alpha||_4 (Cauchy-Schwarz),
      * the embeddedness slice table for H_gamma.
    """
    grid = b.grid
    if grid.dim != 2:
        raise ValueError("lower_bound_experiment is two-dimensional")
    book = _meyer_analytic_book(b, meyer)
    mass = sum(abs(book.get(r, 0.0)) ** 2 for r in collection.members)
    sh_measure = collection.shadow_measure()
    if mass <= 0:
        raise ValueError("collection carries no analytic coefficient mass")
    scale = np.sqrt(sh_measure / mass)
    b = scale * b
    book = {r: c * scale for r, c in book.items()}

    U = collection.shadow_mask()
    V = enlarged_set(U, grid)
    emb = {r: embeddedness(r, U, grid, V_mask=V) for r in collection.members}

    alpha = zeros(grid)
    damped = zeros(grid)
    for r in collection.members:
        v = meyer.tensor_analytic(r, normalized=True)
        alpha = alpha + book[r] * v
        damped = damped + book[r] * emb[r] ** (-2.0 * grid.dim) * v

    beta = zeros(grid)
    members = set(collection.members)
    book_tol = 1e-12 * max([abs(c) for c in book.values()] + [1.0])
    for r, c in book.items():
        if r in members or abs(c) <= book_tol:
            continue
        s1, s2 = r.cell_slices(grid)
        N = grid.n_points
        inside_V = bool(V[N + s1.start : N + s1.stop, N + s2.start : N + s2.stop].all())
        if inside_V:
            beta = beta + c * meyer.tensor_analytic(r, normalized=True)
    gamma = b - alpha - beta

    def hankel_apply(symbol: Signal, phi: Signal) -> Signal:
        return all_analytic_projection(Signal(grid, symbol.values * np.conj(phi.values)))

    h_b_alpha = hankel_apply(b, alpha)
    asq = Signal(grid, np.abs(alpha.values) ** 2 + 0j)
    p_asq = all_analytic_projection(asq)
    mean_removed = asq - Signal(grid, np.full(grid.shape, asq.mean()))
    alpha4 = lp_norm(alpha, 4)
    coeff_mass = np.sqrt(sum(abs(book[r]) ** 2 for r in collection.members))

    h_beta_alpha = hankel_apply(beta, alpha)
    beta4 = lp_norm(beta, 4)

    slices = {}
    slice_norms = {}
    levels = sorted(set(int(np.floor(np.log2(max(emb[r], 1.0)))) for r in collection.members))
    for lv in levels:
        sl = zeros(grid)
        for r in collection.members:
            if int(np.floor(np.log2(max(emb[r], 1.0)))) == lv:
                sl = sl + book[r] * meyer.tensor_analytic(r, normalized=True)
        slices[lv] = sl
        slice_norms[lv] = hankel_apply(gamma, sl).norm2()

    decomposition = SymbolDecomposition(alpha, beta, gamma, collection, damped, slices)
    additivity = float(np.max(np.abs((alpha + beta + gamma).values - b.values)))
    report = {
        "normalization_scale": float(scale),
        "shadow_measure": sh_measure,
        "coefficient_mass": float(coeff_mass),
        "H_b_alpha": h_b_alpha.norm2(),
        "P_plus_alpha_sq": p_asq.norm2(),
        "alpha_sq_mean_removed": mean_removed.norm2(),
        "alpha_4_sq": alpha4 ** 2,
        "alpha_2": alpha.norm2(),
        "symmetry_ratio": p_asq.norm2() / mean_removed.norm2() if mean_removed.norm2() > 0 else np.nan,
        "symmetry_reference": 2.0 ** (-grid.dim / 2.0),
        "H_beta_alpha": h_beta_alpha.norm2(),
        "beta_4_times_alpha_4": beta4 * alpha4,
        "beta_2": beta.norm2(),
        "gamma_2": gamma.norm2(),
        "additivity_defect": additivity,
        "embeddedness": {str(r): emb[r] for r in collection.members},
        "slice_norms": slice_norms,
        "eta_J": eta_J,
        "eta_minus1": eta_minus1,
        "decomposition": decomposition,
    }
    if h_beta_alpha.norm2() > beta4 * alpha4 * (1 + 1e-10) + 1e-12:
        raise AssertionError("Cauchy-Schwarz bound violated; numerical inconsistency")
    return report


def hankel_cases_1d(meyer: MeyerFamily, I: DyadicInterval, J: DyadicInterval) -> dict:
    """The scale trichotomy of P_+(v_I conj(v_J)) as mode-support arithmetic.

    Exactly zero when 8|J| < |I| (band difference stays negative); the whole
    product is analytic when 16|I| < |J|; in between both parts coexist.
    Products are taken by exact convolution of mode arrays, so the zero cases
    are bit-exact.
    """
    a_I = meyer.mode_array(I, "v")
    a_J = meyer.mode_array(J, "v")
    N = meyer.axis_grid.n_points
    # centered mode vectors (index - N/2 ... N/2 - 1 layout for convolution)
    cI = np.fft.fftshift(a_I)
    cJ = np.fft.fftshift(np.conj(a_J[np.array([(-k) % N for k in range(N)])]))
    conv = np.convolve(cI, cJ)
    # conv index m corresponds to mode m - (N - 2) ... two shifted sequences
    base = -(N // 2) * 2 + 0  # lowest possible mode sum after fftshift: 2 * (-N/2)
    modes = np.arange(conv.size) + 2 * (-(N // 2))
    pos = conv[modes > 0]
    neg = conv[modes < 0]
    return {
        "positive_mass": float(np.linalg.norm(pos)),
        "negative_mass": float(np.linalg.norm(neg)),
        "pos_is_zero": bool(np.all(pos == 0)),
        "all_analytic": bool(np.all(neg == 0)),
    }
