"""Norm functionals: L^p, operator norm, and the BMO hierarchy.

The BMO functionals are quadratic forms on wavelet coefficients:

    value(U)^2 = |U|^{-1} * sum_{R subset U} |<b, w_R>|^2

with U ranging over dyadic intervals (dyadic BMO), dyadic rectangles
(rectangular BMO), arbitrary unions of finest cells (product BMO), or
shadows of one-parameter rectangle collections (the d-1 norm).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .dyadic import (
    DyadicInterval,
    DyadicRectangle,
    Grid,
    RectangleCollection,
    Signal,
)
from . import transforms


class OperatorNormError(RuntimeError):
    def __init__(self, message, lower, upper):
        super().__init__(message)
        self.bracket = (lower, upper)


@dataclass
class OperatorMatrix:
    """Dense matrix with declared domain/codomain bases."""

    entries: np.ndarray
    domain_basis: tuple
    codomain_basis: tuple

    def __post_init__(self):
        self.entries = np.asarray(self.entries, dtype=complex)

    @property
    def shape(self):
        return self.entries.shape

    def compose(self, other: "OperatorMatrix") -> "OperatorMatrix":
        if self.domain_basis != other.codomain_basis:
            raise ValueError("basis mismatch in composition")
        return OperatorMatrix(self.entries @ other.entries, other.domain_basis, self.codomain_basis)

    def __matmul__(self, other):
        return self.compose(other)

    def adjoint(self) -> "OperatorMatrix":
        return OperatorMatrix(self.entries.conj().T, self.codomain_basis, self.domain_basis)

    def norm(self) -> float:
        return operator_norm(self)


def operator_norm(A, method: str = "auto", tol: float = 1e-10, max_iter: int = 10_000) -> float:
    """Largest singular value; dense SVD up to dimension 4096, else power iteration."""
    mat = A.entries if isinstance(A, OperatorMatrix) else np.asarray(A, dtype=complex)
    if mat.size == 0:
        return 0.0
    if method == "auto":
        method = "dense" if max(mat.shape) <= 4096 else "power"
    if method == "dense":
        return float(np.linalg.svd(mat, compute_uv=False)[0])
    if method != "power":
        raise ValueError("method must be 'auto', 'dense' or 'power'")
    rng = np.random.default_rng(0)
    v = rng.standard_normal(mat.shape[1]) + 1j * rng.standard_normal(mat.shape[1])
    v /= np.linalg.norm(v)
    sigma = 0.0
    for _ in range(max_iter):
        w = mat.conj().T @ (mat @ v)
        new_sigma = float(np.sqrt(np.linalg.norm(w)))
        nw = np.linalg.norm(w)
        if nw == 0:
            return 0.0
        v = w / nw
        if abs(new_sigma - sigma) <= tol * max(new_sigma, 1e-300):
            return new_sigma
        sigma = new_sigma
    upper = float(np.sqrt(np.linalg.norm(mat, 1) * np.linalg.norm(mat, np.inf)))
    raise OperatorNormError(
        f"power iteration did not converge in {max_iter} steps", sigma, upper
    )


def lp_norm(f: Signal, p) -> float:
    if p == np.inf or p == "inf":
        return float(np.max(np.abs(f.values)))
    if p < 1:
        raise ValueError("p must be >= 1 or inf")
    return float((np.sum(np.abs(f.values) ** p) * f.grid.weight) ** (1.0 / p))


@dataclass
class BmoReport:
    """Value of a BMO-type sup, the witness achieving (or certifying) it,
    and whether the search was exhaustive."""

    value: float
    witness: object
    exactness: str  # "exact" | "lower_bound"
    family: str = "haar"
    detail: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# dyadic BMO (d = 1)


def bmo_dyadic(b: Signal) -> BmoReport:
    """sup over dyadic I of (|I|^-1 sum_{J subset I} |<b,h_J>|^2)^(1/2); exact."""
    if b.grid.dim != 1:
        raise ValueError("bmo_dyadic handles d = 1")
    coeffs = transforms.haar_analysis(b)
    n = b.grid.depth
    # mass[p][j] = sum of |c_J|^2 over J inside I(p, j), accumulated fine-to-coarse
    mass = {p: np.abs(coeffs.wavelet[p]) ** 2 for p in range(n)}
    for p in range(n - 2, -1, -1):
        children = mass[p + 1].reshape(-1, 2).sum(axis=1)
        mass[p] = mass[p] + children
    best_val, best_iv = 0.0, DyadicInterval(0, 0)
    for p in range(n):
        vals = mass[p] * 2.0 ** p  # |I|^{-1} = 2^p
        j = int(np.argmax(vals))
        if vals[j] > best_val:
            best_val, best_iv = float(vals[j]), DyadicInterval(-p, j)
    return BmoReport(np.sqrt(best_val), best_iv, "exact", "haar")


def bmo_dyadic_shift_average(b: Signal, shifts: int = 8) -> float:
    """Average of bmo_dyadic over circular grid shifts; a separate labeled
    output for comparing against translation-invariant BMO, never substituted
    for the plain dyadic norm."""
    N = b.grid.n_points
    vals = []
    for s in range(shifts):
        shifted = Signal(b.grid, np.roll(b.values, s * (N // shifts)))
        vals.append(bmo_dyadic(shifted).value)
    return float(np.mean(vals))


# ---------------------------------------------------------------------------
# wavelet coefficient books for d = 2


def _haar_coefficient_book(b: Signal, depth: int | None) -> dict:
    """Map DyadicRectangle -> <b, h_R> for all wavelet rectangles resolvable
    on the grid, optionally truncated to sides >= 2^-depth."""
    coeffs = transforms.haar_analysis(b)
    n = b.grid.depth
    book = {}
    for (p1, p2), arr in coeffs.ww.items():
        if depth is not None and (p1 > depth or p2 > depth):
            continue
        for j1 in range(1 << p1):
            for j2 in range(1 << p2):
                c = arr[j1, j2]
                r = DyadicRectangle((DyadicInterval(-p1, j1), DyadicInterval(-p2, j2)))
                book[r] = complex(c)
    return book


def _meyer_coefficient_book(b: Signal, meyer, depth: int | None, kind: str = "w") -> dict:
    book = {}
    for r in meyer.rectangles():
        p1 = -r.coordinates[0].scale_exponent
        p2 = -r.coordinates[1].scale_exponent
        if depth is not None and (p1 > depth or p2 > depth):
            continue
        w = meyer.tensor(r, (kind, kind))
        book[r] = complex(b.inner(w))
    return book


def coefficient_book(b: Signal, family: str = "haar", meyer=None, depth: int | None = None) -> dict:
    if family == "haar":
        return _haar_coefficient_book(b, depth)
    if family == "meyer":
        if meyer is None:
            raise ValueError("pass the MeyerFamily for family='meyer'")
        return _meyer_coefficient_book(b, meyer, depth)
    raise ValueError("family must be 'haar' or 'meyer'")


def _book_from_args(b, family, meyer, depth, book):
    if book is not None:
        return book
    return coefficient_book(b, family, meyer, depth)


# ---------------------------------------------------------------------------
# rectangular BMO


def bmo_rect(b: Signal, family: str = "haar", meyer=None, depth: int | None = None,
             book: dict | None = None) -> BmoReport:
    """Product-BMO quadratic form with U ranging over dyadic rectangles; exact."""
    if b.grid.dim != 2:
        raise ValueError("bmo_rect handles d = 2")
    book = _book_from_args(b, family, meyer, depth, book)
    n = b.grid.depth if depth is None else depth
    # mass on the rectangle lattice, then accumulate over contained rectangles
    mass = {}
    for r, c in book.items():
        p1 = -r.coordinates[0].scale_exponent
        p2 = -r.coordinates[1].scale_exponent
        key = (p1, p2)
        if key not in mass:
            mass[key] = np.zeros((1 << p1, 1 << p2))
        mass[key][r.coordinates[0].position, r.coordinates[1].position] += abs(c) ** 2
    best_val, best_rect = 0.0, None
    for q1 in range(n + 1):
        for q2 in range(n + 1):
            # total coefficient mass inside each rectangle of scale (q1, q2)
            tot = np.zeros((1 << q1, 1 << q2))
            for (p1, p2), arr in mass.items():
                if p1 < q1 or p2 < q2:
                    continue
                blk = arr.reshape(1 << q1, 1 << (p1 - q1), 1 << q2, 1 << (p2 - q2))
                tot += blk.sum(axis=(1, 3))
            tot *= 2.0 ** (q1 + q2)  # |U|^{-1}
            j = np.unravel_index(int(np.argmax(tot)), tot.shape)
            if tot[j] > best_val:
                best_val = float(tot[j])
                best_rect = DyadicRectangle(
                    (DyadicInterval(-q1, int(j[0])), DyadicInterval(-q2, int(j[1])))
                )
    return BmoReport(np.sqrt(best_val), best_rect, "exact", family)


# ---------------------------------------------------------------------------
# product BMO


def _rect_cell_bitmask(r: DyadicRectangle, depth: int) -> int:
    grid = Grid(depth, 2)
    mask = np.zeros(grid.shape, dtype=bool)
    mask[r.cell_slices(grid)] = True
    bits = 0
    for idx in np.flatnonzero(mask.ravel()):
        bits |= 1 << int(idx)
    return bits


def _value_of_union(union_bits: int, depth: int, rect_bits: list, rect_mass: list) -> float:
    cells = bin(union_bits).count("1")
    if cells == 0:
        return 0.0
    area = cells * 4.0 ** -depth
    num = 0.0
    for bits, m in zip(rect_bits, rect_mass):
        if bits & ~union_bits == 0:
            num += m
    return num / area


def _best_cell_union(depth: int, rect_bits: list, rect_mass: list) -> tuple[float, int]:
    """Exact sup over all nonempty unions of finest cells, vectorized over the
    2^(#cells) subset masks."""
    n_cells = 4 ** depth
    U = np.arange(1, 1 << n_cells, dtype=np.uint64)
    counts = np.bitwise_count(U).astype(float)
    num = np.zeros(U.shape, dtype=float)
    for bits, m in zip(rect_bits, rect_mass):
        b = np.uint64(bits)
        num += np.where((U & b) == b, m, 0.0)
    vals = num / (counts * 4.0 ** -depth)
    best = int(np.argmax(vals))
    return float(vals[best]), int(U[best])


def bmo_product(b: Signal, mode: str = "exact", family: str = "haar", meyer=None,
                depth: int | None = None, book: dict | None = None,
                max_rect_subset: int = 22) -> BmoReport:
    """sup over unions of finest cells U of the product-BMO quadratic form.

    Exact search is feasible by full cell-subset enumeration when the grid has
    at most 20 cells, or by enumerating unions of the nonzero-coefficient
    rectangles (the sup is always attained on such a union: removing cells
    that complete no coefficient rectangle only shrinks |U|).
    Heuristic mode returns a certified lower bound.
    """
    if b.grid.dim != 2:
        raise ValueError("bmo_product handles d = 2")
    book = _book_from_args(b, family, meyer, depth, book)
    n = b.grid.depth if depth is None else depth
    tol = 1e-12 * max([abs(c) for c in book.values()] + [1.0])
    nz = [(r, abs(c) ** 2) for r, c in book.items() if abs(c) > tol]
    rects = [r for r, _ in nz]
    rect_bits = [_rect_cell_bitmask(r, n) for r in rects]
    rect_mass = [m for _, m in nz]
    n_cells = 4 ** n

    if mode == "exact":
        if n_cells <= 20:
            best_val, best_bits = _best_cell_union(n, rect_bits, rect_mass)
            witness = _bits_to_mask(best_bits, n)
            return BmoReport(np.sqrt(best_val), witness, "exact", family,
                             {"search": "cells", "depth": n})
        if len(rects) <= max_rect_subset:
            best_val, best_bits = 0.0, 0
            for size in range(1, len(rects) + 1):
                for combo in itertools.combinations(range(len(rects)), size):
                    union_bits = 0
                    for i in combo:
                        union_bits |= rect_bits[i]
                    v = _value_of_union(union_bits, n, rect_bits, rect_mass)
                    if v > best_val:
                        best_val, best_bits = v, union_bits
            witness = _bits_to_mask(best_bits, n)
            return BmoReport(np.sqrt(best_val), witness, "exact", family,
                             {"search": "rect-unions", "depth": n})
        raise ValueError(
            f"exact product BMO infeasible ({n_cells} cells, {len(rects)} rectangles);"
            " use mode='heuristic'"
        )

    if mode != "heuristic":
        raise ValueError("mode must be 'exact' or 'heuristic'")

    # heuristic: rectangles, then greedy unions grown from each rectangle seed
    best_val, best_bits = 0.0, 0
    rect_report = bmo_rect(b, family, meyer, depth, book=book)
    order = np.argsort(rect_mass)[::-1]
    for seed_pos in order[:12]:
        union_bits = rect_bits[seed_pos]
        current = _value_of_union(union_bits, n, rect_bits, rect_mass)
        improved = True
        while improved:
            improved = False
            best_gain, best_add = 0.0, None
            for i in range(len(rects)):
                cand = union_bits | rect_bits[i]
                if cand == union_bits:
                    continue
                v = _value_of_union(cand, n, rect_bits, rect_mass)
                if v > current + best_gain:
                    best_gain, best_add = v - current, cand
            if best_add is not None:
                union_bits, current = best_add, current + best_gain
                improved = True
        if current > best_val:
            best_val, best_bits = current, union_bits
    if rect_report.value ** 2 >= best_val:
        return BmoReport(rect_report.value, rect_report.witness, "lower_bound", family,
                         {"search": "heuristic"})
    return BmoReport(np.sqrt(best_val), _bits_to_mask(best_bits, n), "lower_bound",
                     family, {"search": "heuristic"})


def _bits_to_mask(bits: int, depth: int) -> np.ndarray:
    grid = Grid(depth, 2)
    flat = np.zeros(grid.n_points ** 2, dtype=bool)
    for idx in range(flat.size):
        if bits >> idx & 1:
            flat[idx] = True
    return flat.reshape(grid.shape)


def bmo_product_of_book(book: dict, depth: int, mode: str = "exact",
                        max_rect_subset: int = 22) -> BmoReport:
    """Product BMO evaluated directly on a coefficient book (wavelet-family
    agnostic; used by the damped projections where the signal is synthetic)."""
    tol = 1e-12 * max([abs(c) for c in book.values()] + [1.0])
    nz = [(r, abs(c) ** 2) for r, c in book.items() if abs(c) > tol]
    rects = [r for r, _ in nz]
    rect_bits = [_rect_cell_bitmask(r, depth) for r in rects]
    rect_mass = [m for _, m in nz]
    n_cells = 4 ** depth
    best_val, best_bits = 0.0, 0
    if mode == "exact" and n_cells <= 20:
        best_val, best_bits = _best_cell_union(depth, rect_bits, rect_mass)
    elif mode == "exact" and len(rects) <= max_rect_subset:
        for size in range(1, len(rects) + 1):
            for combo in itertools.combinations(range(len(rects)), size):
                union_bits = 0
                for i in combo:
                    union_bits |= rect_bits[i]
                v = _value_of_union(union_bits, depth, rect_bits, rect_mass)
                if v > best_val:
                    best_val, best_bits = v, union_bits
    elif mode == "exact":
        raise ValueError("exact product BMO infeasible for this book")
    else:
        raise ValueError("only exact mode is supported for raw books")
    return BmoReport(np.sqrt(best_val), _bits_to_mask(best_bits, depth), "exact",
                     "book", {"depth": depth})


# ---------------------------------------------------------------------------
# BMO with one parameter lost


def bmo_minus1(b: Signal, family: str = "haar", meyer=None, depth: int | None = None,
               book: dict | None = None, max_subset: int = 20) -> BmoReport:
    """sup over collections sharing one coordinate interval of
    (|sh(U)|^-1 sum_{R in U} |<b,w_R>|^2)^(1/2)."""
    if b.grid.dim != 2:
        raise ValueError("bmo_minus1 handles d = 2")
    book = _book_from_args(b, family, meyer, depth, book)
    tol = 1e-12 * max([abs(c) for c in book.values()] + [1.0])
    best_val, best_members, exact = 0.0, (), True
    for axis in (0, 1):
        groups: dict = {}
        for r, c in book.items():
            if abs(c) <= tol:
                continue
            groups.setdefault(r.coordinates[axis], []).append((r, abs(c) ** 2))
        for shared, items in groups.items():
            others = [r.coordinates[1 - axis] for r, _ in items]
            masses = [m for _, m in items]
            if len(items) <= max_subset:
                val, members = _best_shared_subset(shared, others, masses, exact=True)
            else:
                val, members = _best_shared_subset(shared, others, masses, exact=False)
                exact = False
            if val > best_val:
                best_val = val
                if axis == 0:
                    best_members = tuple(
                        DyadicRectangle((shared, iv)) for iv in members
                    )
                else:
                    best_members = tuple(
                        DyadicRectangle((iv, shared)) for iv in members
                    )
    witness = RectangleCollection(best_members, b.grid) if best_members else None
    return BmoReport(np.sqrt(best_val), witness,
                     "exact" if exact else "lower_bound", family)


def _union_length(intervals) -> float:
    """Measure of a union of dyadic intervals in [0,1)."""
    if not intervals:
        return 0.0
    finest = min(iv.scale_exponent for iv in intervals)
    covered = set()
    for iv in intervals:
        shift = iv.scale_exponent - finest
        start = iv.position << shift
        covered.update(range(start, start + (1 << shift)))
    return len(covered) * 2.0 ** finest


def _best_shared_subset(shared, others, masses, exact: bool):
    denom_factor = shared.length
    k = len(others)
    if exact:
        best, best_members = 0.0, ()
        for size in range(1, k + 1):
            for combo in itertools.combinations(range(k), size):
                num = sum(masses[i] for i in combo)
                sh = _union_length([others[i] for i in combo]) * denom_factor
                if num / sh > best:
                    best, best_members = num / sh, tuple(others[i] for i in combo)
        return best, best_members
    # greedy fallback
    order = sorted(range(k), key=lambda i: -masses[i])
    chosen: list = []
    best, best_members = 0.0, ()
    num = 0.0
    for i in order:
        chosen.append(i)
        num += masses[i]
        sh = _union_length([others[j] for j in chosen]) * denom_factor
        if num / sh > best:
            best, best_members = num / sh, tuple(others[j] for j in chosen)
    return best, best_members
