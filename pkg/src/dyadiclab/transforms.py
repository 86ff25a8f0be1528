"""Fourier and wavelet analysis on the grid.

Conventions:
  * f(x) = sum_k fhat(k) e^{2 pi i k x} with modes k in {-N/2+1, ..., N/2};
    arrays are stored in FFT layout.
  * P_+ keeps 0 < k < N/2, P_- keeps -N/2 < k < 0.  The k = 0 mode and the
    unpaired Nyquist mode N/2 belong to neither projection, so that real
    signals split symmetrically and H^2 = -I off those modes.
  * Hilbert transform is the multiplier -i sgn(k), sgn(0) = sgn(N/2) = 0,
    which maps real signals to real signals (cos -> sin).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dyadic import (
    DyadicInterval,
    Grid,
    ResolutionError,
    Signal,
    zeros,
)


# ---------------------------------------------------------------------------
# spectra


@dataclass
class Spectrum:
    """Fourier coefficients of a Signal, in FFT layout."""

    grid: Grid
    modes: np.ndarray

    def mode(self, *k: int) -> complex:
        idx = tuple(ki % self.grid.n_points for ki in k)
        return complex(self.modes[idx])


def mode_numbers(grid: Grid) -> np.ndarray:
    """Signed mode numbers along one axis in FFT layout; Nyquist reported as +N/2."""
    N = grid.n_points
    k = np.fft.fftfreq(N, d=1.0 / N).astype(int)
    k[N // 2] = N // 2
    return k


def to_spectrum(f: Signal) -> Spectrum:
    return Spectrum(f.grid, np.fft.fftn(f.values) / f.grid.n_points ** f.grid.dim)


def from_spectrum(s: Spectrum) -> Signal:
    vals = np.fft.ifftn(s.modes) * s.grid.n_points ** s.grid.dim
    return Signal(s.grid, vals)


def _axis_mask(grid: Grid, keep) -> np.ndarray:
    """Boolean mask over one axis's modes; `keep` maps mode numbers to bool."""
    return keep(mode_numbers(grid))


def _apply_multiplier(f: Signal, mult_1d: np.ndarray, axis: int) -> Signal:
    spec = np.fft.fft(f.values, axis=axis - 1)
    shape = [1] * f.grid.dim
    shape[axis - 1] = f.grid.n_points
    spec *= mult_1d.reshape(shape)
    return Signal(f.grid, np.fft.ifft(spec, axis=axis - 1))


def analytic_projection(sign: str, axis: int, f: Signal) -> Signal:
    """Spectral projection onto 0 < k < N/2 ('+') or -N/2 < k < 0 ('-') on one axis."""
    if sign not in ("+", "-"):
        raise ValueError("sign must be '+' or '-'")
    k = mode_numbers(f.grid)
    N = f.grid.n_points
    if sign == "+":
        mask = (k > 0) & (k < N // 2)
    else:
        mask = k < 0
    return _apply_multiplier(f, mask.astype(float), axis)


def axis_mean_projection(axis: int, f: Signal) -> Signal:
    """Projection onto the k = 0 and Nyquist modes of one axis (the leftover of P_+ + P_-)."""
    k = mode_numbers(f.grid)
    mask = (k == 0) | (k == f.grid.n_points // 2)
    return _apply_multiplier(f, mask.astype(float), axis)


def product_projection(sigma: tuple[str, ...], f: Signal) -> Signal:
    """P_sigma = tensor product of per-axis projections, sigma in {'+','-'}^d."""
    out = f
    for ax, s in enumerate(sigma, start=1):
        out = analytic_projection(s, ax, out)
    return out


def all_analytic_projection(f: Signal) -> Signal:
    """P_oplus: keep only the all-positive frequency octant."""
    return product_projection(("+",) * f.grid.dim, f)


def hilbert_transform(axis: int, f: Signal) -> Signal:
    """Multiplier -i sgn(k) on the chosen axis; annihilates constants and Nyquist."""
    k = mode_numbers(f.grid)
    sgn = np.sign(k).astype(float)
    sgn[f.grid.n_points // 2] = 0.0
    return _apply_multiplier(f, -1j * sgn, axis)


def signum_transform(axis: int, f: Signal) -> Signal:
    """The variant with multiplier sgn(k) = P_+ - P_-; equals i * hilbert_transform."""
    k = mode_numbers(f.grid)
    sgn = np.sign(k).astype(float)
    sgn[f.grid.n_points // 2] = 0.0
    return _apply_multiplier(f, sgn + 0j, axis)


def fourier_mode(grid: Grid, *k: int) -> Signal:
    """The exponential e^{2 pi i k.x} as a Signal."""
    mesh = grid.meshgrid()
    phase = sum(ki * xi for ki, xi in zip(k, mesh))
    return Signal(grid, np.exp(2j * np.pi * phase))


# ---------------------------------------------------------------------------
# Haar analysis / synthesis


@dataclass
class HaarCoefficients:
    """Tensor Haar coefficients, keyed by scale arrays.

    1D: mean plus per-scale arrays wavelet[p] of shape (2^p,), p = 0..depth-1,
    holding <f, h_I> for I = [j 2^-p, (j+1) 2^-p).

    2D: mean, ww[(p1,p2)] for wavelet x wavelet, wm[p1] for wavelet x constant,
    mw[p2] for constant x wavelet.  This is the full orthonormal tensor system,
    so Parseval holds exactly.
    """

    grid: Grid
    mean: complex
    wavelet: dict = None  # 1D
    ww: dict = None  # 2D wavelet x wavelet
    wm: dict = None  # 2D wavelet x constant
    mw: dict = None  # 2D constant x wavelet

    def coefficient(self, rect_or_interval, eps=None) -> complex:
        if isinstance(rect_or_interval, DyadicInterval):
            iv = rect_or_interval
            return complex(self.wavelet[-iv.scale_exponent][iv.position])
        r = rect_or_interval
        p1, p2 = -r.coordinates[0].scale_exponent, -r.coordinates[1].scale_exponent
        j1, j2 = r.coordinates[0].position, r.coordinates[1].position
        if eps in (None, (0, 0)):
            return complex(self.ww[(p1, p2)][j1, j2])
        if eps == (0, 1):
            return complex(self.wm[p1][j1])
        if eps == (1, 0):
            return complex(self.mw[p2][j2])
        raise ValueError("eps must be a pair of 0/1 with at least one 0")

    def total_energy(self) -> float:
        total = abs(self.mean) ** 2
        if self.grid.dim == 1:
            for arr in self.wavelet.values():
                total += float(np.sum(np.abs(arr) ** 2))
        else:
            for group in (self.ww, self.wm, self.mw):
                for arr in group.values():
                    total += float(np.sum(np.abs(arr) ** 2))
        return total


def _haar_pyramid_1d(values: np.ndarray, depth: int):
    """Wavelet coefficient arrays per scale p, plus the mean, along axis 0."""
    w = values * 2.0 ** -depth  # start from cell integrals
    coeffs = {}
    for p in range(depth - 1, -1, -1):
        pairs = w.reshape((1 << p, 2) + w.shape[1:])
        sums = pairs[:, 0] + pairs[:, 1]
        diffs = pairs[:, 1] - pairs[:, 0]
        # <f, h_I> = |I|^(-1/2) * (integral over right half - integral over left half)
        coeffs[p] = diffs * 2.0 ** (p / 2)
        w = sums
    return coeffs, w[0]


def haar_analysis(f: Signal) -> HaarCoefficients:
    """Coefficients against the full tensor Haar system plus the mean."""
    n = f.grid.depth
    if f.grid.dim == 1:
        coeffs, integral = _haar_pyramid_1d(f.values, n)
        return HaarCoefficients(f.grid, mean=complex(integral), wavelet=coeffs)
    if f.grid.dim != 2:
        raise ValueError("haar_analysis supports d in {1, 2}")
    # Axis 1 first: for each scale p1 we get arrays over (position, x2-samples).
    c1, int1 = _haar_pyramid_1d(f.values, n)  # int1: shape (N,), integral over x1
    ww, wm = {}, {}
    for p1, arr in c1.items():
        # arr holds <f, h_I1>(x2) as cell values of x2; analyze axis 2.
        sub, mean2 = _haar_pyramid_1d(arr.T, n)
        for p2, a2 in sub.items():
            ww[(p1, p2)] = a2.T
        wm[p1] = mean2
    mw, total = _haar_pyramid_1d(int1, n)
    return HaarCoefficients(f.grid, mean=complex(total), ww=ww, wm=wm, mw=mw)


def _haar_synth_axis(coeffs: dict, mean, depth: int) -> np.ndarray:
    """Inverse of _haar_pyramid_1d along axis 0."""
    w = np.asarray(mean)[None, ...] if np.ndim(mean) else np.array([mean])
    for p in range(0, depth):
        c = coeffs[p] * 2.0 ** (-p / 2)
        halves = np.empty((w.shape[0], 2) + w.shape[1:], dtype=complex)
        halves[:, 0] = (w - c) / 2.0
        halves[:, 1] = (w + c) / 2.0
        w = halves.reshape((w.shape[0] * 2,) + w.shape[1:])
    return w * 2.0 ** depth  # integrals -> cell values


def haar_synthesis(coeffs: HaarCoefficients) -> Signal:
    n = coeffs.grid.depth
    if coeffs.grid.dim == 1:
        vals = _haar_synth_axis(coeffs.wavelet, coeffs.mean, n)
        return Signal(coeffs.grid, vals)
    # Rebuild axis-2 data for every axis-1 band, then invert axis 1.
    c1 = {}
    for p1 in range(n):
        sub = {p2: coeffs.ww[(p1, p2)].T for p2 in range(n)}
        c1[p1] = _haar_synth_axis(sub, coeffs.wm[p1], n).T
    int1 = _haar_synth_axis({p: coeffs.mw[p] for p in range(n)}, coeffs.mean, n)
    vals = _haar_synth_axis(c1, int1, n)
    return Signal(coeffs.grid, vals)


# ---------------------------------------------------------------------------
# maximal and square functions


def _block_averages(values: np.ndarray, axis: int, width: int) -> np.ndarray:
    """Averages over aligned blocks of `width` cells along `axis`, broadcast back."""
    moved = np.moveaxis(values, axis, 0)
    shp = moved.shape
    blocks = moved.reshape((shp[0] // width, width) + shp[1:])
    avg = blocks.mean(axis=1)
    out = np.repeat(avg, width, axis=0)
    return np.moveaxis(out, 0, axis)


def dyadic_maximal(f: Signal) -> Signal:
    """sup over dyadic I containing x of |average of f over I| (d = 1)."""
    if f.grid.dim != 1:
        raise ValueError("dyadic_maximal is one-dimensional")
    best = np.abs(f.values).astype(float)
    for p in range(f.grid.depth - 1, -1, -1):
        width = 1 << (f.grid.depth - p)
        best = np.maximum(best, np.abs(_block_averages(f.values, 0, width)))
    return Signal(f.grid, best.astype(complex))


def strong_maximal(f: Signal) -> Signal:
    """sup over dyadic rectangles containing x of |average of f over R| (d = 2)."""
    if f.grid.dim != 2:
        raise ValueError("strong_maximal is two-dimensional")
    n = f.grid.depth
    best = np.zeros(f.grid.shape, dtype=float)
    for p1 in range(n + 1):
        w1 = 1 << (n - p1)
        avg1 = _block_averages(f.values, 0, w1)
        for p2 in range(n + 1):
            w2 = 1 << (n - p2)
            avg = _block_averages(avg1, 1, w2)
            np.maximum(best, np.abs(avg), out=best)
    return Signal(f.grid, best.astype(complex))


def square_function(f: Signal, family: str = "haar", meyer: "MeyerFamily" = None) -> Signal:
    """S f = (sum_R |<f, phi_R>|^2 |R|^-1 1_R)^(1/2) for the chosen mean-zero family."""
    if family == "haar":
        coeffs = haar_analysis(f)
        acc = np.zeros(f.grid.shape, dtype=float)
        n = f.grid.depth
        if f.grid.dim == 1:
            for p, arr in coeffs.wavelet.items():
                width = 1 << (n - p)
                acc += np.repeat(np.abs(arr) ** 2, width) * 2.0 ** p
        else:
            for (p1, p2), arr in coeffs.ww.items():
                w1, w2 = 1 << (n - p1), 1 << (n - p2)
                blown = np.repeat(np.repeat(np.abs(arr) ** 2, w1, axis=0), w2, axis=1)
                acc += blown * 2.0 ** (p1 + p2)
        return Signal(f.grid, np.sqrt(acc).astype(complex))
    if family == "meyer":
        if meyer is None:
            raise ValueError("pass the MeyerFamily for family='meyer'")
        acc = np.zeros(f.grid.shape, dtype=float)
        for iv in meyer.intervals:
            w = meyer.wavelet(iv)
            c = f.inner(w)
            a, b = iv.cell_range(f.grid)
            acc[a:b] += abs(c) ** 2 / iv.length
        return Signal(f.grid, np.sqrt(acc).astype(complex))
    raise ValueError("family must be 'haar' or 'meyer'")


# ---------------------------------------------------------------------------
# Meyer wavelets in frequency space


def meyer_window(t):
    """Polynomial window nu with nu(t) + nu(1-t) = 1, C^3 at the endpoints."""
    t = np.clip(t, 0.0, 1.0)
    return t ** 4 * (35.0 - 84.0 * t + 70.0 * t ** 2 - 20.0 * t ** 3)


def meyer_amplitude(t):
    """|mother profile| at normalized frequency t = xi / (2 pi); support [1, 4]."""
    t = np.abs(np.asarray(t, dtype=float))
    out = np.zeros_like(t)
    lo = (t >= 1.0) & (t <= 2.0)
    hi = (t > 2.0) & (t <= 4.0)
    out[lo] = np.sin(0.5 * np.pi * meyer_window(t[lo] - 1.0))
    out[hi] = np.cos(0.5 * np.pi * meyer_window(0.5 * t[hi] - 1.0))
    return out / np.sqrt(3.0)


def meyer_mother_profile(t):
    """Complex mother profile Q(t); Q(-t) = conj(Q(t)), support 1 <= |t| <= 4.

    The phase anchors the wavelet to the left endpoint of its interval, which
    is what makes distinct dilates exactly orthogonal.
    """
    t = np.asarray(t, dtype=float)
    return meyer_amplitude(t) * np.exp(1j * np.pi * t / 3.0)


def meyer_father_profile(t, levels: int = 64):
    """F(t) = sum_{i>=0} Q(2^i t): accumulates every scale finer than t's.

    Satisfies Q(t) = F(t) - F(2t) exactly; support 0 < |t| <= 4.
    """
    t = np.asarray(t, dtype=float)
    out = np.zeros(t.shape, dtype=complex)
    for i in range(levels):
        scale = 2.0 ** i
        if np.all(np.abs(t) * scale > 4.0):
            break
        out += meyer_mother_profile(t * scale)
    return out


class MeyerFamily:
    """Discrete Meyer system on a grid: wavelets w_I, parts u_I/v_I, fathers W_I.

    Scale p wavelets (|I| = 2^-p) occupy modes 2^p <= |k| <= 2^(p+2); scales are
    kept only while 2^(p+2) <= N/4, i.e. |I| >= 2^(4-n), so products of two
    family members stay alias-free.  Within that range the Gram matrix is the
    identity to machine precision.
    """

    def __init__(self, grid: Grid):
        if grid.depth < 5:
            raise ResolutionError("Meyer family needs grid depth >= 5")
        base = Grid(grid.depth, 1)
        self.grid = grid
        self.axis_grid = base
        self.max_scale = grid.depth - 4
        self.scales = list(range(self.max_scale + 1))
        self.intervals = [
            DyadicInterval(-p, j) for p in self.scales for j in range(1 << p)
        ]
        self._mode_cache: dict = {}
        self._signal_cache: dict = {}

    # -- 1D builders --------------------------------------------------------

    def mode_array(self, interval: DyadicInterval, kind: str = "w") -> np.ndarray:
        """FFT-layout coefficient array of w/u/v/W on the interval."""
        key = (interval, kind)
        if key in self._mode_cache:
            return self._mode_cache[key]
        p = -interval.scale_exponent
        if p not in self.scales:
            raise ResolutionError(f"scale 2^-{p} outside the resolvable Meyer range")
        N = self.axis_grid.n_points
        k = mode_numbers(self.axis_grid)
        t = k * 2.0 ** -p
        if kind in ("w", "u", "v"):
            prof = meyer_mother_profile(t)
        elif kind == "W":
            prof = meyer_father_profile(t)
        else:
            raise ValueError("kind must be one of 'w', 'u', 'v', 'W'")
        if kind == "v":
            prof = np.where(k > 0, prof, 0.0)
        elif kind in ("u", "W"):
            # u = P_- w; the father accumulates the same antianalytic side
            prof = np.where(k < 0, prof, 0.0)
        arr = 2.0 ** (-p / 2) * prof * np.exp(-2j * np.pi * t * interval.position)
        self._mode_cache[key] = arr
        return arr

    def signal(self, interval: DyadicInterval, kind: str = "w") -> Signal:
        key = (interval, kind)
        if key not in self._signal_cache:
            arr = self.mode_array(interval, kind)
            vals = np.fft.ifft(arr) * self.axis_grid.n_points
            self._signal_cache[key] = Signal(self.axis_grid, vals)
        return self._signal_cache[key].copy()

    def wavelet(self, interval) -> Signal:
        return self.signal(interval, "w")

    def analytic_part(self, interval) -> Signal:
        return self.signal(interval, "v")

    def antianalytic_part(self, interval) -> Signal:
        return self.signal(interval, "u")

    def father(self, interval) -> Signal:
        return self.signal(interval, "W")

    def gram_defect(self) -> float:
        """max |<w_I, w_J> - delta_IJ| over all resolvable pairs."""
        mats = np.stack([self.mode_array(iv, "w") for iv in self.intervals])
        gram = mats @ mats.conj().T
        return float(np.max(np.abs(gram - np.eye(len(self.intervals)))))

    # -- 2D tensors ----------------------------------------------------------

    def tensor(self, rect, kinds: tuple[str, str], normalized: bool = False) -> Signal:
        """Product of per-axis family members on a dyadic rectangle (d = 2).

        With normalized=True each factor is scaled to unit L2 norm (the
        analytic/antianalytic halves carry norm 1/sqrt(2) per axis)."""
        f1 = self.signal(rect.coordinates[0], kinds[0]).values
        f2 = self.signal(rect.coordinates[1], kinds[1]).values
        grid2 = Grid(self.axis_grid.depth, 2)
        out = Signal(grid2, np.multiply.outer(f1, f2))
        if normalized:
            nrm = out.norm2()
            if nrm > 0:
                out = (1.0 / nrm) * out
        return out

    def tensor_wavelet(self, rect) -> Signal:
        return self.tensor(rect, ("w", "w"))

    def tensor_analytic(self, rect, normalized: bool = False) -> Signal:
        return self.tensor(rect, ("v", "v"), normalized)

    def tensor_antianalytic(self, rect, normalized: bool = False) -> Signal:
        return self.tensor(rect, ("u", "u"), normalized)

    def mixed_father(self, rect, J: tuple[int, ...]) -> Signal:
        """W_{R,J}: antianalytic wavelet factor u on axes in J, father W elsewhere."""
        kinds = tuple("u" if (ax in J) else "W" for ax in (1, 2))
        return self.tensor(rect, kinds)

    def rectangles(self) -> list:
        from .dyadic import DyadicRectangle

        out = [
            DyadicRectangle((i1, i2))
            for i1 in self.intervals
            for i2 in self.intervals
        ]
        out.sort(key=lambda r: r.sort_key())
        return out


def build_meyer_family(grid: Grid) -> MeyerFamily:
    """Frequency-domain Meyer construction; raises on grids too coarse to hold the band."""
    return MeyerFamily(grid)
