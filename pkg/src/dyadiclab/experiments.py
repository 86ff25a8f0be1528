"""Batch experiment driver: deterministic configs, per-trial RNG streams,
CSV + JSON result files.

Determinism contract: every trial draws from its own counter-based stream
Philox(key=(seed, trial_index)), trials may run on any number of threads,
and aggregation sorts by trial index, so reruns of the same config produce
byte-identical manifest and CSV files.  Wall-clock data goes to a separate
run_info.json that is excluded from the contract.
"""

from __future__ import annotations

import csv
import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .dyadic import (
    DyadicInterval,
    DyadicRectangle,
    Grid,
    RectangleCollection,
    Signal,
)
from . import aak, hankel, journe, norms, paraproducts, transforms


class ConfigError(ValueError):
    pass


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """The documented counter-based stream: Philox keyed by (seed, trial)."""
    key = np.array([seed, trial], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _map_trials(fn, n_trials: int, threads: int):
    if threads <= 1:
        results = [fn(t) for t in range(n_trials)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(fn, range(n_trials)))
    return results


# ---------------------------------------------------------------------------
# individual experiments; each returns (rows, summary, exactness_flags)


def _exp_nehari1d(cfg, threads):
    seed = cfg["seed"]
    trials = cfg.get("trials", 100)
    degree = cfg.get("M", 32)
    m_list = cfg.get("M_list", [8, 16, 32])
    trend_trials = cfg.get("trend_trials", 40)

    def one(t):
        rng = trial_rng(seed, t)
        b = hankel.random_symbol(degree, rng)
        rep = hankel.nehari_ratio(b, "dyadic")
        return {"trial": t, "M": degree, "hankel_norm": rep["hankel_norm"],
                "bmo_value": rep["bmo_value"], "ratio": rep["ratio"]}

    rows = _map_trials(one, trials, threads)
    ratios = np.array([r["ratio"] for r in rows])
    summary = {
        "ratio_min": float(ratios.min()),
        "ratio_max": float(ratios.max()),
        "ratio_mean": float(ratios.mean()),
        "max_over_min": float(ratios.max() / ratios.min()),
        "hankel_projection": "analytic (k >= 0, Hardy with DC)",
        "hilbert_normalization": "-i sgn(k)",
    }
    # trend across degrees
    trend_rows = []
    for m in m_list:
        def one_m(t, m=m):
            rng = trial_rng(seed + 1000 * m, t)
            b = hankel.random_symbol(m, rng)
            return hankel.nehari_ratio(b, "dyadic")["ratio"]
        vals = _map_trials(one_m, trend_trials, threads)
        mean_log = float(np.mean(np.log(vals)))
        trend_rows.append({"trial": -1, "M": m, "hankel_norm": np.nan,
                           "bmo_value": np.nan, "ratio": float(np.exp(mean_log))})
        summary[f"mean_log_ratio_M{m}"] = mean_log
    xs = np.log2(np.array(m_list, dtype=float))
    ys = np.array([summary[f"mean_log_ratio_M{m}"] for m in m_list])
    slope = float(np.polyfit(xs, ys, 1)[0])
    summary["log_ratio_slope_per_log2M"] = slope
    return rows + trend_rows, summary, ["exact"]


def _exp_nehari2d(cfg, threads):
    seed = cfg["seed"]
    trials = cfg.get("trials", 30)
    degree = cfg.get("M", 4)
    depth = cfg.get("n", 2)

    def one(t):
        rng = trial_rng(seed, t)
        b = hankel.random_symbol(degree, rng, dim=2)
        rep = hankel.nehari_ratio(b, "product_exact", product_depth=depth)
        return {"trial": t, "M": degree, "hankel_norm": rep["hankel_norm"],
                "bmo_value": rep["bmo_value"], "ratio": rep["ratio"]}

    rows = _map_trials(one, trials, threads)
    ratios = np.array([r["ratio"] for r in rows])
    summary = {
        "ratio_min": float(ratios.min()),
        "ratio_max": float(ratios.max()),
        "max_over_min": float(ratios.max() / ratios.min()),
        "bmo_depth": depth,
        "hankel_projection": "all-analytic octant (k_i >= 0, Hardy with DC)",
    }
    return rows, summary, ["exact"]


def _exp_para_bound(cfg, threads):
    seed = cfg["seed"]
    trials = cfg.get("trials", 5)
    n_list = cfg.get("n_list", [4, 5, 6, 7, 8])

    rows = []
    for n in n_list:
        grid = Grid(n, 1)

        def one(t, n=n, grid=grid):
            rng = trial_rng(seed + 37 * n, t)
            b = Signal(grid, rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape))
            b = b - Signal(grid, np.full(grid.shape, b.mean()))
            mat = paraproducts.para_haar_matrix(b)
            ratio = norms.operator_norm(mat) / norms.bmo_dyadic(b).value
            return {"trial": t, "n": n, "ratio": ratio}

        rows.extend(_map_trials(one, trials, threads))
    by_n = {}
    for r in rows:
        by_n.setdefault(r["n"], []).append(r["ratio"])
    max_ratios = {n: max(v) for n, v in by_n.items()}
    xs = np.array(sorted(max_ratios), dtype=float)
    ys = np.log(np.array([max_ratios[int(n)] for n in xs]))
    slope = float(np.polyfit(xs, ys, 1)[0])
    summary = {"max_ratio_by_n": {str(k): float(v) for k, v in sorted(max_ratios.items())},
               "log_max_ratio_slope_vs_n": slope}
    return rows, summary, ["exact"]


def _exp_commutator_decomp(cfg, threads):
    seed = cfg["seed"]
    trials = cfg.get("trials", 50)
    n = cfg.get("n", 6)
    grid = Grid(n, 1)

    def one(t):
        rng = trial_rng(seed, t)
        b = Signal(grid, rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape))
        pieces = paraproducts.decompose_commutator_Gleft(b, check_tol=np.inf)
        target = paraproducts.commutator_gleft_matrix(b)
        residual = float(np.max(np.abs(pieces.total() - target)))
        return {"trial": t, "n": n, "residual": residual}

    rows = _map_trials(one, trials, threads)
    summary = {"max_residual": float(max(r["residual"] for r in rows))}
    return rows, summary, ["exact"]


def _exp_petermichl(cfg, threads):
    n = cfg.get("n", 10)
    Y = cfg.get("Y", 8.0)
    steps = cfg.get("steps", 64)
    y_measure = cfg.get("y_measure", "uniform")
    width = cfg.get("bump_width", 0.08)
    grid = Grid(n, 1)
    x = grid.points()
    z = (x - 0.5) / width
    vals = z * np.exp(-z * z)
    f = Signal(grid, vals - vals.mean())
    rep_full = paraproducts.petermichl_fit_on_signal(
        f, Y=Y, s_steps=steps, y_steps=steps, y_measure=y_measure)
    rep_half = paraproducts.petermichl_fit_on_signal(
        f, Y=Y, s_steps=steps // 2, y_steps=steps // 2, y_measure=y_measure)
    rows = [
        {"trial": 0, "steps": steps, "fitted_c": rep_full["fitted_c"],
         "relative_error": rep_full["relative_error"]},
        {"trial": 1, "steps": steps // 2, "fitted_c": rep_half["fitted_c"],
         "relative_error": rep_half["relative_error"]},
    ]
    summary = {
        "fitted_c": rep_full["fitted_c"],
        "relative_error": rep_full["relative_error"],
        "relative_error_half_steps": rep_half["relative_error"],
        "error_decreases_with_steps": bool(
            rep_full["relative_error"] < rep_half["relative_error"]),
        "Y": Y, "n": n, "steps": steps, "y_measure": y_measure,
    }
    return rows, summary, ["quadrature"]


def _exp_aak_extend(cfg, threads):
    seed = cfg["seed"]
    trials = cfg.get("trials", 5)
    m_list = cfg.get("M_list", [4, 16, 64])
    k_steps = cfg.get("K", 4)

    rows = []
    for m in m_list:
        def one(t, m=m):
            rng = trial_rng(seed + m, t)
            seq = rng.standard_normal(2 * m - 1) + 1j * rng.standard_normal(2 * m - 1)
            H = hankel.hankel_matrix(seq, m)
            ext = aak.extend_hankel_step(H)
            return {"trial": t, "M": m,
                    "base_norm": H.sequence_norm(),
                    "extended_norm": ext.sequence_norm(),
                    "preservation_defect": abs(H.sequence_norm() - ext.sequence_norm())}
        rows.extend(_map_trials(one, trials, threads))
    # recovery ratio trend on a few symbols
    recovery = []
    for t in range(cfg.get("recovery_trials", 3)):
        rng = trial_rng(seed + 999, t)
        b = hankel.random_symbol(cfg.get("recovery_degree", 6), rng)
        H = hankel.hankel_operator_1d(b)
        for K in range(k_steps + 1):
            rep = aak.recover_bounded_symbol(H, K)
            recovery.append({"trial": t, "M": -K,  # reuse M column for -K
                             "base_norm": rep["hankel_norm"],
                             "extended_norm": rep["sup_norm"],
                             "preservation_defect": rep["ratio"]})
    summary = {"max_preservation_defect": float(max(r["preservation_defect"] for r in rows)),
               "recovery_ratios": [float(r["preservation_defect"]) for r in recovery]}
    return rows + recovery, summary, ["exact"]


def _exp_carleson(cfg, threads):
    seed = cfg["seed"]
    n_list = cfg.get("n_list", [0, 1, 2, 3, 4])
    rows = []
    for n in n_list:
        grid = Grid(n + 3, 2)
        b, _ = journe.carleson_family(n, grid, seed=seed)
        rect = norms.bmo_rect(b)
        exact = norms.bmo_product(b, mode="exact")
        heur = norms.bmo_product(b, mode="heuristic")
        rows.append({
            "n": n,
            "bmo_rect": rect.value,
            "bmo_product_exact": exact.value,
            "bmo_product_heuristic": heur.value,
            "ratio_exact": exact.value / rect.value,
            "ratio_heuristic": heur.value / rect.value,
        })
    xs = np.log(np.array(n_list, dtype=float) + 1.0)
    ys = np.log(np.array([r["ratio_exact"] for r in rows]))
    mask = xs > 0
    exponent = float(np.polyfit(xs[mask], ys[mask], 1)[0]) if mask.sum() > 1 else np.nan
    summary = {
        "ratios_exact": [float(r["ratio_exact"]) for r in rows],
        "monotone_exact": bool(all(
            rows[i + 1]["ratio_exact"] > rows[i]["ratio_exact"] - 1e-12
            for i in range(len(rows) - 1))),
        "fitted_growth_exponent_vs_nplus1": exponent,
    }
    return rows, summary, ["exact", "heuristic_lower_bound"]


def _journe_staircase_family(seed: int):
    """Deterministic staircase instances: interior anchored chains and their
    subchains, each damped inside the full unit square."""
    chain = journe.carleson_rectangles(2)
    singles = [(f"single_{i}", (r,)) for i, r in enumerate(chain)]
    pairs = [("pair_01", tuple(chain[:2])), ("pair_12", tuple(chain[1:]))]
    full = [("chain_012", tuple(chain))]
    # a translated pair anchored at (1/2, 1/4)
    a = DyadicRectangle((DyadicInterval(-2, 2), DyadicInterval(-4, 4)))
    b = DyadicRectangle((DyadicInterval(-3, 4), DyadicInterval(-3, 2)))
    translated = [("pair_translated", (a, b))]
    return singles + pairs + full + translated


def _exp_journe(cfg, threads):
    seed = cfg["seed"]
    n = cfg.get("n", 2)
    eps = cfg.get("eps", 0.5)
    grid = Grid(n + 3, 2)
    U = np.ones(grid.shape, dtype=bool)
    rows = []
    rng = trial_rng(seed, 0)
    for name, members in _journe_staircase_family(seed):
        f = Signal(grid, np.zeros(grid.shape, dtype=complex))
        for r in members:
            from .dyadic import haar_tensor
            sign = float(rng.integers(0, 2) * 2 - 1)
            f = f + sign * haar_tensor(r, grid)
        rep = journe.journe_damped_check(f, U, eps=eps)
        rows.append({"instance": name, "eps": eps,
                     "damped_bmo": rep["lhs_bmo"], "rect_bmo": rep["rhs_rect_bmo"],
                     "ratio": rep["ratio"]})
    b, _ = journe.carleson_family(n, grid, seed=seed)
    undamped = journe.journe_damped_check(b, U, eps=0.0)
    damped = journe.journe_damped_check(b, U, eps=eps)
    rows.append({"instance": "carleson_undamped", "eps": 0.0,
                 "damped_bmo": undamped["lhs_bmo"], "rect_bmo": undamped["rhs_rect_bmo"],
                 "ratio": undamped["ratio"]})
    rows.append({"instance": "carleson_damped", "eps": eps,
                 "damped_bmo": damped["lhs_bmo"], "rect_bmo": damped["rhs_rect_bmo"],
                 "ratio": damped["ratio"]})
    family_ratios = np.array([r["ratio"] for r in rows if r["instance"] not in
                              ("carleson_undamped", "carleson_damped")])
    summary = {
        "family_max_ratio": float(family_ratios.max()),
        "family_median_ratio": float(np.median(family_ratios)),
        "max_within_3x_median": bool(family_ratios.max() <= 3 * np.median(family_ratios)),
        "undamped_carleson_ratio": float(undamped["ratio"]),
        "undamped_exceeds_family_max": bool(undamped["ratio"] > family_ratios.max()),
        "damped_carleson_ratio": float(damped["ratio"]),
    }
    return rows, summary, ["exact"]


def _exp_lower_bound(cfg, threads):
    seed = cfg["seed"]
    n = cfg.get("n", 2)
    depth = max(cfg.get("grid_depth", 6), 5)
    grid = Grid(depth, 2)
    fam = transforms.build_meyer_family(Grid(depth, 1))
    rng = trial_rng(seed, 0)
    # collection: a block of analytic rectangles away from the boundary
    members = tuple(
        DyadicRectangle((DyadicInterval(-2, i), DyadicInterval(-2, j)))
        for i in (1, 2) for j in (1, 2)
    )
    coll = RectangleCollection(members, grid)
    b = Signal(grid, rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape))
    rep = journe.lower_bound_experiment(b, coll, fam,
                                        eta_J=cfg.get("eta_J", 0.01),
                                        eta_minus1=cfg.get("eta_minus1", 0.01))
    keys = ["normalization_scale", "shadow_measure", "coefficient_mass",
            "H_b_alpha", "P_plus_alpha_sq", "alpha_sq_mean_removed", "alpha_4_sq",
            "alpha_2", "symmetry_ratio", "symmetry_reference",
            "H_beta_alpha", "beta_4_times_alpha_4", "beta_2", "gamma_2",
            "additivity_defect"]
    rows = [{"quantity": k, "value": float(rep[k])} for k in keys]
    for lv, v in sorted(rep["slice_norms"].items()):
        rows.append({"quantity": f"H_gamma_alpha_slice_2^{lv}", "value": float(v)})
    summary = {k: float(rep[k]) for k in keys}
    summary["cauchy_schwarz_ok"] = bool(
        rep["H_beta_alpha"] <= rep["beta_4_times_alpha_4"] * (1 + 1e-10) + 1e-12)
    return rows, summary, ["exact"]


CATALOG = {
    "nehari1d": {
        "fn": _exp_nehari1d,
        "description": "Hankel operator norm vs dyadic BMO of the analytic symbol part, over random truncated symbols",
    },
    "nehari2d": {
        "fn": _exp_nehari2d,
        "description": "little Hankel norm on the bidisc vs exact product BMO of the analytic part at small depth",
    },
    "para-bound": {
        "fn": _exp_para_bound,
        "description": "operator norm of the Haar paraproduct against the dyadic BMO norm of its symbol, across grid depths",
    },
    "commutator-decomp": {
        "fn": _exp_commutator_decomp,
        "description": "exact reconstruction of [M_b, G_left] from its labeled paraproduct pieces",
    },
    "petermichl": {
        "fn": _exp_petermichl,
        "description": "translation-dilation average of the dyadic shift fitted against the Hilbert transform",
    },
    "aak-extend": {
        "fn": _exp_aak_extend,
        "description": "norm-preserving one-step Hankel extension and bounded-symbol recovery ratios",
    },
    "carleson": {
        "fn": _exp_carleson,
        "description": "product/rectangular BMO separation along the corner staircase family",
    },
    "journe": {
        "fn": _exp_journe,
        "description": "embeddedness-damped projections: damped product BMO stays comparable to rectangular BMO",
    },
    "lower-bound": {
        "fn": _exp_lower_bound,
        "description": "alpha/beta/gamma decomposition of a symbol and the Hankel lower-bound norm chain",
    },
}


def list_experiments() -> dict:
    return {name: entry["description"] for name, entry in sorted(CATALOG.items())}


def validate_config(cfg: dict) -> dict:
    if "experiment" not in cfg:
        raise ConfigError("config needs an 'experiment' field")
    name = cfg["experiment"]
    if name not in CATALOG:
        raise ConfigError(
            f"unknown experiment {name!r}; catalog: {sorted(CATALOG)}")
    out = dict(cfg)
    out.setdefault("seed", 0)
    if not isinstance(out["seed"], int) or out["seed"] < 0:
        raise ConfigError("seed must be a nonnegative integer")
    n = out.get("n")
    m = out.get("M")
    if n is not None and m is not None and (1 << n) < 4 * m:
        raise ConfigError(f"need 2^n >= 4*M, got n={n}, M={m}")
    return out


def _canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=True)


def run(cfg: dict, out_dir, threads: int = 1) -> dict:
    """Execute the named experiment; writes manifest.json, rows.csv and
    run_info.json into out_dir and returns the manifest."""
    cfg = validate_config(cfg)
    name = cfg["experiment"]
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    t0 = time.time()
    rows, summary, flags = CATALOG[name]["fn"](cfg, threads)
    manifest = {
        "experiment": name,
        "config": {k: v for k, v in sorted(cfg.items())},
        "code_version": __version__,
        "rows_file": "rows.csv",
        "row_count": len(rows),
        "summary": summary,
        "exactness_flags": flags,
    }
    fields = []
    for r in rows:
        for k in r:
            if k not in fields:
                fields.append(k)
    with open(out_dir / "rows.csv", "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields, restval="")
        writer.writeheader()
        for r in rows:
            writer.writerow({k: _fmt(v) for k, v in r.items()})
    with open(out_dir / "manifest.json", "w") as fh:
        fh.write(_canonical_json(manifest))
        fh.write("\n")
    with open(out_dir / "run_info.json", "w") as fh:
        fh.write(_canonical_json({
            "started_unix": t0,
            "elapsed_seconds": time.time() - t0,
            "threads": threads,
        }))
        fh.write("\n")
    return manifest


def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, np.integer):
        return int(v)
    return v
