"""Embeddedness, damped projections, and the lower-bound decomposition.

Emb(R; U) measures how far R can be dilated inside the maximal-function
enlargement of U.  Damping wavelet coefficients by Emb^{-eps} tames the
product BMO norm of a projection down to rectangular-BMO size; the staircase
family shows the undamped ratio escaping that bound.  The final block runs
the alpha/beta/gamma decomposition of a symbol against a rectangle
collection and prints the Hankel norm chain.
"""

import numpy as np

import dyadiclab as dl
from dyadiclab.dyadic import DyadicInterval, DyadicRectangle, Grid, RectangleCollection
from dyadiclab import journe as jn
from dyadiclab.transforms import build_meyer_family

# embeddedness of cells inside the full square
g3 = Grid(3, 2)
U = np.ones(g3.shape, dtype=bool)
center = DyadicRectangle((DyadicInterval(-3, 3), DyadicInterval(-3, 3)))
corner = DyadicRectangle((DyadicInterval(-3, 0), DyadicInterval(-3, 0)))
print("Emb(central cell; square) =", jn.embeddedness(center, U, g3))
print("Emb(corner cell;  square) =", jn.embeddedness(corner, U, g3))

# damping the staircase family inside the unit square
g5 = Grid(5, 2)
b, book = jn.carleson_family(2, g5, seed=0)
U5 = np.ones(g5.shape, dtype=bool)
undamped = jn.journe_damped_check(b, U5, eps=0.0)
damped = jn.journe_damped_check(b, U5, eps=0.5)
print("\nstaircase at n=2:")
print("  undamped product/rect ratio:", round(undamped["ratio"], 6))
print("  damped (eps=1/2)           :", round(damped["ratio"], 6))
print("  embeddedness on the chain  :",
      sorted(round(v, 2) for v in damped["embeddedness"].values()))

# supplied-candidate checker: the trivial candidate always passes
members = tuple(jn.carleson_rectangles(1))
coll = RectangleCollection(members, Grid(4, 2))
f = dl.zeros(Grid(4, 2))
for r in members:
    from dyadiclab.dyadic import haar_tensor
    f = f + haar_tensor(r, Grid(4, 2))
V, emb = jn.trivial_candidate(coll)
out = jn.journe_inequality_checker_d1(f, coll, V, emb, eta=0.0)
print("\ntrivial (V, Emb) candidate: K_eta =", round(out["K_eta"], 4))

# the lower-bound chain on a random symbol
g6 = Grid(6, 2)
fam = build_meyer_family(Grid(6, 1))
coll6 = RectangleCollection(
    tuple(DyadicRectangle((DyadicInterval(-2, i), DyadicInterval(-2, j)))
          for i in (1, 2) for j in (1, 2)), g6)
rng = np.random.default_rng(7)
rep = jn.lower_bound_experiment(dl.random_signal(g6, rng), coll6, fam)
print("\nlower-bound chain:")
for key in ("H_b_alpha", "P_plus_alpha_sq", "alpha_sq_mean_removed", "alpha_4_sq",
            "coefficient_mass", "H_beta_alpha", "beta_4_times_alpha_4",
            "symmetry_ratio", "additivity_defect"):
    print(f"  {key:24s} = {rep[key]:.6g}")
print("  slice norms by Emb level :", {k: round(v, 6) for k, v in rep["slice_norms"].items()})
