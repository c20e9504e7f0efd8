"""Singular-value decay of the weighted commutator: smooth vs log-spike symbol.

At p = 2 the commutator [b, T_eta] : L^2(v) -> L^2(u) is equivalent to a
plain matrix after conjugating by the weight square roots, and singular
values become the compactness surrogate: an operator close to finite rank
collapses fast. A smooth compactly supported symbol (in the closure of such
functions under the BMO norm) produces a spectrum that falls off a cliff; a
logarithmic spike of the *same* BMO norm keeps visibly more energy in the
tail at every grid size. Spectra land in demos/out/.
"""

from pathlib import Path

import bumplab as bl
from bumplab.io import write_curve_csv

outdir = Path(__file__).parent / "out"

print("m     K=m/8   smooth energy tail   spike energy tail")
for m in (256, 512, 1024):
    grid = bl.make_grid(8.0, m)
    u = bl.constant(grid, 1.0) + bl.gaussian(grid, 0.0, 0.3)
    v = bl.iterate_maximal(u, 5)
    b_smooth = bl.smooth_bump(grid, 0.0, 0.5)
    b_spike = bl.log_spike(grid, 0.01)
    trunc = bl.TruncationSpec(16 * grid.h)
    cmp = bl.decay_compare(b_smooth, b_spike, trunc, u, v, [m // 8])
    print(f"{m:5d} {m // 8:6d}   {cmp.smooth.energy_tails[0]:18.3e} "
          f"{cmp.spike.energy_tails[0]:19.3e}")
    if m == 1024:
        for tag, repx in (("smooth", cmp.smooth), ("spike", cmp.spike)):
            write_curve_csv(outdir / f"sigma_{tag}.csv", ("k", "sigma"),
                            [(float(i + 1), float(s))
                             for i, s in enumerate(repx.singular_values)])

print(f"\nspectra at m=1024 written to {outdir}/sigma_smooth.csv and sigma_spike.csv")
print("normalized sigma_k at m=1024, k = 1, 8, 16, 32, 64:")
for tag in ("smooth", "spike"):
    import csv

    with open(outdir / f"sigma_{tag}.csv") as fh:
        sig = [float(r[1]) for r in list(csv.reader(fh))[1:]]
    picks = [sig[k - 1] / sig[0] for k in (1, 8, 16, 32, 64)]
    print(f"  {tag:>6}: " + "  ".join(f"{x:.2e}" for x in picks))
print("\nthe smooth symbol is BMO-matched to the spike before comparison, so the")
print("gap is structural: oscillation spread across scales, not norm size.")
