"""Entanglement maps over the atomic and cavity detunings.

Reproduces the detuning-plane structure: photon-phonon entanglement with
its avoided crossing near the cavity sideband, atom-phonon entanglement
around the lower atomic sideband, and the atom-magnon entanglement that the
magnon drive pulls out of it. Writes one CSV per map (same schema the CLI
emits, renderable with the figrender tool) and a quick-look PNG.

Grid size is modest by default so the demo runs in a few seconds; raise N
for print quality.
"""

import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from ommsim import SweepAxis, default_params, sweep2d

N = 61
OUT = pathlib.Path(__file__).resolve().parent / "output"
OUT.mkdir(exist_ok=True)

model = default_params().validate()
ax_da = SweepAxis("delta_a", -2.0, -0.1, N, unit="omega_b")
ax_dc = SweepAxis("delta_c_eff", 0.05, 2.0, N, unit="omega_b")

result = sweep2d(model, ax_da, ax_dc, pairs=("cb", "ab", "am"))
result.write_csv(OUT / "detuning_maps.csv")
print(f"wrote {OUT / 'detuning_maps.csv'} ({len(result.points)} points)")

fig, axes = plt.subplots(1, 3, figsize=(13.5, 4.0), constrained_layout=True)
extent = (ax_dc.start, ax_dc.stop, ax_da.start, ax_da.stop)
for ax, key, label in zip(axes, ("cb", "ab", "am"),
                          ("photon-phonon", "atom-phonon", "atom-magnon")):
    grid = result.column(key).reshape(N, N)
    masked = np.ma.masked_invalid(grid)
    cmap = plt.get_cmap("viridis").copy()
    cmap.set_bad("lightgrey")
    im = ax.imshow(masked, origin="lower", aspect="auto", extent=extent,
                   cmap=cmap, vmin=0.0)
    ax.set_xlabel(r"$\tilde{\Delta}_c / \omega_b$")
    ax.set_ylabel(r"$\Delta_a / \omega_b$")
    ax.set_title(f"{label} $E_N$")
    fig.colorbar(im, ax=ax)

fig.savefig(OUT / "detuning_maps.png", dpi=150)
print(f"wrote {OUT / 'detuning_maps.png'}")
print("grey cells: no stable steady state (entanglement undefined there)")
