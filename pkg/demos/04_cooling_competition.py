"""Two mechanical cooling channels competing for the optimum.

For each magnomechanical coupling G_m, searches the cavity detuning that
maximizes the atom-magnon entanglement (atoms pinned to the lower sideband,
magnon drive to its upper one). At small G_m the optical channel must do
the mechanical cooling itself, so the optimum sits near the hybridized
sideband branches around omega_b; as G_m takes over the cooling, the
optimum slides toward small detunings where the optical down-conversion is
strongest, while the maximum entanglement keeps growing.
"""

import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from ommsim import TWO_PI, default_params, optimal_cavity_detuning

OUT = pathlib.Path(__file__).resolve().parent / "output"
OUT.mkdir(exist_ok=True)

model = default_params().validate()
gm_hz = np.linspace(0.5e6, 4e6, 30)

optima, maxima = [], []
for gm in gm_hz:
    opt = optimal_cavity_detuning(model, TWO_PI * gm)
    optima.append(opt.delta_c_opt / model.omega_b)
    maxima.append(opt.e_am_max)
    print(f"G_m/2pi = {gm / 1e6:5.2f} MHz  ->  optimum {optima[-1]:.3f} omega_b,"
          f"  E_am^max = {maxima[-1]:.4f}")

fig, ax1 = plt.subplots(figsize=(6.0, 4.0), constrained_layout=True)
ax1.plot(gm_hz / 1e6, optima, "C0-", label=r"$\tilde{\Delta}_c^{\rm opt}$")
ax1.set_xlabel(r"$G_m/2\pi$ (MHz)")
ax1.set_ylabel(r"optimal detuning ($\omega_b$)", color="C0")
ax2 = ax1.twinx()
ax2.plot(gm_hz / 1e6, maxima, "C1--", label=r"$E_{am}^{\max}$")
ax2.set_ylabel(r"$E_{am}^{\max}$", color="C1")
fig.savefig(OUT / "cooling_competition.png", dpi=150)
print(f"wrote {OUT / 'cooling_competition.png'}")
