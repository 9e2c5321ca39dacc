"""Check the double-well building blocks against their closed forms.

Everything the chain protocols do reduces to dynamics on two coupled
sites: a lone atom Rabi-flopping between wells, two same-spin bosons
detuned by the full interaction energy, and an up-down pair detuned by
half of it.  Each case has an exact amplitude formula, and this script
overlays those formulas on the sparse Krylov propagation of the same
Hamiltonian, then plots the interaction-suppressed double occupancy
against its analytic ceiling.
"""

import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from latticeshuttle import (
    CouplingProfile,
    FockBasis,
    PropagatorConfig,
    build_hamiltonian,
    double_occupancy,
    evolve_hold,
    localized_state,
    max_double_occupancy,
    single_atom_amplitudes,
    two_atom_coefficients,
    two_atom_product_state,
)

HERE = pathlib.Path(__file__).resolve().parent
CFG = PropagatorConfig(tolerance=1e-10)
U_OVER_J = 8.0


def numeric_curve(basis, psi0, u, times, indices):
    """Populations of selected basis states under the left-bond Hamiltonian."""
    h = build_hamiltonian(basis, CouplingProfile(j_odd=1.0, j_even=0.0, u=u))
    state = psi0
    t_done = 0.0
    rows = []
    for t in times:
        state = evolve_hold(state, h, t - t_done, CFG)
        t_done = t
        rows.append([abs(state.amplitudes[k]) ** 2 for k in indices])
    return np.array(rows)


times = np.linspace(0.0, 12.0, 241)

# Single atom: |left> oscillates into |right> with period pi / J.
basis1 = FockBasis(2, 1)
psi1 = localized_state(basis1, 1)
left = basis1.index_of_modes((0,))
right = basis1.index_of_modes((2,))
num1 = numeric_curve(basis1, psi1, 0.0, times, [left, right])
ex1 = np.array([[abs(a) ** 2 for a in single_atom_amplitudes(1.0, t)]
                for t in times])
gap1 = np.max(np.abs(num1 - ex1))
print(f"single atom: max population gap vs closed form {gap1:.2e}")

# Two atoms, both spin channels.  The closed forms give the amplitude to
# stay spread out (a), to swap wells (b, opposite spins only), and to
# pile both atoms into one well (c); same-spin pairs are detuned by the
# full U, up-down pairs by half of it, so their revival periods differ.
basis2 = FockBasis(2, 2)
coeff = [two_atom_coefficients(1.0, U_OVER_J, t) for t in times]

same = two_atom_product_state(basis2, 1, (1.0, 0.0), 2, (1.0, 0.0))
idx_same = [
    basis2.index_of_modes((0, 2)),   # one up in each well
    basis2.index_of_modes((0, 0)),   # both up in the left well
    basis2.index_of_modes((2, 2)),   # both up in the right well
]
num_same = numeric_curve(basis2, same, U_OVER_J, times, idx_same)
ex_same = np.array([[abs(c.a_same) ** 2, 2 * abs(c.c_same) ** 2]
                    for c in coeff])
gap_same = np.max(np.abs(
    np.column_stack([num_same[:, 0], num_same[:, 1] + num_same[:, 2]])
    - ex_same))
print(f"same spin:   max population gap vs closed form {gap_same:.2e}")

mixed = two_atom_product_state(basis2, 1, (1.0, 0.0), 2, (0.0, 1.0))
idx_mixed = [
    basis2.index_of_modes((0, 3)),   # up left, down right
    basis2.index_of_modes((1, 2)),   # down left, up right
    basis2.index_of_modes((0, 1)),   # doublon left
    basis2.index_of_modes((2, 3)),   # doublon right
]
num_mixed = numeric_curve(basis2, mixed, U_OVER_J, times, idx_mixed)
ex_mixed = np.array([[abs(c.a_diff) ** 2, abs(c.b_diff) ** 2,
                      2 * abs(c.c_diff) ** 2] for c in coeff])
gap_mixed = np.max(np.abs(
    np.column_stack([num_mixed[:, 0], num_mixed[:, 1],
                     num_mixed[:, 2] + num_mixed[:, 3]])
    - ex_mixed))
print(f"mixed spin:  max population gap vs closed form {gap_mixed:.2e}")

fig, axes = plt.subplots(1, 3, figsize=(12, 3.6), sharex=True)

axes[0].plot(times, ex1[:, 0], "C0-", label="stay (exact)")
axes[0].plot(times, ex1[:, 1], "C1-", label="hop (exact)")
axes[0].plot(times[::12], num1[::12, 0], "C0o", ms=3)
axes[0].plot(times[::12], num1[::12, 1], "C1o", ms=3)
axes[0].set_title("single atom")
axes[0].legend(loc="center right", fontsize=8)

axes[1].plot(times, ex_same[:, 0], "C0-", label="separated")
axes[1].plot(times, ex_same[:, 1], "C3-", label="doublon")
axes[1].plot(times[::12], num_same[::12, 0], "C0o", ms=3)
axes[1].plot(times[::12], num_same[::12, 1] + num_same[::12, 2], "C3o", ms=3)
axes[1].set_title(f"same spin, U = {U_OVER_J:g} J")
axes[1].legend(loc="center right", fontsize=8)

axes[2].plot(times, ex_mixed[:, 0], "C0-", label="stay")
axes[2].plot(times, ex_mixed[:, 1], "C2-", label="swap")
axes[2].plot(times, ex_mixed[:, 2], "C3-", label="doublon")
axes[2].plot(times[::12], num_mixed[::12, 0], "C0o", ms=3)
axes[2].plot(times[::12], num_mixed[::12, 1], "C2o", ms=3)
axes[2].plot(times[::12], num_mixed[::12, 2] + num_mixed[::12, 3], "C3o",
             ms=3)
axes[2].set_title(f"opposite spin, U = {U_OVER_J:g} J")
axes[2].legend(loc="center right", fontsize=8)

for ax in axes:
    ax.set_xlabel("time (1/J)")
    ax.set_ylim(-0.05, 1.05)
axes[0].set_ylabel("population")
fig.tight_layout()
out = HERE / "double_well_closed_forms.png"
fig.savefig(out, dpi=150)
print(f"wrote {out}")

# Transient double occupancy of a transverse pair at the working point
# U = 25 J, which is the price of leaving the interaction on while hopping.
u_work = 25.0
t_fine = np.linspace(0.0, 40.0, 4001)
p_doub = np.array([double_occupancy(1.0, u_work, t) for t in t_fine])
bound = max_double_occupancy(1.0, u_work)
print(f"double occupancy at U = {u_work:g} J: max over grid "
      f"{float(p_doub.max()):.6f}, analytic ceiling {bound:.6f}")

fig2, ax2 = plt.subplots(figsize=(7, 3.2))
ax2.plot(t_fine, p_doub, lw=0.8)
ax2.axhline(bound, color="C3", ls="--", label=f"ceiling {bound:.4f}")
ax2.set_xlabel("time (1/J)")
ax2.set_ylabel("double occupancy")
ax2.set_title(f"transverse pair, U = {u_work:g} J")
ax2.legend()
fig2.tight_layout()
out2 = HERE / "double_well_occupancy.png"
fig2.savefig(out2, dpi=150)
print(f"wrote {out2}")
