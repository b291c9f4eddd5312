# %% [markdown]
# # How strongly do two elements couple?
#
# Two elements a distance `d` apart (in wavelengths) share part of their
# radiated power. The coupling coefficient is the pattern-weighted spherical
# Fourier transform of the displacement. For isotropic elements it is a sinc,
# so the pair decouples at every half wavelength.

# %%
import numpy as np

from holosurf import (
    coupling_along_axis,
    dipole_pattern,
    directional_pattern,
    isotropic_pattern,
    min_uncoupling_distance,
)

distances = np.linspace(0.0, 2.0, 9)
iso = coupling_along_axis(isotropic_pattern(), "Y", distances)
for d, c in zip(distances, iso.real):
    print(f"d = {d:4.2f}  c = {c:+.4f}")

# %% [markdown]
# A directional element (a 3GPP sector pointing along +x) concentrates its
# power toward broadside. Neighbours along y then see nearly the same field
# for longer, so the first zero moves out to roughly 0.94 wavelengths.

# %%
for name, pattern, axis in [
    ("isotropic", isotropic_pattern(), "Y"),
    ("directional", directional_pattern(), "Y"),
    ("dipole l=0.5", dipole_pattern(0.5), "Y"),
    ("dipole l=0.5", dipole_pattern(0.5), "Z"),
    ("dipole l=0.1", dipole_pattern(0.1), "Z"),
]:
    print(f"{name:14s} along {axis}: first zero at {min_uncoupling_distance(pattern, axis):.4f}")

# %% [markdown]
# Dipoles along z radiate nothing toward the poles, so stacking them along
# their own axis keeps them coupled much longer than placing them side by side.
