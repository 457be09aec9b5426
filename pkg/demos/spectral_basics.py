"""Walk amplitudes on cycles and lattices, from closed-form spectral data.

The cycle Z_n is circulant, so the walk operator diagonalizes in the Fourier
basis with eigenvalues cos(2*pi*j/n); amplitudes come out as O(n) sums rather
than matrix exponentials.  This script prints the spectral table for a small
cycle, evolves a walker, and checks the numbers a library user cares about:
unit norm, translation invariance, and the spectral gap.
"""

import numpy as np

from latticemix import (
    FULL,
    LatticeSpec,
    cycle_amplitude,
    eigenphases,
    product_amplitude,
    spectral_gap,
)

table = eigenphases(5)
print("eigenvalues of the Z_5 walk generator:")
for j, lam in enumerate(table.lambdas):
    print(f"  j={j}:  cos(2*pi*{j}/5) = {lam:+.6f}")

amp = cycle_amplitude(19, 0, 19.0 / 3.0, FULL)
probs = amp.probabilities
print(f"\nZ_19 walker at t = 19/3, started at vertex 0:")
print(f"  total probability      {probs.sum():.12f}")
print(f"  return probability     {probs[0]:.6f}")
print(f"  most likely vertex     {probs.argmax()} with p = {probs.max():.6f}")

shifted = cycle_amplitude(19, 7, 19.0 / 3.0, FULL)
print(f"  translation invariance: shifted run equals rolled run -> "
      f"{np.array_equal(shifted.entries, np.roll(amp.entries, 7))}")

lattice = LatticeSpec((19, 5))
joint = product_amplitude(lattice, (0, 0), 24.0)
print(f"\nZ_19 x Z_5 walker at t = 24:")
print(f"  joint norm             {(np.abs(joint) ** 2).sum():.12f}")
print(f"  spectral gap           {spectral_gap(lattice):.6f}")
print(f"  gap of Z_3 alone       {spectral_gap(LatticeSpec((3,))):.6f}  (= 3/2)")
