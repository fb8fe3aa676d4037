"""Frequency layers and their degeneracies.

Each central frequency lambda turns the Hermitian form into a matrix A(lam)
whose eigenstructure drives everything downstream: the Pfaffian density, the
Bargmann-Fock weight, and the radical directions that fall out of the
oscillator picture.  We scan lambda for a model whose second layer
coordinate is radical at every frequency and print the layer data.
"""

import numpy as np

from quadric_cr import QuadraticModel, spectral_data, generic_dimension, is_exceptional

model = QuadraticModel(np.array([[[1.0, 0.0], [0.0, 0.0]]], complex))
gen_d = generic_dimension(model)
print(f"generic radical dimension: {gen_d}")
print(f"{'lam':>6} {'d':>2} {'pfaffian':>10} {'mu':>18} exceptional")
for lam in np.linspace(-2.0, 2.0, 9):
    sd = spectral_data(model, np.array([lam]))
    mus = np.round(sd.eigenvalues, 6)
    print(f"{lam:6.2f} {sd.d:2d} {sd.pfaffian:10.4f} {str(mus):>18}"
          f" {is_exceptional(sd, gen_d)}")

print()
print("at lam = 0 every direction is radical, the layer is exceptional and")
print("carries no Plancherel mass; the machinery skips it by construction")
