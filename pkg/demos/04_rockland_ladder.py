"""Rockland spectra are shifted harmonic-oscillator ladders.

The positive homogeneous operator acts on each frequency layer as a squared
oscillator plus |lam|^2.  Its eigenvalues come in closed form from the
occupation numbers; assembling the matrix in the truncated basis and
diagonalizing reproduces them to machine precision, and the ground state is
exactly the vacuum vector.
"""

import numpy as np

from quadric_cr import QuadraticModel, spectral_data, fock_basis
from quadric_cr.rockland import rockland_matrix, rockland_spectrum, rockland_eigenvalue

HEIS1 = QuadraticModel(np.array([[[1.0]]], complex))
sd = spectral_data(HEIS1, np.array([1.0]))
fb = fock_basis(sd, 12)
spec = rockland_spectrum(fb)
print("ladder at lam = 1:", np.sort(spec.eigenvalues)[:5])

closed = np.array([rockland_eigenvalue(sd, a) for a in spec.alphas])
print("closed form      :", np.sort(closed)[:5])
print("max gap:", np.abs(spec.eigenvalues - closed).max())

w, v = np.linalg.eigh(rockland_matrix(fb))
print("ground overlap with the vacuum:", abs(v[0, np.argmin(w)]))

rng = np.random.default_rng(3)
g = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
model = QuadraticModel((g @ g.conj().T + 0.5 * np.eye(2))[None, :, :])
sd2 = spectral_data(model, np.array([1.0]))
spec2 = rockland_spectrum(fock_basis(sd2, 10))
closed2 = np.array([rockland_eigenvalue(sd2, a) for a in spec2.alphas])
print("random n=2 model, max relative gap:",
      (np.abs(spec2.eigenvalues - closed2) / np.maximum(np.abs(closed2), 1.0)).max())
