"""Function containers and grid conventions shared by the transforms.

A `SampledFunction` bundles a vectorized evaluator f(z, x) on the boundary
group with the box/resolution metadata used whenever the function has to be
integrated, plus an optional `SpectralForm` describing f as a finite sum of
central frequencies,

    f(z, x) = sum_j c_j(z) exp(i <lam_j, x>).

Band-limited synthesis produces this form naturally, and the transforms use
it to reorganize their quadrature sums without changing what is summed.
"""

from dataclasses import dataclass, field

import numpy as np

from .quadrature import gauss_legendre, tensor_rule

__all__ = ["GridSpec", "SpectralForm", "SampledFunction", "gaussian_function", "l2_norm"]


@dataclass(frozen=True)
class GridSpec:
    """Quadrature box and resolution for one function.

    ebox    : half-width of the box per real coordinate of E = C^n
    enodes  : Gauss-Legendre nodes per real E coordinate
    fbox    : half-width per central coordinate
    fnodes  : Gauss-Legendre nodes per central coordinate
    """

    ebox: float = 4.0
    enodes: int = 40
    fbox: float = 6.0
    fnodes: int = 48

    def e_rule(self):
        return gauss_legendre(self.enodes, -self.ebox, self.ebox)

    def f_rule(self):
        return gauss_legendre(self.fnodes, -self.fbox, self.fbox)


@dataclass(frozen=True)
class SpectralForm:
    """Finite central-frequency expansion of a boundary function.

    lambdas : (J, m) frequencies
    coeff   : callable, z (..., n) -> (..., J) complex coefficients
    """

    lambdas: np.ndarray
    coeff: object


@dataclass
class SampledFunction:
    """A boundary function together with its quadrature conventions."""

    model: object
    evaluate: object
    grid: GridSpec = field(default_factory=GridSpec)
    spectral: SpectralForm | None = None
    meta: dict = field(default_factory=dict)

    def __call__(self, z, x):
        return self.evaluate(z, x)


def gaussian_function(model, grid=None):
    """The Schwartz witness exp(-|z|^2 - |x|^2) on the boundary group."""

    def ev(z, x):
        z = np.asarray(z, complex)
        x = np.asarray(x, float)
        return np.exp(
            -np.sum(np.abs(z) ** 2, axis=-1) - np.sum(x**2, axis=-1) + 0j
        )

    return SampledFunction(model, ev, grid or GridSpec())


def l2_norm(f, grid=None, chunk=200_000):
    """L^2 norm of a boundary function over its grid box.

    Plain tensor Gauss-Legendre rule in the 2n real E coordinates and the m
    central coordinates; the box must capture the function's mass, which is
    the caller's responsibility (checked where it matters by the transforms'
    tail diagnostics).
    """
    model = f.model
    g = grid or f.grid
    erule = g.e_rule()
    frule = g.f_rule()
    enodes, eweights = tensor_rule([erule] * (2 * model.n))
    xnodes, xweights = tensor_rule([frule] * model.m)
    zgrid = enodes[:, 0::2] + 1j * enodes[:, 1::2]
    total = 0.0
    for lo in range(0, zgrid.shape[0], max(1, chunk // max(1, xnodes.shape[0]))):
        hi = min(zgrid.shape[0], lo + max(1, chunk // max(1, xnodes.shape[0])))
        vals = f(zgrid[lo:hi, None, :], xnodes[None, :, :])
        total += float(
            np.sum(eweights[lo:hi, None] * xweights[None, :] * np.abs(vals) ** 2)
        )
    return np.sqrt(total)
