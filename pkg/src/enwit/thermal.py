"""Gibbs states rho(T) = exp(-H/T)/Z and mean-energy curves (k_B = 1).

All thermal quantities are computed in the eigenbasis of H with the
spectrum shifted by its minimum before exponentiating, so temperatures
down to 1e-3 J (beta up to 1e3) stay finite.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .operators import DensityMatrix, HermitianOperator, SpectralDecomposition, eig

DEGENERACY_TOL = 1e-9
_EXP_MAX = 700.0  # log of the largest finite float64, rounded down


@dataclass(frozen=True)
class ThermalPoint:
    """One point of a thermal sweep.

    ``partition_z`` overflows to ``inf`` for very cold spectra with negative
    ground energy; ``log_partition_z`` is always finite and is the value to
    use in downstream arithmetic.
    """

    temperature_t: float
    beta: float
    partition_z: float
    mean_energy: float
    log_partition_z: float

    def __post_init__(self):
        if abs(self.beta * self.temperature_t - 1.0) > 1e-12:
            raise ValueError("beta must equal 1/T")


def _thermal_weights(dec: SpectralDecomposition, beta: float) -> tuple[np.ndarray, float]:
    """Boltzmann probabilities and log Z, via the max-shift trick."""
    lam = dec.eigenvalues
    w = np.exp(-beta * (lam - lam[0]))
    s = float(w.sum())
    log_z = float(np.log(s) - beta * lam[0])
    return w / s, log_z


def gibbs(h: HermitianOperator, temperature: float) -> tuple[DensityMatrix, ThermalPoint]:
    """Thermal equilibrium state of ``h`` at temperature T > 0 (units J/k_B)."""
    t = float(temperature)
    if t <= 0.0:
        raise ValueError("temperature must be positive; use ground_state for T = 0")
    beta = 1.0 / t
    dec = eig(h)
    probs, log_z = _thermal_weights(dec, beta)
    mean = float(np.dot(probs, dec.eigenvalues))
    v = dec.eigenvectors
    rho = DensityMatrix.from_entries(h.shape, (v * probs) @ v.conj().T)
    z = float(np.exp(log_z)) if log_z < _EXP_MAX else float("inf")
    return rho, ThermalPoint(t, beta, z, mean, log_z)


def ground_state(h: HermitianOperator) -> DensityMatrix:
    """Projector onto the ground level, maximally mixed over it if degenerate."""
    dec = eig(h)
    k = int(np.sum(dec.eigenvalues <= dec.e_min + DEGENERACY_TOL))
    v = dec.eigenvectors[:, :k]
    return DensityMatrix.from_entries(h.shape, (v @ v.conj().T) / k)


def energy_curve(h: HermitianOperator, temps: Sequence[float]) -> list[ThermalPoint]:
    """Thermal points for an ascending temperature grid, one diagonalization total."""
    ts = [float(t) for t in temps]
    if any(t <= 0 for t in ts):
        raise ValueError("all temperatures must be positive")
    if any(b < a for a, b in zip(ts, ts[1:])):
        raise ValueError("temperatures must be ascending")
    dec = eig(h)
    points = []
    for t in ts:
        beta = 1.0 / t
        probs, log_z = _thermal_weights(dec, beta)
        mean = float(np.dot(probs, dec.eigenvalues))
        z = float(np.exp(log_z)) if log_z < _EXP_MAX else float("inf")
        points.append(ThermalPoint(t, beta, z, mean, log_z))
    for a, b in zip(points, points[1:]):
        assert b.mean_energy >= a.mean_energy - 1e-12, "mean energy must not decrease with T"
    return points
