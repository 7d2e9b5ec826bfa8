"""Eigenstructure of the pinned Laplacian and the closed-form stability bound.

The one-step matrix of the standard update is P = I - gamma*K, so each
eigenvalue lambda of K maps to 1 - gamma*lambda of P. The dynamics are stable
iff every mapped eigenvalue lies inside the unit circle, which pins the gain
to 0 < gamma < min_i 2*Re(lambda_i)/|lambda_i|^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "EigenvalueError",
    "SpectralSummary",
    "eigenvalues",
    "gain_bound",
    "perron_spectrum",
    "envelope_settling_steps",
    "summarize",
]


class EigenvalueError(RuntimeError):
    """Eigensolver failure. No partial spectrum is available from the backend."""


def eigenvalues(K: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """All eigenvalues of a real square matrix, sorted by (real, imag).

    The result is residual-checked: each eigenpair must satisfy
    ``norm(K v - lam v) <= tol * norm(K)``, which any backward-stable dense
    solver meets with orders of magnitude to spare at the target sizes.

    Raises
    ------
    ValueError
        Non-square input or non-finite entries.
    EigenvalueError
        Iteration did not converge, or the residual check failed.
    """
    K = np.asarray(K, dtype=float)
    if K.ndim != 2 or K.shape[0] != K.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {K.shape}")
    if K.shape[0] < 1:
        raise ValueError("expected n >= 1")
    if not np.isfinite(K).all():
        raise ValueError("matrix contains NaN or Inf entries")
    try:
        lams, vecs = np.linalg.eig(K)
    except np.linalg.LinAlgError as exc:
        raise EigenvalueError(f"eigensolver did not converge: {exc}") from exc
    scale = np.linalg.norm(K)
    resid = np.linalg.norm(K @ vecs - vecs * lams, axis=0)
    worst = float(resid.max()) if scale == 0 else float((resid / scale).max())
    if worst > tol:
        raise EigenvalueError(f"eigenpair residual {worst:.3e} exceeds tolerance {tol:.3e}")
    order = np.lexsort((lams.imag, lams.real))
    return lams[order]


def gain_bound(eigs: np.ndarray) -> float:
    """Largest stable update gain: min over i of 2*Re(lam_i)/|lam_i|^2.

    Every eigenvalue must have a strictly positive real part (guaranteed for
    a pinned Laplacian of a source-connected network); otherwise no positive
    gain stabilizes the update and a ValueError is raised.
    """
    eigs = np.asarray(eigs, dtype=complex)
    if eigs.size == 0:
        raise ValueError("empty spectrum")
    if np.any(eigs.real <= 0):
        bad = eigs[eigs.real <= 0]
        raise ValueError(
            f"eigenvalues with non-positive real part {bad}; "
            "the network is not stabilizable by any positive gain"
        )
    return float(np.min(2.0 * eigs.real / np.abs(eigs) ** 2))


def perron_spectrum(eigs: np.ndarray, gamma: float) -> tuple[np.ndarray, float]:
    """Map K's spectrum through lam -> 1 - gamma*lam; returns (values, radius)."""
    if gamma <= 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    eigs = np.asarray(eigs, dtype=complex)
    lam_p = 1.0 - gamma * eigs
    return lam_p, float(np.abs(lam_p).max())


def envelope_settling_steps(eigs: np.ndarray, gamma: float, band: float = 0.02) -> int:
    """Steps for the slowest mode's envelope to decay into the band.

    Returns the smallest integer k with rho**k <= band, where rho is the
    spectral radius of P = I - gamma*K. This is the standard per-mode settling
    count; a simulated transient can lag it by the modal coefficients.
    """
    if not (0 < band < 1):
        raise ValueError(f"band must lie in (0, 1), got {band}")
    _, rho = perron_spectrum(eigs, gamma)
    if rho >= 1.0:
        raise ValueError(f"unstable at gamma={gamma}: spectral radius {rho:.6f} >= 1")
    if rho == 0.0:
        return 1
    return int(math.ceil(math.log(band) / math.log(rho)))


@dataclass(frozen=True)
class SpectralSummary:
    """Spectrum of K, the stability bound, and (optionally) P's spectrum at a gain."""

    eigenvalues: np.ndarray
    gain_bound: float
    gamma: float | None = None
    perron_eigenvalues: np.ndarray | None = None
    perron_radius: float | None = None


def summarize(K: np.ndarray, gamma: float | None = None, tol: float = 1e-10) -> SpectralSummary:
    """One-shot spectral analysis of a pinned Laplacian."""
    eigs = eigenvalues(K, tol=tol)
    bound = gain_bound(eigs)
    if gamma is None:
        return SpectralSummary(eigenvalues=eigs, gain_bound=bound)
    lam_p, rho = perron_spectrum(eigs, gamma)
    return SpectralSummary(
        eigenvalues=eigs,
        gain_bound=bound,
        gamma=float(gamma),
        perron_eigenvalues=lam_p,
        perron_radius=rho,
    )
