"""Paley-Wiener subspaces: projections, best approximation, bandwidth.

``PW_omega`` is the span of eigenvectors with eigenvalue in the closed
interval ``[0, omega]``.  The distance from ``f`` to ``PW_omega`` (best
approximation) is computed two independent ways: as the Euclidean norm of
``f`` minus its orthogonal projection, and as the coefficient-tail norm
above ``omega``.  The two must agree to near machine precision; keeping
both routes makes that identity a real check instead of a tautology.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import NegativeOmegaError, NotBandlimitedError, ZeroVectorError
from .operators import (
    SpectralCoefficients,
    SpectralDecomposition,
    as_vector,
    inverse_transform,
    spectral_transform,
)

#: membership test used by bernstein_check / riesz_identity_check
BANDLIMITED_TOL = 1e-12
#: default coefficient threshold (relative to ||f||) defining the support
SUPPORT_TOL = 1e-12


@dataclass(frozen=True)
class BandLimit:
    """A nonnegative band edge; the band is the closed interval [0, omega]."""

    omega: float

    def __post_init__(self):
        if not (self.omega >= 0.0):
            raise NegativeOmegaError(f"omega must be >= 0, got {self.omega}")


def _omega_value(omega) -> float:
    if isinstance(omega, BandLimit):
        return omega.omega
    value = float(omega)
    if not (value >= 0.0):
        raise NegativeOmegaError(f"omega must be >= 0, got {omega}")
    return value


@dataclass(frozen=True, eq=False)
class BandwidthReport:
    """Support edge of a vector plus the power-norm diagnostics.

    ``k_sequence[k-1]`` holds ``||D^k f||^{1/k}``; for unit vectors the
    sequence increases toward ``omega_f`` (power-mean monotonicity), for
    general vectors it approaches ``omega_f`` from above or below depending
    on ``||f||``.  With finitely many eigenvalues the limit and the limit
    inferior of the sequence coincide, so a single sequence serves both
    characterizations.  ``sup_ratio`` is ``sup_k omega^{-k} ||D^k f||`` at
    the probe band edge: bounded by ``||f||`` when the probe is >= omega_f,
    growing geometrically when it is smaller.
    """

    omega_f: float
    k_sequence: np.ndarray
    sup_ratio: float
    probe_omega: float
    tol_support: float
    final_gap: float


def pw_project(dec: SpectralDecomposition, f, omega) -> np.ndarray:
    """Orthogonal projection onto PW_omega: zero all coefficients above omega."""
    w = _omega_value(omega)
    c = spectral_transform(dec, f)
    kept = np.where(dec.eigenvalues <= w, c.coeffs, 0.0)
    return dec.eigenvectors @ kept


def best_approx(dec: SpectralDecomposition, f, omega) -> float:
    """Distance from ``f`` to PW_omega, via the projection residual in H."""
    vec = as_vector(f, dec.dim)
    return float(np.linalg.norm(vec - pw_project(dec, vec, omega)))


def spectral_tail(dec: SpectralDecomposition, f, omega) -> float:
    """Coefficient-tail norm above omega; equals :func:`best_approx`."""
    w = _omega_value(omega)
    c = spectral_transform(dec, f)
    return float(np.linalg.norm(c.coeffs[dec.eigenvalues > w]))


def log_power_norms(dec: SpectralDecomposition, f, k_max: int) -> np.ndarray:
    """``log ||D^k f||`` for k = 1..k_max, computed in log-space.

    Uses a logsumexp over ``2k log(lambda_j) + 2 log|c_j|`` so that powers
    far beyond double-precision range still give finite logarithms.
    Entries are ``-inf`` when ``D^k f = 0``.
    """
    c = spectral_transform(dec, f)
    mag2 = np.abs(c.coeffs) ** 2
    mask = (mag2 > 0.0) & (dec.eigenvalues > 0.0)
    out = np.full(k_max, -np.inf)
    if not np.any(mask):
        return out
    log_lam = np.log(dec.eigenvalues[mask])
    log_mag2 = np.log(mag2[mask])
    for k in range(1, k_max + 1):
        terms = 2.0 * k * log_lam + log_mag2
        m = terms.max()
        out[k - 1] = 0.5 * (m + math.log(np.sum(np.exp(terms - m))))
    return out


def bandwidth(dec: SpectralDecomposition, f, tol_support: float = SUPPORT_TOL,
              k_max: int = 40, probe_omega: float | None = None) -> BandwidthReport:
    """Support edge ``omega_f`` of ``f`` and the ``||D^k f||^{1/k}`` diagnostics.

    ``omega_f`` is the largest eigenvalue whose coefficient exceeds
    ``tol_support * ||f||`` in magnitude.  ``probe_omega`` defaults to
    ``omega_f`` itself.
    """
    vec = as_vector(f, dec.dim)
    norm_f = float(np.linalg.norm(vec))
    if norm_f == 0.0:
        raise ZeroVectorError("bandwidth of the zero vector is undefined")
    c = spectral_transform(dec, vec)
    significant = np.abs(c.coeffs) > tol_support * norm_f
    omega_f = float(dec.eigenvalues[significant].max()) if np.any(significant) else 0.0

    log_norms = log_power_norms(dec, vec, k_max)
    ks = np.arange(1, k_max + 1, dtype=np.float64)
    k_sequence = np.exp(log_norms / ks)

    probe = omega_f if probe_omega is None else float(probe_omega)
    if probe > 0.0:
        sup_ratio = float(np.exp(np.max(log_norms - ks * math.log(probe))))
    else:
        # probe 0: every ratio is 0/0 with D^k f = 0, or +inf otherwise
        sup_ratio = 0.0 if np.all(np.isneginf(log_norms)) else math.inf
    return BandwidthReport(omega_f=omega_f, k_sequence=k_sequence,
                           sup_ratio=sup_ratio, probe_omega=probe,
                           tol_support=tol_support,
                           final_gap=float(omega_f - k_sequence[-1]))


@dataclass(frozen=True, eq=False)
class BernsteinReport:
    """Measured ratios ``||D^s f|| / (omega^s ||f||)`` for bandlimited f."""

    omega: float
    s_values: tuple
    ratios: np.ndarray
    max_ratio: float
    passed: bool


#: slack allowed on the Bernstein ratio
BERNSTEIN_TOL = 1e-10


def bernstein_check(dec: SpectralDecomposition, f, omega, s_list) -> BernsteinReport:
    """Verify ``||D^s f|| <= omega^s ||f||`` for each ``s`` in ``s_list``.

    Requires ``f`` in PW_omega (tail below ``1e-12 ||f||``), otherwise
    raises :class:`NotBandlimitedError`.
    """
    w = _omega_value(omega)
    vec = as_vector(f, dec.dim)
    norm_f = float(np.linalg.norm(vec))
    if norm_f == 0.0:
        raise ZeroVectorError("Bernstein check needs a nonzero vector")
    if spectral_tail(dec, vec, w) > BANDLIMITED_TOL * norm_f:
        raise NotBandlimitedError(f"vector has spectral mass above omega={w}")
    c = spectral_transform(dec, vec)
    mag2 = np.abs(c.coeffs) ** 2
    ratios = []
    for s in s_list:
        power_norm = math.sqrt(float(np.sum(np.power(dec.eigenvalues, 2.0 * s) * mag2)))
        if w > 0.0:
            ratios.append(power_norm / (w ** s * norm_f))
        else:
            # f in PW_0 means D^s f = 0 for s > 0; report 0 rather than 0/0
            ratios.append(0.0 if s > 0 else 1.0)
    ratios = np.array(ratios)
    max_ratio = float(ratios.max()) if ratios.size else 0.0
    return BernsteinReport(omega=w, s_values=tuple(s_list), ratios=ratios,
                           max_ratio=max_ratio,
                           passed=bool(max_ratio <= 1.0 + BERNSTEIN_TOL))


def dense_union_check(dec: SpectralDecomposition, f, eps: float) -> float:
    """Smallest eigenvalue threshold ``omega`` with ``E(f, omega) <= eps``.

    Candidates are 0 and the distinct eigenvalues; existence is guaranteed
    because ``E(f, lambda_max) = 0``.
    """
    if eps <= 0.0:
        raise ValueError("eps must be positive")
    vec = as_vector(f, dec.dim)
    for candidate in [0.0] + list(np.unique(dec.eigenvalues)):
        if spectral_tail(dec, vec, candidate) <= eps:
            return float(candidate)
    return dec.lambda_max  # unreachable: tail at lambda_max is 0


def vector_from_coeffs(dec: SpectralDecomposition, coeffs) -> np.ndarray:
    """Convenience synthesis of a vector from raw eigenbasis coefficients."""
    return inverse_transform(SpectralCoefficients(coeffs=as_vector(coeffs, dec.dim),
                                                  decomposition=dec))
