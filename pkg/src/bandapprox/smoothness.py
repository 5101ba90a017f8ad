"""Moduli of continuity, K-functionals and Besov-type norms.

Smoothness of a vector relative to the operator ``D`` is measured three
equivalent ways:

* decay of the best approximation ``E(f, s)`` by bandlimited vectors,
  turned into integral/discrete norms.  Because the spectrum is finite,
  ``E(f, .)`` is a right-continuous step function constant between
  consecutive distinct eigenvalues, so the integral norms are evaluated
  in closed form with no quadrature error;
* the Peetre K-functional between ``H`` and the domain of ``D^r``,
  minimized exactly along the Tikhonov family ``(I + s D^{2r})^{-1} f``
  (that family traces the Pareto frontier of the two competing norms, so
  a 1-D search is exact up to its own tolerance);
* moduli of continuity built from the unitary group ``e^{itD}``, with
  the supremum over shifts taken by grid scan plus golden-section
  refinement.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidOrderError, InvalidParamsError, NonPositiveTError
from .operators import (
    SpectralDecomposition,
    as_vector,
    operator_power,
    spectral_transform,
)
from .paley_wiener import best_approx, spectral_tail

#: tolerance folded into inequality checks that involve a grid supremum
GRID_TOL = 1e-6

#: selectable smoothness-norm flavors
BESOV_FLAVORS = ("integral_E", "discrete_E", "integral_R", "discrete_R",
                 "k_functional", "modulus")
_FLAVORS = BESOV_FLAVORS

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_max(fn, lo: float, hi: float, iters: int):
    """Golden-section maximization; returns the best evaluated value."""
    a, b = lo, hi
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = fn(x1), fn(x2)
    best = max(f1, f2)
    for _ in range(iters):
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = fn(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = fn(x1)
        best = max(best, f1, f2)
    return best


def _golden_min(fn, lo: float, hi: float, iters: int):
    return -_golden_max(lambda x: -fn(x), lo, hi, iters)


@dataclass(frozen=True)
class ModulusParams:
    """Difference order and sup-search configuration for the modulus."""

    m: int
    sup_grid: int = 512
    refine_depth: int = 3

    def __post_init__(self):
        if self.m < 1:
            raise InvalidParamsError("difference order m must be >= 1")
        if self.sup_grid < 16:
            raise InvalidParamsError("sup_grid must be >= 16")


@dataclass(frozen=True)
class BesovParams:
    """Smoothness parameters: exponent alpha, integrability q, order r, base a.

    ``q = math.inf`` selects the supremum forms.  ``r`` is only active for
    the K-functional and modulus flavors but is validated for all of them;
    if omitted, the smallest admissible order is chosen.
    """

    alpha: float
    q: float
    r: int | None = None
    a: float = 2.0
    flavor: str = "integral_E"

    def __post_init__(self):
        if not (self.alpha > 0.0):
            raise InvalidParamsError(f"alpha must be > 0, got {self.alpha}")
        if not (self.q >= 1.0):
            raise InvalidParamsError(f"q must be in [1, inf], got {self.q}")
        if not (self.a > 1.0):
            raise InvalidParamsError(f"base a must be > 1, got {self.a}")
        if self.flavor not in _FLAVORS:
            raise InvalidParamsError(f"unknown flavor {self.flavor!r}")
        r = self.r
        if r is None:
            r = math.floor(self.alpha) + 1 if self.q != math.inf else max(1, math.ceil(self.alpha))
            object.__setattr__(self, "r", r)
        if r < 1 or r != int(r):
            raise InvalidParamsError(f"r must be a positive integer, got {r}")
        if self.q == math.inf:
            if self.alpha > r:
                raise InvalidParamsError("need alpha <= r when q = inf")
        elif self.alpha >= r:
            raise InvalidParamsError("need alpha < r when q < inf")
        if self.flavor == "modulus":
            if self.q != math.inf:
                raise InvalidParamsError("modulus flavor is defined for q = inf only")
            if self.alpha >= r:
                raise InvalidParamsError("modulus flavor needs alpha < r")

    @property
    def is_sup(self) -> bool:
        return self.q == math.inf


# -- difference operator and modulus of continuity ----------------------------

def difference(dec: SpectralDecomposition, f, tau: float, m: int) -> np.ndarray:
    """m-th power of ``e^{i tau D} - I`` applied to ``f``.

    On coefficients this is multiplication by ``(e^{i tau lambda} - 1)^m``,
    which agrees with ``m`` successive first-order differences.
    """
    if m < 1:
        raise InvalidParamsError("difference order m must be >= 1")
    c = spectral_transform(dec, f)
    mult = (np.exp(1j * tau * dec.eigenvalues) - 1.0) ** m
    return dec.eigenvectors @ (mult * c.coeffs)


def _difference_norms(eigenvalues, mag2, taus, m):
    """||Delta_tau^m f|| for an array of shifts, from |coefficients|^2."""
    sins = 2.0 * np.abs(np.sin(np.outer(taus, eigenvalues) / 2.0))
    return np.sqrt(np.maximum(sins ** (2 * m) @ mag2, 0.0))


def _modulus_from_mag2(eigenvalues, mag2, s, m, sup_grid, refine_depth):
    if s == 0.0 or m == 0:
        return math.sqrt(float(np.sum(mag2))) if m == 0 else 0.0
    lam_max = float(eigenvalues[-1]) if eigenvalues.size else 0.0
    if lam_max == 0.0:
        return 0.0
    # enough samples to see every oscillation of the sharpest component
    periods = s * lam_max / (2.0 * math.pi)
    n_grid = int(min(8192, max(sup_grid, 8 * m * periods + 1)))
    taus = np.linspace(0.0, s, n_grid)
    vals = _difference_norms(eigenvalues, mag2, taus, m)
    i_best = int(np.argmax(vals))
    lo = taus[max(0, i_best - 1)]
    hi = taus[min(n_grid - 1, i_best + 1)]

    def g(tau):
        return float(_difference_norms(eigenvalues, mag2, np.array([tau]), m)[0])

    refined = _golden_max(g, lo, hi, iters=30 * refine_depth)
    return max(float(vals[i_best]), refined)


def modulus(dec: SpectralDecomposition, f, s: float, m: int,
            sup_grid: int = 512, refine_depth: int = 3) -> float:
    """Modulus of continuity: ``sup over |tau| <= s`` of the m-th difference norm.

    The objective is even in ``tau`` so only ``[0, s]`` is scanned.  ``m = 0``
    is accepted and returns ``||f||`` (the zeroth difference is the identity).
    """
    if s < 0.0:
        raise ValueError(f"s must be >= 0, got {s}")
    if m < 0:
        raise InvalidParamsError("difference order m must be >= 0")
    c = spectral_transform(dec, f)
    mag2 = np.abs(c.coeffs) ** 2
    if not np.any(mag2 > 0.0):
        return 0.0
    return _modulus_from_mag2(dec.eigenvalues, mag2, float(s), m, sup_grid, refine_depth)


@dataclass(frozen=True, eq=False)
class ModulusInequalityReport:
    """Measured ratios for the two modulus inequalities.

    ``ratio_power``:  Omega_m(f, s) / (s^k Omega_{m-k}(D^k f, s))
    ``ratio_scale``:  Omega_m(f, a s) / ((1+a)^m Omega_m(f, s))
    Both should not exceed 1 up to the grid tolerance.
    """

    ratio_power: float
    ratio_scale: float
    vacuous_power: bool
    vacuous_scale: bool
    passed: bool


def _safe_ratio(num: float, den: float, scale: float):
    """Ratio with a vacuous flag when the denominator is numerically zero."""
    if den <= 1e-14 * scale:
        return (0.0, True) if num <= 1e-12 * scale else (math.inf, True)
    return num / den, False


def modulus_inequality_checks(dec: SpectralDecomposition, f, s: float,
                              a_scale: float, m: int, k: int) -> ModulusInequalityReport:
    """Check the power-transfer and scale-doubling modulus inequalities."""
    if not 0 <= k <= m:
        raise InvalidParamsError(f"need 0 <= k <= m, got k={k}, m={m}")
    if a_scale <= 0.0:
        raise InvalidParamsError("a_scale must be positive")
    vec = as_vector(f, dec.dim)
    norm_f = float(np.linalg.norm(vec))

    lhs = modulus(dec, vec, s, m)
    dk_f = operator_power(dec, k, vec) if k > 0 else vec
    rhs = (s ** k) * modulus(dec, dk_f, s, m - k)
    ratio_power, vac_power = _safe_ratio(lhs, rhs, norm_f)

    lhs_scale = modulus(dec, vec, a_scale * s, m)
    rhs_scale = ((1.0 + a_scale) ** m) * modulus(dec, vec, s, m)
    ratio_scale, vac_scale = _safe_ratio(lhs_scale, rhs_scale, norm_f)

    passed = (vac_power or ratio_power <= 1.0 + GRID_TOL) and \
             (vac_scale or ratio_scale <= 1.0 + GRID_TOL)
    return ModulusInequalityReport(ratio_power=ratio_power, ratio_scale=ratio_scale,
                                   vacuous_power=vac_power, vacuous_scale=vac_scale,
                                   passed=bool(passed))


# -- step-function machinery for the approximation norms ----------------------

def _step_nodes(dec: SpectralDecomposition) -> np.ndarray:
    """0 followed by the distinct eigenvalues: the jump points of E(f, .)."""
    uniq = np.unique(dec.eigenvalues)
    if uniq.size == 0:
        return np.array([0.0])
    return uniq if uniq[0] == 0.0 else np.concatenate(([0.0], uniq))


def _step_values(dec: SpectralDecomposition, f, route: str) -> tuple:
    """(nodes, values): E(f, s) = values[i] on [nodes[i], nodes[i+1])."""
    nodes = _step_nodes(dec)
    measure = best_approx if route == "E" else spectral_tail
    values = np.array([measure(dec, f, nodes[i]) for i in range(len(nodes) - 1)])
    return nodes, values


def sup_scaled_best_approx(dec: SpectralDecomposition, f, alpha: float,
                           route: str = "E") -> float:
    """``sup over s > 0`` of ``s^alpha E(f, s)``, exact for step functions.

    On each constancy interval the supremum of ``s^alpha * const`` sits at
    the right endpoint, so the global supremum is a finite maximum.
    """
    nodes, values = _step_values(dec, f, route)
    if values.size == 0:
        return 0.0
    return float(np.max(values * nodes[1:] ** alpha))


def _integral_norm_power(dec, f, alpha, q, route):
    """Closed form of ``integral of (s^alpha E(f,s))^q ds/s`` over (0, inf)."""
    nodes, values = _step_values(dec, f, route)
    if values.size == 0:
        return 0.0
    aq = alpha * q
    pieces = values ** q * (nodes[1:] ** aq - nodes[:-1] ** aq) / aq
    return float(np.sum(pieces))


def _discrete_terms(dec, f, alpha, a, route):
    """Terms ``a^{k alpha} E(f, a^k)`` for k = 0 .. K-1, truncated where E = 0."""
    lam_max = dec.lambda_max
    measure = best_approx if route == "E" else spectral_tail
    terms = []
    k = 0
    while a ** k < lam_max and k < 10_000:
        terms.append((a ** (k * alpha)) * measure(dec, f, a ** k))
        k += 1
    return np.array(terms)


def besov_norm(dec: SpectralDecomposition, f, params: BesovParams) -> float:
    """One of the equivalent smoothness norms, selected by ``params.flavor``.

    The E flavors measure the decay of the best approximation computed in
    the vector domain; the R flavors measure the coefficient tail.  The
    two families agree to near machine precision, which downstream checks
    exploit.  Integral flavors are exact (piecewise evaluation); discrete
    flavors truncate where the terms become identically zero.
    """
    vec = as_vector(f, dec.dim)
    norm_f = float(np.linalg.norm(vec))
    flavor = params.flavor
    if flavor == "k_functional":
        return k_besov_norm(dec, vec, params)
    if flavor == "modulus":
        return norm_f + besov_seminorm_sup(dec, vec, params.alpha, 0, params.r)

    route = "E" if flavor.endswith("_E") else "R"
    if flavor.startswith("integral"):
        if params.is_sup:
            tail = sup_scaled_best_approx(dec, vec, params.alpha, route)
        else:
            tail = _integral_norm_power(dec, vec, params.alpha, params.q, route) ** (1.0 / params.q)
    else:
        terms = _discrete_terms(dec, vec, params.alpha, params.a, route)
        if terms.size == 0:
            tail = 0.0
        elif params.is_sup:
            tail = float(np.max(terms))
        else:
            tail = float(np.sum(terms ** params.q) ** (1.0 / params.q))
    return norm_f + tail


# -- Peetre K-functional -------------------------------------------------------

def k_functional(dec: SpectralDecomposition, f, t: float, r: int,
                 domain_norm: str = "seminorm", search_iters: int = 100) -> float:
    """``inf over g`` of ``||f - g|| + t ||D^r g||`` (Peetre K-functional).

    The infimum is taken along the Tikhonov family
    ``g_s = (I + s W)^{-1} f`` with ``W = D^{2r}``, which traces the exact
    Pareto frontier of the pair of norms; a golden-section search in
    ``log s`` is therefore exact up to the search tolerance.  With
    ``domain_norm="graph"`` the second term is the graph norm
    ``(||g||^2 + ||D^r g||^2)^{1/2}`` and ``W = I + D^{2r}``.
    """
    if not (t > 0.0):
        raise NonPositiveTError(f"t must be > 0, got {t}")
    if r < 1:
        raise InvalidParamsError("r must be a positive integer")
    if domain_norm not in ("seminorm", "graph"):
        raise InvalidParamsError(f"unknown domain_norm {domain_norm!r}")
    c = spectral_transform(dec, f)
    mag2 = np.abs(c.coeffs) ** 2
    if not np.any(mag2 > 0.0):
        return 0.0
    lam2r = dec.eigenvalues ** (2 * r)
    w = lam2r if domain_norm == "seminorm" else 1.0 + lam2r

    def objective_parts(s):
        damp = s * w / (1.0 + s * w)
        a2 = float(np.sum(mag2 * damp ** 2))
        b2 = float(np.sum(mag2 * w / (1.0 + s * w) ** 2))
        return math.sqrt(max(a2, 0.0)), math.sqrt(max(b2, 0.0))

    def objective(log_s):
        a, b = objective_parts(math.exp(log_s))
        return a + t * b

    w_pos = w[w > 0.0]
    # endpoints of the path: g = f (s -> 0) and g = projection onto ker W
    b_at_zero = math.sqrt(float(np.sum(mag2 * w)))
    candidates = [t * b_at_zero,
                  math.sqrt(float(np.sum(mag2[w > 0.0])))]
    if w_pos.size:
        lo = math.log(1e-12 / float(w_pos.max()))
        hi = math.log(1e12 / float(w_pos.min()))
        candidates.append(_golden_min(objective, lo, hi, iters=search_iters))
    return min(candidates)


def k_besov_norm(dec: SpectralDecomposition, f, params: BesovParams,
                 grid_points: int = 200, domain_norm: str = "seminorm") -> float:
    """Interpolation-space norm built from the K-functional.

    ``||f|| + (integral of (t^{-alpha/r} K(t, f))^q dt/t)^{1/q}`` by
    trapezoidal quadrature on a log grid ``t in [1e-6 / lambda_max^r, 1e6]``;
    outside the grid ``K(t, f) <= min(||f||-type, t ||D^r f||)`` makes the
    tails negligible.  This norm is a measurement (used in equivalence
    ratios), not a closed form.
    """
    vec = as_vector(f, dec.dim)
    norm_f = float(np.linalg.norm(vec))
    if norm_f == 0.0:
        return 0.0
    r = params.r
    theta = params.alpha / r
    lam_max = dec.lambda_max
    if lam_max == 0.0:
        return norm_f  # K(t, f) = 0: take g = f, the seminorm vanishes
    t_min = 1e-6 / lam_max ** r
    t_max = 1e6
    u = np.linspace(math.log(t_min), math.log(t_max), grid_points)
    k_vals = np.array([k_functional(dec, vec, math.exp(ui), r, domain_norm)
                       for ui in u])
    scaled = np.exp(-theta * u) * k_vals
    if params.is_sup:
        return norm_f + float(np.max(scaled))
    integral = float(np.trapezoid(scaled ** params.q, u))
    return norm_f + integral ** (1.0 / params.q)


# -- modulus-based seminorm and the two inverse-theorem lemmas -----------------

def besov_seminorm_sup(dec: SpectralDecomposition, f, alpha: float, n: int, r: int,
                       grid_points: int = 512) -> float:
    """``sup over s > 0`` of ``s^{n - alpha} Omega_r(D^n f, s)``.

    Evaluated on a 512-point log grid of shifts spanning
    ``[0.01 / lambda_max, 100 / lambda_min_positive]``.  Outside that range
    the scaled modulus decays: for large ``s`` the factor ``s^{n-alpha}``
    kills the bounded modulus, for small ``s`` the modulus itself is
    ``O(s^r)`` and ``r > alpha - n`` makes the product vanish.
    """
    if n < 0 or r < 1:
        raise InvalidParamsError("need n >= 0 and r >= 1")
    if not (alpha > n):
        raise InvalidOrderError(f"need alpha > n, got alpha={alpha}, n={n}")
    vec = as_vector(f, dec.dim)
    g = operator_power(dec, n, vec) if n > 0 else vec
    c = spectral_transform(dec, g)
    mag2 = np.abs(c.coeffs) ** 2
    if not np.any(mag2 > 0.0):
        return 0.0
    lam_max = dec.lambda_max
    lam_min_pos = dec.min_positive_eigenvalue
    if lam_min_pos == 0.0:
        return 0.0  # spectrum is {0}: the group is trivial, all differences vanish
    hi = 100.0 / lam_min_pos
    s_grid = np.exp(np.linspace(math.log(0.01 / lam_max), math.log(hi), grid_points))
    best = 0.0
    for s in s_grid:
        omega_r = _modulus_from_mag2(dec.eigenvalues, mag2, float(s), r, 512, 3)
        best = max(best, s ** (n - alpha) * omega_r)
    return best


@dataclass(frozen=True, eq=False)
class LemmaReport:
    """Empirical constant for one of the two inverse-theorem inequalities."""

    lhs: float
    rhs: float
    ratio: float
    vacuous: bool
    passed: bool


def _lemma_orders_ok(alpha: float, n: int, r: int):
    if not (alpha - n > 0.0 and r > alpha - n):
        raise InvalidOrderError(
            f"need r > alpha - n > 0, got alpha={alpha}, n={n}, r={r}")


def lemma1_check(dec: SpectralDecomposition, f, alpha: float, n: int, r: int) -> LemmaReport:
    """Measure ``sup_s s^alpha E(f, s)`` against the modulus seminorm.

    The inequality direction says the sup is bounded by a constant times
    the seminorm; the returned ratio is that empirical constant.  Both
    sides zero is reported as a vacuous pass.
    """
    _lemma_orders_ok(alpha, n, r)
    vec = as_vector(f, dec.dim)
    lhs = sup_scaled_best_approx(dec, vec, alpha)
    rhs = besov_seminorm_sup(dec, vec, alpha, n, r)
    norm_f = float(np.linalg.norm(vec))
    ratio, vacuous = _safe_ratio(lhs, rhs, max(norm_f, 1.0))
    return LemmaReport(lhs=lhs, rhs=rhs, ratio=ratio, vacuous=vacuous,
                       passed=bool(math.isfinite(ratio)))


def lemma2_check(dec: SpectralDecomposition, f, alpha: float, n: int, r: int,
                 a: float = 2.0) -> LemmaReport:
    """Measure the modulus seminorm against ``||f|| + sup_s s^alpha E(f, s)``."""
    _lemma_orders_ok(alpha, n, r)
    if not (a > 1.0):
        raise InvalidParamsError("base a must be > 1")
    vec = as_vector(f, dec.dim)
    lhs = besov_seminorm_sup(dec, vec, alpha, n, r)
    t_val = sup_scaled_best_approx(dec, vec, alpha)
    norm_f = float(np.linalg.norm(vec))
    rhs = norm_f + t_val
    ratio, vacuous = _safe_ratio(lhs, rhs, max(norm_f, 1.0))
    return LemmaReport(lhs=lhs, rhs=rhs, ratio=ratio, vacuous=vacuous,
                       passed=bool(math.isfinite(ratio)))
