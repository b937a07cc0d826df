"""Posterior target abstraction shared by all samplers.

A :class:`TargetModel` bundles the potential U(x) = -log pi(x) (up to a
constant), its gradient under the almost-everywhere convention (undefined
partial derivatives evaluate to zero - valid because the set where they do
not exist has Lebesgue measure zero), and optional structure the samplers
exploit: a smooth/non-smooth split with an attached proximal operator, an
additive factor decomposition, closed-form event-rate families, and
reflective parameter constraints.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import DomainError, FactorValidationError, UnsupportedOperationError
from .prox import ProxSpec


@dataclass(frozen=True)
class BoundStrategy:
    """Recipe for a dominating event-rate bound on a look-ahead window.

    kinds:
      - ``constant``: payload is the bound itself, or a callable
        ``payload(x, v, w_start, theta)`` evaluated per window.
      - ``linear-in-t``: payload ``(intercept, slope)``; the bound on
        [w, w+theta] is intercept + slope * (w + theta).
      - ``log-concave-endpoint``: the rate along a ray is nondecreasing for
        convex potentials, so the window endpoint dominates.

    ``safety_gamma`` is an absolute margin added to the raw bound; when None
    a relative 1e-9 margin absorbs endpoint rounding.
    """

    kind: str
    payload: object = None
    lookahead_theta: float = 1.0
    safety_gamma: Optional[float] = None

    def __post_init__(self):
        if self.kind not in ("constant", "linear-in-t", "log-concave-endpoint"):
            raise ValueError(f"unknown bound kind {self.kind!r}")
        if not self.lookahead_theta > 0:
            raise ValueError("lookahead_theta must be positive")
        if self.safety_gamma is not None and self.safety_gamma < 0:
            raise ValueError("safety_gamma must be nonnegative")

    def window_bound(self, rate_fn, w_start, theta=None, context=None):
        """Dominating constant for the rate on [w_start, w_start + theta]."""
        theta = self.lookahead_theta if theta is None else theta
        if self.kind == "constant":
            if callable(self.payload):
                x, v = context if context is not None else (None, None)
                raw = float(self.payload(x, v, w_start, theta))
            else:
                raw = float(self.payload)
        elif self.kind == "linear-in-t":
            intercept, slope = self.payload
            if callable(intercept):
                x, v = context if context is not None else (None, None)
                intercept, slope = intercept(x, v), slope(x, v)
            raw = float(intercept) + float(slope) * (w_start + theta)
        else:
            raw = float(rate_fn(w_start + theta))
        gamma = 1e-9 * abs(raw) if self.safety_gamma is None else self.safety_gamma
        return max(raw, 0.0) + gamma


@dataclass(frozen=True)
class Factor:
    """Additive potential term touching a subset of coordinates.

    ``potential`` and ``grad`` act on the restricted subvector x[coords].
    Factors may overlap; coverage of 1..dim requires their union only.
    """

    coords: np.ndarray
    potential: Callable[[np.ndarray], float]
    grad: Callable[[np.ndarray], np.ndarray]
    rate_bound: Optional[BoundStrategy] = None


@dataclass(frozen=True)
class NondiffSplit:
    """U = smooth part + non-smooth part, the latter carrying its prox."""

    smooth_potential: Callable[[np.ndarray], float]
    smooth_grad: Callable[[np.ndarray], np.ndarray]
    prox: ProxSpec


@dataclass(frozen=True)
class ZzExactFamily:
    """Per-coordinate rate family admitting closed-form event times.

    ``laplace``: rates beta_i * 1[moving away from the axis], piecewise
    constant along the flow. ``gaussian``: rates max(0, x_i v_i + t)/s2_i,
    linear along the flow. ``scale`` holds beta resp. the variances.
    """

    kind: str
    scale: np.ndarray


@dataclass(frozen=True)
class BpsExactFamily:
    """Global BPS rate family along a ray: ``gaussian`` (linear rate with
    diagonal covariance ``scale``) or ``laplace`` (piecewise constant,
    ``scale`` = beta)."""

    kind: str
    scale: np.ndarray


@dataclass(frozen=True)
class ReflectiveBarrier:
    """Coordinate constrained to [lower, upper]; velocities reflect at hits."""

    coord: int
    lower: float = -np.inf
    upper: float = np.inf


@dataclass(frozen=True)
class GaussianComponent:
    """Spherical Gaussian potential split out for Hamiltonian-flow BPS.

    V(x) = ||x - mean||^2 / (2 sigma^2); ``uhat_grad`` is the gradient of the
    remaining potential U - V used in rates and reflections, and
    ``uhat_grad_norm_bound`` bounds its Euclidean norm (for thinning).
    """

    mean: np.ndarray
    sigma: float
    uhat_grad: Callable[[np.ndarray], np.ndarray]
    uhat_grad_norm_bound: float


@dataclass(frozen=True)
class TargetModel:
    dim: int
    potential: Callable[[np.ndarray], float]
    grad: Callable[[np.ndarray], np.ndarray]
    partial: Callable[[int, np.ndarray], float]
    kink_mask: Optional[Callable[[np.ndarray], np.ndarray]] = None
    nondiff_split: Optional[NondiffSplit] = None
    factors: Optional[tuple] = None
    zz_family: Optional[ZzExactFamily] = None
    bps_family: Optional[BpsExactFamily] = None
    zz_bounds: Optional[Sequence[BoundStrategy]] = None
    bps_bound: Optional[BoundStrategy] = None
    gaussian_part: Optional[GaussianComponent] = None
    barriers: tuple = ()
    name: str = "target"
    meta: dict = field(default_factory=dict)


def grad_with_convention(model: TargetModel, x: np.ndarray) -> np.ndarray:
    """Full gradient of U with zeros substituted at declared kinks."""
    x = np.asarray(x, dtype=float)
    if x.shape != (model.dim,):
        raise ValueError(f"state has shape {x.shape}, expected ({model.dim},)")
    pot = model.potential(x)
    if not np.isfinite(pot):
        raise DomainError(f"potential is {pot} at {x!r}")
    g = np.asarray(model.grad(x), dtype=float).copy()
    if model.kink_mask is not None:
        mask = model.kink_mask(x)
        if np.any(mask):
            g[mask] = 0.0
    return g


def smoothed_grad(model: TargetModel, x: np.ndarray, lam: float) -> np.ndarray:
    """Gradient of the envelope-smoothed potential.

    With U split into a smooth part and a proximable non-smooth part g, the
    smoothed potential replaces g by its envelope, whose gradient is the
    scaled prox residual: smooth_grad(x) + (x - prox(x)) / lam.
    """
    if model.nondiff_split is None:
        raise UnsupportedOperationError(
            f"model {model.name!r} has no smooth/non-smooth split")
    x = np.asarray(x, dtype=float)
    split = model.nondiff_split
    res = split.prox.evaluate(x, lam)
    return np.asarray(split.smooth_grad(x), dtype=float) + (x - res.point) / lam


@dataclass(frozen=True)
class FactorReport:
    n_points: int
    constant: float
    worst_residual: float
    worst_point: np.ndarray


def validate_factors(model: TargetModel, n_points: int = 16, tol: float = 1e-8,
                     rng=None) -> FactorReport:
    """Check coordinate coverage and additive reconstruction of U.

    The shared additive constant is estimated once at a reference point, then
    |sum_i U_i(x) - U(x) - c| is required to stay below ``tol`` at random
    states.
    """
    if not model.factors:
        raise UnsupportedOperationError(f"model {model.name!r} declares no factors")
    covered = np.zeros(model.dim, dtype=bool)
    for f in model.factors:
        covered[np.asarray(f.coords, dtype=int)] = True
    if not covered.all():
        missing = np.flatnonzero(~covered)
        raise FactorValidationError(
            f"factor coords do not cover coordinates {missing.tolist()}",
            missing_coords=missing)
    rng = np.random.default_rng(0) if rng is None else rng

    def total(x):
        return sum(float(f.potential(x[f.coords])) for f in model.factors)

    x_ref = rng.standard_normal(model.dim)
    c = total(x_ref) - float(model.potential(x_ref))
    worst, worst_x = 0.0, x_ref
    for _ in range(n_points):
        x = rng.standard_normal(model.dim)
        resid = abs(total(x) - float(model.potential(x)) - c)
        if resid > worst:
            worst, worst_x = resid, x
    if worst > tol:
        raise FactorValidationError(
            f"factor reconstruction residual {worst:.3e} exceeds {tol:.1e} "
            f"at {worst_x!r}", worst_point=worst_x)
    return FactorReport(n_points=n_points, constant=c, worst_residual=worst,
                        worst_point=worst_x)
