"""Closed-form VC-dimension bounds and the risk radii they certify.

Every estimator in this package comes with a deviation guarantee of the form
"with probability at least 1 - exp(-K/128), the error is below a radius
proportional to sqrt(K/N)", valid once the number of blocks K dominates both a
VC-type complexity term and the number of corrupted samples.  This module
collects the complexity bounds, the per-task radii, and the block-count
thresholds in one place.  Thresholds are informative only: they are reported
with unit constant and never enforced by the estimators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

__all__ = [
    "BoundSheet",
    "CONTEXTS",
    "vc_union_bound",
    "vc_sparse_bound",
    "vc_poly_bound",
    "vc_lowrank_bound",
    "vc_sparse_rank1_bound",
    "risk_radius",
]

CONTEXTS = (
    "mean_any_norm",
    "sparse_mean",
    "regression",
    "cov_spectral",
    "cov_lowrank",
    "eigensplit",
)

_LOG2_E = math.log2(math.e)


@dataclass(frozen=True)
class BoundSheet:
    """One task's certificate: complexity, block threshold, radius, failure odds.

    ``k_threshold`` is the block count required by the matching guarantee, up
    to a universal constant reported here as ``c_multiplier`` (default 1).
    ``failure_prob`` is always exactly ``exp(-k/128)``.
    """

    context: str
    vc_bound: float
    k_threshold: float
    risk_radius: float
    failure_prob: float
    params: dict = field(default_factory=dict)


def _check_positive(**kwargs) -> None:
    for name, value in kwargs.items():
        if value is None or not value > 0:
            raise ValueError(f"{name} must be positive, got {value!r}")


def vc_union_bound(nu: float, n_classes: int, form: str = "proof") -> float:
    """VC bound for a union of ``n_classes`` classes, each of dimension <= nu.

    The default ``form="proof"`` returns ``2*nu*log2(e) + 2*log2(n)``, the
    quantity the underlying argument actually establishes.  ``form="stated"``
    returns the looser-looking ``2*nu + 2*ln(n)`` variant that is sometimes
    quoted (natural log chosen since the base there is conventional); it is
    exposed for comparison only.
    """
    if nu < 1:
        raise ValueError(f"nu must be >= 1, got {nu}")
    if n_classes < 1:
        raise ValueError(f"n_classes must be >= 1, got {n_classes}")
    if form == "proof":
        return 2.0 * nu * _LOG2_E + 2.0 * math.log2(n_classes)
    if form == "stated":
        return 2.0 * nu + 2.0 * math.log(n_classes)
    raise ValueError(f"unknown form {form!r}, expected 'proof' or 'stated'")


def vc_sparse_bound(s: int, d: int) -> float:
    """VC bound ``4*s*log2(e*d/s)`` for s-sparse direction classes in dimension d."""
    if not 1 <= s <= d:
        raise ValueError(f"need 1 <= s <= d, got s={s}, d={d}")
    return 4.0 * s * math.log2(math.e * d / s)


def vc_poly_bound(n_vars: int, degree: int) -> float:
    """VC bound ``2*n*log2(4*e*degree)`` for sign patterns of degree-bounded
    polynomials in ``n_vars`` variables."""
    if n_vars < 1 or degree < 1:
        raise ValueError(f"need n_vars >= 1 and degree >= 1, got {n_vars}, {degree}")
    return 2.0 * n_vars * math.log2(4.0 * math.e * degree)


def vc_lowrank_bound(d: int, k_rank: int) -> float:
    """VC bound ``2*(d+1)*k*log2(12*e)`` for quadratic classes of rank <= k."""
    if d < 1 or k_rank < 1:
        raise ValueError(f"need d >= 1 and k_rank >= 1, got {d}, {k_rank}")
    return 2.0 * (d + 1) * k_rank * math.log2(12.0 * math.e)


def vc_sparse_rank1_bound(s: int, d: int) -> float:
    """VC bound for rank-one quadratics with s-sparse factors: exactly
    ``4 * vc_sparse_bound(s, d)``."""
    return 4.0 * vc_sparse_bound(s, d)


def _sheet(context, vc, threshold_term, radius, k, n_outliers, c_multiplier, params):
    _check_positive(k=k)
    if n_outliers < 0:
        raise ValueError(f"n_outliers must be >= 0, got {n_outliers}")
    k_threshold = c_multiplier * max(threshold_term, float(n_outliers))
    return BoundSheet(
        context=context,
        vc_bound=float(vc),
        k_threshold=float(k_threshold),
        risk_radius=float(radius),
        failure_prob=math.exp(-k / 128.0),
        params=dict(params),
    )


def risk_radius(
    context: str,
    *,
    k: int,
    n: int,
    n_outliers: int = 0,
    c_multiplier: float = 1.0,
    **scale_params,
) -> BoundSheet:
    """Certified deviation radius for one estimation task.

    Required scale parameters per context:

    mean_any_norm   sigma_half_norm (operator norm of the covariance square
                    root against the chosen norm's dual ball), d
    sparse_mean     lambda1 (largest covariance eigenvalue), s, d
    regression      sigma (weak noise scale), gamma (small-ball constant),
                    d, and optionally s for the sparse model set
    cov_spectral    sigma (weak variance of the quadratic process), d
    cov_lowrank     sigma, d, r (target rank)
    eigensplit      lambda1, d, s, band_dims (iterable of band dimensions)

    Returns a BoundSheet whose ``risk_radius`` scales like sqrt(k/n) and whose
    ``failure_prob`` is exactly exp(-k/128).  The regression radius is on the
    root scale: its square bounds the quadratic prediction risk.
    """
    _check_positive(k=k, n=n)
    if c_multiplier <= 0:
        raise ValueError("c_multiplier must be positive")
    rate = math.sqrt(k / n)
    p = dict(scale_params, k=k, n=n, n_outliers=n_outliers, c_multiplier=c_multiplier)

    if context == "mean_any_norm":
        sigma_half = scale_params["sigma_half_norm"]
        d = int(scale_params["d"])
        _check_positive(sigma_half_norm=sigma_half, d=d)
        vc = d + 1.0
        return _sheet(context, vc, vc, 8.0 * sigma_half * rate, k, n_outliers, c_multiplier, p)

    if context == "sparse_mean":
        lambda1 = scale_params["lambda1"]
        s, d = int(scale_params["s"]), int(scale_params["d"])
        _check_positive(lambda1=lambda1, s=s, d=d)
        vc = vc_sparse_bound(min(2 * s, d), d)
        threshold = s * math.log(d / s)
        return _sheet(
            context, vc, threshold, 8.0 * math.sqrt(lambda1) * rate, k, n_outliers, c_multiplier, p
        )

    if context == "regression":
        sigma = scale_params["sigma"]
        gamma = scale_params["gamma"]
        d = int(scale_params["d"])
        s = scale_params.get("s")
        _check_positive(sigma=sigma, d=d)
        if not 0 < gamma <= 1:
            raise ValueError(f"gamma must lie in (0, 1], got {gamma}")
        vc = vc_sparse_bound(min(2 * int(s), d), d) if s else d + 1.0
        radius = math.sqrt(128.0) * sigma * rate / gamma**2
        return _sheet(context, vc, vc, radius, k, n_outliers, c_multiplier, p)

    if context == "cov_spectral":
        sigma = scale_params["sigma"]
        d = int(scale_params["d"])
        _check_positive(sigma=sigma, d=d)
        vc = vc_lowrank_bound(d, 1)
        return _sheet(context, vc, float(d), 8.0 * sigma * rate, k, n_outliers, c_multiplier, p)

    if context == "cov_lowrank":
        sigma = scale_params["sigma"]
        d, r = int(scale_params["d"]), int(scale_params["r"])
        _check_positive(sigma=sigma, d=d, r=r)
        vc = vc_lowrank_bound(d, min(2 * r, d))
        return _sheet(
            context, vc, float(d * r), 8.0 * sigma * rate, k, n_outliers, c_multiplier, p
        )

    if context == "eigensplit":
        lambda1 = scale_params["lambda1"]
        d, s = int(scale_params["d"]), int(scale_params["s"])
        band_dims = list(scale_params["band_dims"])
        _check_positive(lambda1=lambda1, d=d, s=s)
        if not band_dims:
            raise ValueError("band_dims must be a nonempty list of band dimensions")
        cap = s * math.log(d / s) if s < d else 0.0
        complexity = sum(2.0 ** (-(i + 1)) * min(float(di), cap) for i, di in enumerate(band_dims))
        radius = 8.0 * math.log(d) * math.sqrt(lambda1) * rate
        return _sheet(context, complexity, complexity, radius, k, n_outliers, c_multiplier, p)

    raise ValueError(f"unknown context {context!r}; expected one of {CONTEXTS}")
