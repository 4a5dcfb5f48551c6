"""Required projection dimension for subset sampling, and its inverses.

Both calculators solve for the smallest integer k meeting

    basic:     k >= B
    serfling:  k / (1 - (k-1)/d) >= B      (finite-population correction)

with B = c^2 * ln(N^2 / delta) / (2 eps^2). The N^2 (not N(N-1)/2)
inside the log is deliberate; the union-bound slack is part of the
guarantee being computed. The serfling left side k*d/(d-k+1) is checked
with exact rational arithmetic at k and k-1, so float rounding cannot
move the returned integer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class BoundResult:
    k: int
    feasible: bool
    raw_bound: float  # the threshold B


@dataclass(frozen=True)
class EpsilonResult:
    epsilon: float
    guaranteed: bool  # False when the achievable distortion exceeds 1


def _validate(c, epsilon, delta, n_points, d=None, d_required=False):
    if not c >= 1:
        raise ValueError(f"c must be >= 1, got {c}")
    if not 0 < epsilon <= 1:
        raise ValueError(f"epsilon must be in (0, 1], got {epsilon}")
    if not 0 < delta <= 1:
        raise ValueError(f"delta must be in (0, 1], got {delta}")
    if n_points < 1:
        raise ValueError(f"n_points must be >= 1, got {n_points}")
    if d_required and d is None:
        raise ValueError("d is required for the serfling variant")
    if d is not None and d < 1:
        raise ValueError(f"d must be >= 1, got {d}")


def _threshold(c, epsilon, delta, n_points) -> float:
    return c * c * math.log(n_points * n_points / delta) / (2.0 * epsilon * epsilon)


def required_k_basic(c, epsilon, delta, n_points, d=None) -> BoundResult:
    """Smallest k with k >= B, clamped to >= 1.

    When d is supplied and the requirement exceeds it, the raw k is still
    returned with feasible=False; callers often want the number anyway.
    """
    _validate(c, epsilon, delta, n_points, d)
    B = _threshold(c, epsilon, delta, n_points)
    k = max(1, math.ceil(B))
    feasible = d is None or k <= d
    return BoundResult(k=k, feasible=feasible, raw_bound=B)


def _serfling_satisfied(k, d, B) -> bool:
    # k/(1-(k-1)/d) == k*d/(d-k+1); exact integer/rational comparison
    return Fraction(k * d, d - k + 1) >= Fraction(B)


def required_k_serfling(c, epsilon, delta, n_points, d) -> BoundResult:
    """Smallest k in [1, d] with k/(1-(k-1)/d) >= B.

    Solved in closed form as k >= B(d+1)/(d+B), then verified (and the
    minimality of k over k-1) exactly. If even k=d fails, which needs
    B > d^2, the result is k=d with feasible=False.
    """
    _validate(c, epsilon, delta, n_points, d, d_required=True)
    B = _threshold(c, epsilon, delta, n_points)
    k = max(1, math.ceil(B * (d + 1) / (d + B)))
    k = min(k, d)
    # float rounding in the closed form can land one off; walk to the
    # exact minimum
    while k < d and not _serfling_satisfied(k, d, B):
        k += 1
    while k > 1 and _serfling_satisfied(k - 1, d, B):
        k -= 1
    if not _serfling_satisfied(k, d, B):
        return BoundResult(k=d, feasible=False, raw_bound=B)
    return BoundResult(k=k, feasible=True, raw_bound=B)


def achievable_epsilon(c, k, delta, n_points, d=None, variant="basic") -> EpsilonResult:
    """Smallest distortion guaranteed at a given k (inverse calculators).

    May exceed 1, in which case the stated guarantee is vacuous and the
    result is flagged guaranteed=False.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    _validate(c, 1.0, delta, n_points, d, d_required=(variant == "serfling"))
    if variant == "basic":
        k_eff = float(k)
    elif variant == "serfling":
        if k > d:
            raise ValueError(f"k={k} exceeds d={d}")
        k_eff = k * d / (d - k + 1.0)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    eps = c * math.sqrt(math.log(n_points * n_points / delta) / (2.0 * k_eff))
    return EpsilonResult(epsilon=eps, guaranteed=eps <= 1.0)


def dot_product_band(xi_norm, xj_norm, epsilon) -> float:
    """Half-width of the inner-product preservation band,
    eps * ||x_i|| * ||x_j||. The scaled projected dot product lands
    inside [dot - w, dot + w] with confidence 1 - 2*delta when k was
    chosen from the norm bound at delta."""
    if xi_norm < 0 or xj_norm < 0:
        raise ValueError("norms must be non-negative")
    if not 0 < epsilon <= 1:
        raise ValueError(f"epsilon must be in (0, 1], got {epsilon}")
    return float(epsilon * xi_norm * xj_norm)
