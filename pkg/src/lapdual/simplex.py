"""Exact closed forms on the dilated canonical simplex.

For K_y = {x >= 0 : x_1 + ... + x_d <= y} and generalized monomials
f(x) = x_1^a_1 * ... * x_d^a_d with every a_i > -1, both v(y) and the
Laplace transform of v are products of Gamma factors:

    v(y)     = y^(d + sum(a)) * prod Gamma(1 + a_i) / Gamma(1 + d + sum(a))
    L_v(lam) = prod Gamma(1 + a_i) / lam^(1 + d + sum(a))

All Gamma ratios are accumulated in log space so large d + sum(a) does
not overflow.  Generalized polynomials (finite sums of such monomials)
follow by additivity.  Real, non-integer exponents are supported here
only; the quadrature engines elsewhere need integrands evaluable on
whole boxes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from numbers import Real

import numpy as np

from .errors import InputError
from .special import log_gamma


def _validate_alpha(alpha) -> tuple[float, ...]:
    alpha = tuple(float(a) for a in alpha)
    if not alpha:
        raise InputError("alpha must have at least one entry")
    for a in alpha:
        if not a > -1.0:
            raise InputError(f"every exponent must exceed -1, got {a!r}")
    return alpha


@dataclass(frozen=True)
class SimplexMonomial:
    """coef * x^alpha with every alpha_i > -1 (integrable at the boundary)."""

    alpha: tuple[float, ...]
    coef: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "alpha", _validate_alpha(self.alpha))
        if isinstance(self.coef, bool) or not isinstance(self.coef, Real):
            raise InputError(f"coef must be a number, got {self.coef!r}")
        object.__setattr__(self, "coef", float(self.coef))

    @property
    def dim(self) -> int:
        return len(self.alpha)


@dataclass(frozen=True)
class GeneralizedPolynomial:
    """A finite sum of simplex monomials over a common dimension."""

    terms: tuple[SimplexMonomial, ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        dims = {t.dim for t in self.terms}
        if len(dims) > 1:
            raise InputError(f"terms mix dimensions {sorted(dims)}")

    @property
    def dim(self) -> int | None:
        return self.terms[0].dim if self.terms else None


def multivariate_laplace_monomial(alpha, gamma_vec) -> float:
    """prod_i Gamma(1 + alpha_i) / gamma_i^(1 + alpha_i), the
    orthant Laplace transform of x^alpha evaluated at gamma_vec > 0."""
    alpha = _validate_alpha(alpha)
    gamma_vec = tuple(float(gv) for gv in gamma_vec)
    if len(gamma_vec) != len(alpha):
        raise InputError(
            f"gamma_vec has length {len(gamma_vec)}, expected {len(alpha)}"
        )
    for gv in gamma_vec:
        if not gv > 0:
            raise InputError(f"every transform coordinate must be positive, got {gv!r}")
    log_value = math.fsum(
        log_gamma(1.0 + a) - (1.0 + a) * math.log(gv) for a, gv in zip(alpha, gamma_vec)
    )
    return math.exp(log_value)


def simplex_monomial_v(alpha, y: float) -> float:
    """Exact integral of x^alpha over {x >= 0 : sum(x) <= y}."""
    alpha = _validate_alpha(alpha)
    y = float(y)
    if y < 0:
        raise InputError(f"y must be nonnegative, got {y!r}")
    if y == 0.0:
        return 0.0
    p = len(alpha) + math.fsum(alpha)
    log_value = (
        p * math.log(y)
        + math.fsum(log_gamma(1.0 + a) for a in alpha)
        - log_gamma(1.0 + p)
    )
    return math.exp(log_value)


def simplex_laplace_of_v(alpha, lam: float) -> float:
    """Laplace transform of y -> simplex_monomial_v(alpha, y):
    L_v(lam) = prod Gamma(1 + alpha_i) / lam^(1 + d + sum(alpha))."""
    alpha = _validate_alpha(alpha)
    if not lam > 0:
        raise InputError(f"lam must be positive, got {lam!r}")
    return multivariate_laplace_monomial(alpha, (lam,) * len(alpha)) / lam


def generalized_polynomial_v(p: GeneralizedPolynomial, y: float) -> float:
    """Term-wise sum of coef * simplex_monomial_v(alpha, y)."""
    total = 0.0
    for term in p.terms:
        total += term.coef * simplex_monomial_v(term.alpha, y)
    return total


def orthant_monomial_evaluator(alpha):
    """Vectorized x^alpha on the open positive orthant, 0 elsewhere.

    The zero extension realizes the convention that simplex integrands
    vanish off the nonnegative orthant, so whole-box engines (Monte
    Carlo, box cubature) can be pointed at simplex problems directly.
    """
    alpha = np.asarray(_validate_alpha(alpha))

    def f(pts):
        pts = np.asarray(pts, dtype=float)
        out = np.zeros(pts.shape[0])
        mask = np.all(pts > 0.0, axis=1)
        if mask.any():
            out[mask] = np.prod(pts[mask] ** alpha, axis=1)
        return out

    return f


def simplex_gauge(pts) -> np.ndarray:
    """g(x) = x_1 + ... + x_d, the sublevel function of the simplex family."""
    return np.sum(np.asarray(pts, dtype=float), axis=1)
