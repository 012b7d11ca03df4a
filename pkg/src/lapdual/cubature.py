"""Raw integration engines.

Three engines cover every integral the package evaluates:

- tensor-product Gauss-Legendre over a box [-r, r]^d, with optional
  automatic box enlargement for integrands that decay at infinity;
- a Gaussian-weight rule for integrals against exp(-lam * x'Qx) with Q
  symmetric positive definite (tensor Gauss-Hermite after a linear
  change of variables);
- hit-or-miss Monte Carlo over a sublevel set {g <= y} inside a known
  enclosing box, with a counter-based RNG so results are a pure
  function of (inputs, seed) regardless of how work is partitioned.

Point evaluators passed to the engines must accept an (N, d) array of
row points and return an (N,) array of values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import (
    EffortError,
    EvaluationError,
    InputError,
    UnboundedSublevelError,
)
from .polyalg import MultiPoly
from . import rng

ENGINE_BOX = "box-gauss-legendre"
ENGINE_GAUSSIAN = "gaussian-quadratic"
ENGINE_MONTE_CARLO = "monte-carlo"
_ENGINES = (ENGINE_BOX, ENGINE_GAUSSIAN, ENGINE_MONTE_CARLO)

# Hard cap on tensor-grid size; beyond this an engine refuses to run.
MAX_TENSOR_POINTS = 1 << 24

# Fixed chunk sizes: accumulation order never depends on anything else.
_TENSOR_CHUNK = 1 << 18
_MC_CHUNK = 1 << 19

# Box enlargements attempted before declaring the integral non-stabilizing.
_MAX_ENLARGEMENTS = 8

# Node-doubling passes allowed while converging resolution at the initial radius.
_MAX_REFINEMENTS = 6

_SEED_SPHERE = 0x5F3759DF  # fixed internal stream for sphere sampling


@dataclass(frozen=True)
class QuadratureSpec:
    """Engine choice plus resolution/box/seed parameters.

    ``box_radius`` is either a positive half-width or "auto", in which
    case the box engine doubles the radius from an initial guess until
    two successive estimates agree to ``rel_tol`` relatively.
    """

    engine: str = ENGINE_BOX
    nodes_per_axis: int = 64
    box_radius: float | str = "auto"
    sample_count: int = 1_000_000
    seed: int = 0
    rel_tol: float = 1e-9

    def __post_init__(self):
        if self.engine not in _ENGINES:
            raise InputError(f"unknown engine {self.engine!r}; expected one of {_ENGINES}")
        if not isinstance(self.nodes_per_axis, int) or self.nodes_per_axis < 1:
            raise InputError(f"nodes_per_axis must be a positive integer, got {self.nodes_per_axis!r}")
        if not isinstance(self.sample_count, int) or self.sample_count < 1:
            raise InputError(f"sample_count must be a positive integer, got {self.sample_count!r}")
        if not isinstance(self.seed, int) or not 0 <= self.seed < 2**64:
            raise InputError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        if not (isinstance(self.rel_tol, (int, float)) and self.rel_tol > 0):
            raise InputError(f"rel_tol must be positive, got {self.rel_tol!r}")
        if self.box_radius != "auto":
            if not (isinstance(self.box_radius, (int, float)) and self.box_radius > 0):
                raise InputError(f'box_radius must be positive or "auto", got {self.box_radius!r}')
            object.__setattr__(self, "box_radius", float(self.box_radius))
        object.__setattr__(self, "rel_tol", float(self.rel_tol))


@dataclass(frozen=True)
class IntegralEstimate:
    """A single integral value plus provenance.

    ``std_error`` is present exactly when the engine is Monte Carlo;
    deterministic engines report None.  ``effort`` counts integrand
    evaluations actually performed.
    """

    value: float
    std_error: float | None
    engine: str
    effort: int
    box_radius_used: float | None = None

    def __post_init__(self):
        if (self.std_error is not None) != (self.engine == ENGINE_MONTE_CARLO):
            raise InputError("std_error is present if and only if the engine is monte-carlo")
        if self.std_error is not None and self.std_error < 0:
            raise InputError("std_error must be nonnegative")


@lru_cache(maxsize=None)
def _legendre_rule(n: int):
    nodes = np.empty(n)
    weights = np.empty(n)
    m = (n + 1) // 2
    for i in range(1, m + 1):
        # Asymptotic root guess, then Newton on P_n.
        t = math.cos(math.pi * (i - 0.25) / (n + 0.5))
        for _ in range(100):
            p_prev, p = 1.0, t
            for k in range(2, n + 1):
                p_prev, p = p, ((2 * k - 1) * t * p - (k - 1) * p_prev) / k
            dp = n * (t * p - p_prev) / (t * t - 1.0)
            dt = -p / dp
            t += dt
            if abs(dt) <= 1e-15 * max(1.0, abs(t)):
                break
        p_prev, p = 1.0, t
        for k in range(2, n + 1):
            p_prev, p = p, ((2 * k - 1) * t * p - (k - 1) * p_prev) / k
        dp = n * (t * p - p_prev) / (t * t - 1.0)
        w = 2.0 / ((1.0 - t * t) * dp * dp)
        nodes[i - 1] = -t
        nodes[n - i] = t
        weights[i - 1] = w
        weights[n - i] = w
    if n % 2 == 1:
        nodes[n // 2] = 0.0
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def gauss_legendre_rule(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].

    Exact for polynomials of degree <= 2n - 1; weights are positive and
    sum to 2.  Nodes are ascending and exactly symmetric about 0.

    Parameters
    ----------
    n : int
        Number of quadrature points, n >= 1.

    Returns
    -------
    nodes, weights : ndarray
        Read-only arrays of length n.
    """
    if not isinstance(n, int) or n < 1:
        raise InputError(f"rule size must be a positive integer, got {n!r}")
    return _legendre_rule(n)


@lru_cache(maxsize=None)
def _hermite_rule(n: int):
    if n == 1:
        nodes = np.zeros(1)
        weights = np.array([math.sqrt(math.pi)])
    else:
        # Golub-Welsch: eigen-decompose the symmetric tridiagonal Jacobi
        # matrix of the (physicists') Hermite recurrence.
        off = np.sqrt(np.arange(1, n) / 2.0)
        jacobi = np.diag(off, 1) + np.diag(off, -1)
        vals, vecs = np.linalg.eigh(jacobi)
        nodes = vals
        weights = math.sqrt(math.pi) * vecs[0, :] ** 2
        # Enforce exact +/- symmetry of the rule.
        nodes = 0.5 * (nodes - nodes[::-1])
        weights = 0.5 * (weights + weights[::-1])
        if n % 2 == 1:
            nodes[n // 2] = 0.0
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def gauss_hermite_rule(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights for the weight exp(-x^2) on the real line.

    Exact for polynomials of degree <= 2n - 1 against that weight.
    """
    if not isinstance(n, int) or n < 1:
        raise InputError(f"rule size must be a positive integer, got {n!r}")
    return _hermite_rule(n)


def _tensor_apply(phi, nodes, weights, dim):
    """Sum of w_tensor * phi over the tensor grid, chunked deterministically."""
    n = nodes.size
    total_points = n**dim
    if total_points > MAX_TENSOR_POINTS:
        raise EffortError(
            f"{n}^{dim} = {total_points} tensor nodes exceed the cap of {MAX_TENSOR_POINTS}"
        )
    partials = []
    for lo in range(0, total_points, _TENSOR_CHUNK):
        idx = np.arange(lo, min(lo + _TENSOR_CHUNK, total_points))
        pts = np.empty((idx.size, dim))
        w = np.ones(idx.size)
        rem = idx
        for j in range(dim - 1, -1, -1):
            digit = rem % n
            rem = rem // n
            pts[:, j] = nodes[digit]
            w *= weights[digit]
        vals = np.asarray(phi(pts), dtype=float)
        if vals.shape != (idx.size,):
            raise InputError(
                f"integrand returned shape {vals.shape}, expected ({idx.size},)"
            )
        if not np.all(np.isfinite(vals)):
            raise EvaluationError("integrand returned a non-finite value at a quadrature node")
        partials.append(float(np.sum(vals * w)))
    return math.fsum(partials), total_points


def _box_estimate(phi, dim, radius, nodes_per_axis):
    base_nodes, base_weights = gauss_legendre_rule(nodes_per_axis)
    return _tensor_apply(phi, radius * base_nodes, radius * base_weights, dim)


def integrate_box(
    phi: Callable[[np.ndarray], np.ndarray],
    dim: int,
    spec: QuadratureSpec,
    *,
    initial_radius: float | None = None,
) -> IntegralEstimate:
    """Tensor Gauss-Legendre estimate of the integral of phi over [-r, r]^dim.

    With ``spec.box_radius == "auto"`` the radius starts at
    ``initial_radius`` (default 1.0).  Nodes per axis first double at
    the fixed initial radius until the rule itself is converged to
    ``spec.rel_tol`` (``nodes_per_axis`` is the starting resolution);
    the radius then doubles, with node density held constant, until two
    successive estimates differ relatively by at most ``spec.rel_tol``,
    so the enlargement comparison measures tail truncation rather than
    resolution loss.  The radius that satisfied the test is reported in
    ``box_radius_used``.

    Parameters
    ----------
    phi : callable
        Vectorized integrand, (N, dim) -> (N,), defined on all of R^dim.
    dim : int
        Ambient dimension.
    spec : QuadratureSpec
        Must have ``engine == "box-gauss-legendre"``.
    initial_radius : float, optional
        Starting half-width for the automatic enlargement loop.
    """
    if spec.engine != ENGINE_BOX:
        raise InputError(f"integrate_box requires engine {ENGINE_BOX!r}, got {spec.engine!r}")
    if not isinstance(dim, int) or dim < 1:
        raise InputError(f"dim must be a positive integer, got {dim!r}")

    if spec.box_radius != "auto":
        value, effort = _box_estimate(phi, dim, spec.box_radius, spec.nodes_per_axis)
        return IntegralEstimate(value, None, ENGINE_BOX, effort, spec.box_radius)

    radius = float(initial_radius) if initial_radius is not None else 1.0
    if not radius > 0:
        raise InputError(f"initial_radius must be positive, got {initial_radius!r}")
    n = spec.nodes_per_axis
    prev, effort = _box_estimate(phi, dim, radius, n)
    for attempt in range(_MAX_REFINEMENTS):
        cur, used = _box_estimate(phi, dim, radius, 2 * n)
        effort += used
        n = 2 * n
        converged = abs(cur - prev) <= spec.rel_tol * max(abs(cur), 1e-300)
        prev = cur
        if converged:
            break
        if attempt == _MAX_REFINEMENTS - 1:
            raise EffortError(
                f"rule did not converge to rel_tol={spec.rel_tol} at radius {radius} "
                f"within {n} nodes per axis; the integrand may be too rough"
            )
    for _ in range(_MAX_ENLARGEMENTS):
        radius, n = 2.0 * radius, 2 * n
        if n**dim > MAX_TENSOR_POINTS:
            raise EffortError(
                f"box enlargement to radius {radius} needs {n}^{dim} nodes, over the cap "
                f"of {MAX_TENSOR_POINTS}; estimates did not stabilize (the integral may "
                "diverge or the integrand is too rough for the requested rel_tol)"
            )
        cur, used = _box_estimate(phi, dim, radius, n)
        effort += used
        if abs(cur - prev) <= spec.rel_tol * max(abs(cur), 1e-300):
            return IntegralEstimate(cur, None, ENGINE_BOX, effort, radius)
        prev = cur
    raise EffortError(
        "box enlargement did not stabilize; the integral may diverge "
        f"(last radius {radius}, last estimate {prev})"
    )


def integrate_gaussian_quadratic(
    f: Callable[[np.ndarray], np.ndarray],
    Q: np.ndarray,
    lam: float,
    spec: QuadratureSpec,
) -> IntegralEstimate:
    """Integral of f(x) * exp(-lam * x'Qx) over R^d for symmetric PD Q.

    Substituting x = S^{-1} u / sqrt(lam), where Q = S'S is a Cholesky
    factorization, reduces the integral to a standard Gaussian-weight
    tensor rule; the result is exact for polynomial f of degree
    <= 2 * nodes_per_axis - 1.

    Parameters
    ----------
    f : callable
        Vectorized integrand, (N, d) -> (N,).
    Q : ndarray
        Symmetric positive-definite d x d matrix.
    lam : float
        Positive weight scale.
    spec : QuadratureSpec
        Must have ``engine == "gaussian-quadratic"``.
    """
    if spec.engine != ENGINE_GAUSSIAN:
        raise InputError(
            f"integrate_gaussian_quadratic requires engine {ENGINE_GAUSSIAN!r}, got {spec.engine!r}"
        )
    if not lam > 0:
        raise InputError(f"lam must be positive, got {lam!r}")
    Q = np.asarray(Q, dtype=float)
    if Q.ndim != 2 or Q.shape[0] != Q.shape[1]:
        raise InputError(f"Q must be a square matrix, got shape {Q.shape}")
    if not np.allclose(Q, Q.T, rtol=1e-12, atol=1e-12):
        raise InputError("Q must be symmetric")
    dim = Q.shape[0]
    try:
        chol_lower = np.linalg.cholesky(Q)
    except np.linalg.LinAlgError:
        raise InputError("Q must be positive definite (Cholesky factorization failed)")
    det_factor = float(np.prod(np.diag(chol_lower)))  # = sqrt(det Q)
    # x = M u with M = S^{-1} / sqrt(lam), S = chol_lower'.
    transform = np.linalg.inv(chol_lower.T) / math.sqrt(lam)

    nodes, weights = gauss_hermite_rule(spec.nodes_per_axis)

    def phi(u_pts):
        return np.asarray(f(u_pts @ transform.T), dtype=float)

    raw, effort = _tensor_apply(phi, nodes, weights, dim)
    value = raw / (lam ** (dim / 2.0) * det_factor)
    return IntegralEstimate(value, None, ENGINE_GAUSSIAN, effort)


def monte_carlo_sublevel(
    f: Callable[[np.ndarray], np.ndarray],
    g: Callable[[np.ndarray], np.ndarray],
    dim: int,
    y: float,
    enclosing_radius: float,
    spec: QuadratureSpec,
) -> IntegralEstimate:
    """Hit-or-miss estimate of the integral of f over {x : g(x) <= y}.

    Draws ``spec.sample_count`` i.i.d. uniform points in the box
    [-R, R]^dim (the caller asserts the sublevel set lies inside) and
    averages f * indicator(g <= y), scaled by the box volume.  The
    reported std_error is the sample standard deviation of the summand
    scaled by (2R)^dim / sqrt(N).

    Coordinate j of sample i uses RNG counter i * dim + j, so the
    (value, std_error) pair depends only on the inputs and the seed,
    never on chunking or execution parallelism.
    """
    if spec.engine != ENGINE_MONTE_CARLO:
        raise InputError(
            f"monte_carlo_sublevel requires engine {ENGINE_MONTE_CARLO!r}, got {spec.engine!r}"
        )
    if not isinstance(dim, int) or dim < 1:
        raise InputError(f"dim must be a positive integer, got {dim!r}")
    radius = float(enclosing_radius)
    if not radius > 0:
        raise InputError(f"enclosing_radius must be positive, got {enclosing_radius!r}")
    y = float(y)
    if y < 0:
        raise InputError(f"y must be nonnegative, got {y!r}")

    n_samples = spec.sample_count
    sums = []
    sums_sq = []
    for lo in range(0, n_samples, _MC_CHUNK):
        m = min(_MC_CHUNK, n_samples - lo)
        u = rng.uniforms(spec.seed, lo * dim, m * dim).reshape(m, dim)
        pts = (2.0 * u - 1.0) * radius
        g_vals = np.asarray(g(pts), dtype=float)
        mask = g_vals <= y
        summand = np.zeros(m)
        if mask.any():
            summand[mask] = np.asarray(f(pts[mask]), dtype=float)
        if not np.all(np.isfinite(summand)):
            raise EvaluationError("integrand returned a non-finite value at a sample point")
        sums.append(float(np.sum(summand)))
        sums_sq.append(float(np.sum(summand * summand)))
    s1 = math.fsum(sums)
    s2 = math.fsum(sums_sq)
    box_volume = (2.0 * radius) ** dim
    mean = s1 / n_samples
    value = box_volume * mean
    if n_samples > 1:
        variance = max(0.0, (s2 - n_samples * mean * mean) / (n_samples - 1))
    else:
        variance = 0.0
    std_error = box_volume * math.sqrt(variance / n_samples)
    return IntegralEstimate(value, std_error, ENGINE_MONTE_CARLO, n_samples, radius)


def sphere_minimum(g, dim: int, samples: int = 8192) -> float:
    """Estimated minimum of g over the unit sphere by dense sampling.

    Axis and (for moderate dimensions) diagonal directions are always
    included, which picks up the exact minimizer for the symmetric
    polynomials this package benchmarks; random directions come from a
    fixed internal stream so the estimate is deterministic.
    """
    if not isinstance(dim, int) or dim < 1:
        raise InputError(f"dim must be a positive integer, got {dim!r}")
    directions = [np.eye(dim), -np.eye(dim)]
    if dim <= 12:
        corners = np.array(
            [[(1.0 if (i >> j) & 1 else -1.0) for j in range(dim)] for i in range(2**dim)]
        )
        directions.append(corners / math.sqrt(dim))
    if dim > 1:
        draws = rng.standard_normals(_SEED_SPHERE, 0, samples * dim).reshape(samples, dim)
        norms = np.linalg.norm(draws, axis=1)
        keep = norms > 1e-9
        directions.append(draws[keep] / norms[keep, np.newaxis])
    pts = np.vstack(directions)
    vals = np.asarray(g(pts), dtype=float)
    return float(np.min(vals))


def auto_enclosing_radius(g: MultiPoly, y: float, *, margin: float = 1.1) -> float:
    """Box half-width guaranteed to enclose {g <= y} for homogeneous g.

    If g is positively homogeneous of degree k with minimum m > 0 on
    the unit sphere, then g(x) <= y forces |x| <= (y/m)^(1/k); the
    returned radius is that bound times ``margin``, with m estimated by
    dense sphere sampling.
    """
    if not isinstance(g, MultiPoly):
        raise InputError("auto_enclosing_radius requires a polynomial g")
    degree = g.homogeneity_degree()
    if degree is None or degree < 1:
        raise InputError("auto_enclosing_radius requires g positively homogeneous of degree >= 1")
    y = float(y)
    if y < 0:
        raise InputError(f"y must be nonnegative, got {y!r}")
    m_hat = sphere_minimum(g, g.dim)
    if m_hat <= 0:
        raise UnboundedSublevelError(
            f"g is not positive away from the origin (sphere minimum {m_hat}); "
            "its sublevel sets are unbounded"
        )
    if y == 0.0:
        return 0.0
    return (y / m_hat) ** (1.0 / degree) * margin
