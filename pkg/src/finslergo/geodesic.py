"""Geodesic-vector criterion, geodesic-graph solver, and sampling checks.

A vector y + xi (y in m nonzero, xi in the isotropy algebra) generates a
homogeneous geodesic exactly when

    sum_i C_i(y) * alpha_i(y, [y + xi, U]_m) = 0   for every U in m.

Expanding xi over the isotropy basis turns this into the linear system
A(y) xi = b(y) assembled by :func:`assemble_system`; the solver returns the
minimal-norm least-squares solution together with rank and uniqueness
diagnostics.  Sampling utilities verify the geodesic-orbit property and the
equivariance of the solved map over random draws.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .finsler_metric import FinslerMetric
from .lie_algebra import Vector, adjoint_group_element, matrix_exponential

RANK_RCOND = 1e-10
GEODESIC_VECTOR_TOL = 1e-9


def float_repr(x) -> str:
    """Shortest round-trip decimal form, used for deterministic CSV output."""
    return repr(float(x))


def _criterion_vector(metric: FinslerMetric, ym: Vector, w: Vector) -> Vector:
    """Component a is sum_i C_i(y) alpha_i(y, [w, U_a]_m) over the m-basis."""
    space = metric.space
    c = space.alg.structure
    brackets = np.einsum(
        "i,iak->ak", w, c[:, space.m_indices][:, :, space.m_indices])
    weighted = space.weighted_alpha_gram(metric.c_coefficients(ym)) @ ym
    return brackets @ weighted


@dataclass(frozen=True)
class GeodesicGraphResult:
    """Solved isotropy correction for one base vector."""

    y: Vector
    xi: Vector
    residual_norm: float
    rank: int
    unique: bool
    y_m: Vector
    xi_h: Vector

    def to_json_dict(self) -> dict:
        return {
            "y": [float(v) for v in self.y_m],
            "xi": [float(v) for v in self.xi_h],
            "residual": float(self.residual_norm),
            "rank": int(self.rank),
            "unique": bool(self.unique),
        }


def geodesic_residual(metric: FinslerMetric, y, xi) -> Vector:
    """Left side of the geodesic-vector criterion; zero iff y + xi qualifies."""
    space = metric.space
    ym = space.coerce_m(y)
    xih = space.coerce_h(xi)
    w = space.embed_m(ym) + space.embed_h(xih)
    return _criterion_vector(metric, ym, w)


def assemble_system(metric: FinslerMetric, y):
    """Matrix and right-hand side of the criterion, linear in xi.

    Row a, column c holds sum_i C_i(y) alpha_i(y, [e_c, U_a]_m) over the
    isotropy basis e_c; b_a = -sum_i C_i(y) alpha_i(y, [y, U_a]_m).  By
    construction ``geodesic_residual(metric, y, xi) == A @ xi - b``.
    """
    space = metric.space
    ym = space.coerce_m(y)
    c = space.alg.structure
    weighted = space.weighted_alpha_gram(metric.c_coefficients(ym)) @ ym
    ch = c[space.h_indices][:, space.m_indices][:, :, space.m_indices]
    a_mat = np.einsum("cak,k->ac", ch, weighted)
    y_full = space.embed_m(ym)
    brackets_y = np.einsum(
        "i,iak->ak", y_full, c[:, space.m_indices][:, :, space.m_indices])
    b_vec = -(brackets_y @ weighted)
    return a_mat, b_vec


def solve_geodesic_graph(metric: FinslerMetric, y) -> GeodesicGraphResult:
    """Minimal-norm least-squares solution of the geodesic-graph system.

    The rank is computed from the singular values at the relative threshold
    1e-10; ``unique`` means the rank equals the isotropy dimension.  A
    residual above tolerance signals that no isotropy correction makes y a
    geodesic vector; it is reported, not raised.
    """
    space = metric.space
    ym = space.coerce_m(y)
    a_mat, b_vec = assemble_system(metric, ym)
    if space.dim_h == 0:
        xih = np.zeros(0)
        rank = 0
    else:
        xih, _, rank, _ = np.linalg.lstsq(a_mat, b_vec, rcond=RANK_RCOND)
    residual = geodesic_residual(metric, ym, xih)
    return GeodesicGraphResult(
        y=space.embed_m(ym),
        xi=space.embed_h(xih),
        residual_norm=float(np.abs(residual).max(initial=0.0)),
        rank=int(rank),
        unique=bool(rank == space.dim_h),
        y_m=ym,
        xi_h=xih,
    )


@dataclass(frozen=True)
class GeodesicVectorCheck:
    is_geodesic: bool
    residual_max: float
    scale: float
    tol: float


def is_geodesic_vector(metric: FinslerMetric, w) -> GeodesicVectorCheck:
    """Test the criterion for a full algebra vector w with nonzero m-part.

    The tolerance is relative: the criterion is quadratic in y, so the
    residual is compared against F(y_m)^2 times the largest structure
    constant magnitude.
    """
    space = metric.space
    w = space.alg.vector(w)
    ym = w[space.m_indices]
    if not np.any(ym):
        raise ValueError("vector has zero m-part; the criterion degenerates")
    residual = _criterion_vector(metric, ym, w)
    residual_max = float(np.abs(residual).max(initial=0.0))
    scale = (metric.f_value(ym) ** 2
             * float(np.abs(space.alg.structure).max(initial=0.0)))
    return GeodesicVectorCheck(
        is_geodesic=bool(residual_max <= GEODESIC_VECTOR_TOL * scale),
        residual_max=residual_max,
        scale=scale,
        tol=GEODESIC_VECTOR_TOL,
    )


@dataclass(frozen=True)
class EquivarianceCheck:
    deviation: float
    unique_source: bool
    unique_transported: bool


def check_equivariance(metric: FinslerMetric, y, h, t: float) -> EquivarianceCheck:
    """Compare solving after transport with transporting the solution.

    Transports y by exp(t*ad(h)) for an isotropy vector h, solves at both
    points, and returns the norm of xi(transported y) - transported xi(y).
    Rank deficiency on either side is reported through the unique flags.
    """
    space = metric.space
    ym = space.coerce_m(y)
    h_full = space.embed_h(space.coerce_h(h))
    ad_exp = adjoint_group_element(space.alg, h_full, t)

    y_moved = ad_exp @ space.embed_m(ym)
    stray = np.abs(y_moved[space.h_indices]).max(initial=0.0)
    if stray > 1e-8 * max(1.0, np.abs(y_moved).max()):
        raise ValueError(
            "transport does not preserve m; h does not act invariantly")
    res_src = solve_geodesic_graph(metric, ym)
    res_dst = solve_geodesic_graph(metric, space.project_m(y_moved))
    xi_moved = space.project_h(ad_exp @ res_src.xi)
    return EquivarianceCheck(
        deviation=float(np.linalg.norm(res_dst.xi - xi_moved)),
        unique_source=res_src.unique,
        unique_transported=res_dst.unique,
    )


@dataclass(frozen=True)
class ScanReport:
    """Residuals of the solved graph over random unit-sphere samples."""

    max_residual: float
    worst_y: Vector
    samples: np.ndarray
    residuals: np.ndarray
    labels: tuple
    seed: int

    @property
    def n_samples(self) -> int:
        return len(self.residuals)

    def to_csv_lines(self):
        yield ",".join([*self.labels, "residual"])
        for row, res in zip(self.samples, self.residuals):
            yield ",".join([*(float_repr(v) for v in row), float_repr(res)])

    def write_csv(self, stream) -> None:
        for line in self.to_csv_lines():
            stream.write(line + "\n")

    def to_json_dict(self) -> dict:
        return {
            "max_residual": float(self.max_residual),
            "worst_y": [float(v) for v in self.worst_y],
            "n_samples": self.n_samples,
            "seed": self.seed,
        }


def go_property_scan(metric: FinslerMetric, n_samples: int,
                     seed: int) -> ScanReport:
    """Solve at random unit-norm base vectors and record the worst residual.

    Samples are uniform on the unit sphere of m in the unweighted block
    norm (normalized Gaussian draws); the induced weights are scale
    invariant, so the sphere is a complete test set.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be at least 1")
    space = metric.space
    rng = np.random.default_rng(seed)
    gram = space.alpha_gram()
    samples = np.empty((n_samples, space.dim_m))
    residuals = np.empty(n_samples)
    worst = -1.0
    worst_y = None
    for i in range(n_samples):
        v = rng.standard_normal(space.dim_m)
        v /= np.sqrt(v @ gram @ v)
        samples[i] = v
        res = solve_geodesic_graph(metric, v)
        residuals[i] = res.residual_norm
        if res.residual_norm > worst:
            worst = res.residual_norm
            worst_y = v
    return ScanReport(
        max_residual=float(worst),
        worst_y=worst_y,
        samples=samples,
        residuals=residuals,
        labels=tuple(space.m_labels()),
        seed=int(seed),
    )


@dataclass(frozen=True)
class MatrixRealization:
    """Faithful matrix model of the algebra plus a base point it acts on."""

    matrices: np.ndarray
    base_point: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrices, dtype=float)
        p = np.asarray(self.base_point, dtype=float)
        if m.ndim != 3 or m.shape[1] != m.shape[2]:
            raise ValueError("matrices must be a (dim, N, N) stack")
        if p.shape != (m.shape[1],):
            raise ValueError("base point length must match the matrix size")
        object.__setattr__(self, "matrices", m)
        object.__setattr__(self, "base_point", p)

    @property
    def dim(self) -> int:
        return self.matrices.shape[0]

    def generator(self, w) -> np.ndarray:
        w = np.asarray(w, dtype=float)
        if w.shape != (self.dim,):
            raise ValueError(
                f"expected {self.dim} coordinates, got shape {w.shape}")
        return np.einsum("i,iab->ab", w, self.matrices)


def orbit_curve(realization: MatrixRealization, w, t_values) -> np.ndarray:
    """Points exp(t * rho(w)) applied to the base point, one row per t."""
    gen = realization.generator(w)
    t_values = np.atleast_1d(np.asarray(t_values, dtype=float))
    return np.stack([matrix_exponential(gen, t) @ realization.base_point
                     for t in t_values])
