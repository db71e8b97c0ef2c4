"""Built-in model: the 7-sphere as Sp(2)U(1)/Sp(1)diag(U(1)).

The 11-dimensional algebra sp(2) + u(1) is constructed from an explicit
4 x 4 complex (quaternionic 2 x 2) matrix model: structure constants are
derived from commutators at build time rather than typed by hand, then
cross-checked against the prescribed plane-rotation patterns of the
isotropy operators.  Basis order is X1..X4, Z1, Z2, Z3 | H1, H2, H3, W
with invariant blocks m1 = span(X1..X4), m2 = span(Z1), m3 = span(Z2, Z3)
and identity base products.

The closed-form geodesic graph for positive block weights (c1, c2, c3) is
shipped as the oracle against which the generic solver is verified.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .finsler_metric import FinslerMetric, LFunction, riemannian_metric
from .geodesic import (MatrixRealization, assemble_system,
                       check_equivariance, geodesic_residual,
                       solve_geodesic_graph)
from .homogeneous_space import MetricFamily, ReductiveSpace
from .lie_algebra import LieAlgebra, Vector

M_LABELS = ("X1", "X2", "X3", "X4", "Z1", "Z2", "Z3")
H_LABELS = ("H1", "H2", "H3", "W")
LABELS = M_LABELS + H_LABELS

_H_RANGE = range(7, 11)


def _complex_basis():
    """The ten sp(2) basis elements as 4 x 4 complex matrices.

    Rows/columns 0-1 carry the isotropy sp(1) block, rows/columns 2-3 the
    Z block; the off-diagonal blocks carry X1..X4.  Every matrix is
    skew-Hermitian and quaternionic (M J = J conj(M)), which pins all signs,
    including the (2, 3) entry of the Z block.
    """
    i = 1j
    mats = {
        "H1": {(0, 0): i, (1, 1): -i},
        "H2": {(0, 1): -1, (1, 0): 1},
        "H3": {(0, 1): -i, (1, 0): -i},
        "X1": {(0, 2): 1, (1, 3): 1, (2, 0): -1, (3, 1): -1},
        "X2": {(0, 2): i, (1, 3): -i, (2, 0): i, (3, 1): -i},
        "X3": {(0, 3): -1, (1, 2): 1, (2, 1): -1, (3, 0): 1},
        "X4": {(0, 3): -i, (1, 2): -i, (2, 1): -i, (3, 0): -i},
        "Z1": {(2, 2): i, (3, 3): -i},
        "Z2": {(2, 3): -1, (3, 2): 1},
        "Z3": {(2, 3): -i, (3, 2): -i},
    }
    out = {}
    for lab, entries in mats.items():
        m = np.zeros((4, 4), dtype=complex)
        for (a, b), v in entries.items():
            m[a, b] = v
        out[lab] = m
    return out


def _plane_op(src: int, dst: int) -> np.ndarray:
    """Rotation generator on m sending e_src -> e_dst and e_dst -> -e_src."""
    op = np.zeros((7, 7))
    op[dst, src] = 1.0
    op[src, dst] = -1.0
    return op


def isotropy_operator_patterns() -> dict:
    """Prescribed action of each isotropy generator on m, as 7 x 7 matrices."""
    a12, a34 = _plane_op(0, 1), _plane_op(2, 3)
    a13, a24 = _plane_op(0, 2), _plane_op(1, 3)
    a14, a23 = _plane_op(0, 3), _plane_op(1, 2)
    b23 = _plane_op(5, 6)
    return {
        "H1": a12 + a34,
        "H2": a13 - a24,
        "H3": a14 + a23,
        "W": 2.0 * b23 - a12 + a34,
    }


def _realify(m: np.ndarray) -> np.ndarray:
    """Complex N x N matrix as a real 2N x 2N matrix on (Re v, Im v)."""
    return np.block([[m.real, -m.imag], [m.imag, m.real]])


@dataclass(frozen=True)
class S7Space:
    """The built-in reductive space together with its sphere realization."""

    space: ReductiveSpace
    realization: MatrixRealization

    @property
    def algebra(self) -> LieAlgebra:
        return self.space.alg

    def to_json_dict(self, family=None) -> dict:
        return self.space.to_json_dict(family)


@lru_cache(maxsize=1)
def build_s7_space() -> S7Space:
    """Construct the catalog space; every consistency check aborts on failure.

    The returned object is cached and must be treated as immutable.
    """
    mats = _complex_basis()
    conj_swap = np.zeros((4, 4), dtype=complex)
    conj_swap[0, 1] = conj_swap[2, 3] = -1.0
    conj_swap[1, 0] = conj_swap[3, 2] = 1.0
    for lab in LABELS[:10]:
        m = mats[lab]
        if not np.allclose(m.conj().T, -m, atol=1e-14):
            raise RuntimeError(f"matrix model of {lab} is not skew-Hermitian")
        if not np.allclose(m @ conj_swap, conj_swap @ m.conj(), atol=1e-14):
            raise RuntimeError(f"matrix model of {lab} is not quaternionic")

    def flat(m):
        return np.concatenate([m.real.ravel(), m.imag.ravel()])

    sp2 = [mats[lab] for lab in LABELS[:10]]
    span = np.stack([flat(m) for m in sp2], axis=1)

    brackets = {}
    for i in range(10):
        for j in range(i + 1, 10):
            comm = sp2[i] @ sp2[j] - sp2[j] @ sp2[i]
            coeffs, _, _, _ = np.linalg.lstsq(span, flat(comm), rcond=None)
            if np.linalg.norm(span @ coeffs - flat(comm)) > 1e-10:
                raise RuntimeError(
                    f"commutator [{LABELS[i]}, {LABELS[j]}] leaves the span")
            snapped = np.round(coeffs)
            if np.abs(coeffs - snapped).max() > 1e-9:
                raise RuntimeError(
                    f"non-integer structure constants for "
                    f"[{LABELS[i]}, {LABELS[j]}]: {coeffs}")
            entry = {k: float(v) for k, v in enumerate(snapped) if v != 0.0}
            if entry:
                brackets[(i, j)] = entry

    # W acts on m exactly as the prescribed operator and commutes with h
    w_op = isotropy_operator_patterns()["W"]
    for j in range(7):
        entry = {k: -float(w_op[k, j]) for k in range(7) if w_op[k, j] != 0.0}
        if entry:
            brackets[(j, 10)] = entry  # [e_j, W] = -[W, e_j]

    alg = LieAlgebra(LABELS, brackets)

    jac = alg.check_jacobi(tol=1e-12)
    if not jac.passed:
        raise RuntimeError(f"Jacobi identity violated: {jac.max_violation}")

    m_idx = np.arange(7)
    patterns = isotropy_operator_patterns()
    for lab, pattern in patterns.items():
        ad = alg.ad_operator(alg.basis_vector(lab))
        if not np.array_equal(ad[np.ix_(m_idx, m_idx)], pattern):
            raise RuntimeError(f"restricted adjoint of {lab} is off-pattern")
        if np.abs(ad[7:, :7]).max(initial=0.0) != 0.0:
            raise RuntimeError(f"{lab} does not preserve m")
    ad_w = alg.ad_operator(alg.basis_vector("W"))
    ad_z1 = alg.ad_operator(alg.basis_vector("Z1"))
    if not np.array_equal(ad_w[np.ix_(m_idx, m_idx)],
                          ad_z1[np.ix_(m_idx, m_idx)]):
        raise RuntimeError("W does not act on m like the Z1 adjoint")

    space = ReductiveSpace(
        alg,
        h=list(H_LABELS),
        blocks=[["X1", "X2", "X3", "X4"], ["Z1"], ["Z2", "Z3"]],
    )
    report = space.validate()
    if not report.passed:
        bad = [c.name for c in report.checks if not c.passed]
        raise RuntimeError(f"reductive-space checks failed: {bad}")

    # 8 x 8 real realization; the extra u(1) direction realizes W as the
    # Z1 matrix shifted by -i * identity so that it annihilates the base point
    w_mat = mats["Z1"] - 1j * np.eye(4)
    reals = np.stack([_realify(mats[lab]) for lab in LABELS[:10]]
                     + [_realify(w_mat)])
    base_point = np.zeros(8)
    base_point[2] = 1.0
    for idx in _H_RANGE:
        if np.abs(reals[idx] @ base_point).max() > 1e-14:
            raise RuntimeError(
                f"isotropy generator {LABELS[idx]} moves the base point")
    for i in range(11):
        for j in range(i + 1, 11):
            comm = reals[i] @ reals[j] - reals[j] @ reals[i]
            expect = np.einsum("k,kab->ab", alg.structure[i, j], reals)
            if np.abs(comm - expect).max() > 1e-12:
                raise RuntimeError(
                    f"realization breaks brackets at ({LABELS[i]}, {LABELS[j]})")

    return S7Space(space=space,
                   realization=MatrixRealization(reals, base_point))


def ad_pattern_deviation(s7: S7Space | None = None) -> float:
    """Worst entry deviation of the restricted adjoints from their patterns."""
    s7 = s7 or build_s7_space()
    alg = s7.algebra
    m_idx = np.arange(7)
    worst = 0.0
    for lab, pattern in isotropy_operator_patterns().items():
        ad = alg.ad_operator(alg.basis_vector(lab))
        worst = max(worst, float(np.abs(ad[np.ix_(m_idx, m_idx)] - pattern).max()))
        worst = max(worst, float(np.abs(ad[7:, :7]).max(initial=0.0)))
    return worst


@dataclass(frozen=True)
class KCoefficients:
    """The three weight ratios entering the closed-form geodesic graph."""

    k1: float
    k2: float
    k3: float


def k_coefficients(c) -> KCoefficients:
    """Ratios k1 = c2/c3 - 2 c2/c1, k2 = 1 - 2 c3/c1, k3 = c2/c3 - 1."""
    c = _positive_triple(c)
    c1, c2, c3 = c
    return KCoefficients(
        k1=c2 / c3 - 2.0 * c2 / c1,
        k2=1.0 - 2.0 * c3 / c1,
        k3=c2 / c3 - 1.0,
    )


def _positive_triple(c) -> Vector:
    c = np.asarray(c, dtype=float)
    if c.shape != (3,):
        raise ValueError("expected three block weights")
    if not np.all(np.isfinite(c)) or np.any(c <= 0.0):
        raise ValueError("block weights must be positive")
    return c


def closed_form_xi(y, c) -> Vector:
    """Closed-form isotropy correction for the catalog space.

    Rational in the X-part and linear in the Z-part; at x = 0, where the
    generic formulas are 0/0, the minimal-norm convention (0, 0, 0, k3*z1)
    applies.  Returns the full 11-vector supported on the isotropy basis.
    """
    space = build_s7_space().space
    c = _positive_triple(c)
    ym = space.coerce_m(y, allow_zero=True)
    x1, x2, x3, x4, z1, z2, z3 = ym
    k = k_coefficients(c)
    nx = x1 * x1 + x2 * x2 + x3 * x3 + x4 * x4
    if nx == 0.0:
        return space.embed_h([0.0, 0.0, 0.0, k.k3 * z1])
    xi1 = (k.k1 * z1 * (x1 * x1 + x2 * x2 - x3 * x3 - x4 * x4)
           + 2.0 * k.k2 * (z2 * (x2 * x3 - x1 * x4)
                           + z3 * (x1 * x3 + x2 * x4))) / nx
    xi2 = (2.0 * k.k1 * z1 * (x2 * x3 + x1 * x4)
           + k.k2 * (z2 * (x1 * x1 - x2 * x2 + x3 * x3 - x4 * x4)
                     + 2.0 * z3 * (x3 * x4 - x1 * x2))) / nx
    xi3 = (2.0 * k.k1 * z1 * (x2 * x4 - x1 * x3)
           + k.k2 * (2.0 * z2 * (x1 * x2 + x3 * x4)
                     + z3 * (x1 * x1 - x2 * x2 - x3 * x3 + x4 * x4))) / nx
    return space.embed_h([xi1, xi2, xi3, k.k3 * z1])


def extended_matrix(y, c) -> np.ndarray:
    """The displayed 6 x 5 augmented system for weights c at base vector y.

    Rows correspond to the X1..X4, Z2, Z3 equations (the Z1 equation is
    identically zero); the X rows are normalized by c1 and the Z rows by c3.
    Columns are the four isotropy components followed by the right-hand side.
    """
    space = build_s7_space().space
    c = _positive_triple(c)
    ym = space.coerce_m(y, allow_zero=True)
    x1, x2, x3, x4, z1, z2, z3 = ym
    r21, r31, r23 = c[1] / c[0], c[2] / c[0], c[1] / c[2]
    p = 1.0 - 2.0 * r21
    q = 1.0 - 2.0 * r31
    return np.array([
        [x2, x3, x4, -x2, p * z1 * x2 + q * (z2 * x3 + z3 * x4)],
        [-x1, -x4, x3, x1, -p * z1 * x1 + q * (z2 * x4 - z3 * x3)],
        [x4, -x1, -x2, x4, -p * z1 * x4 + q * (-z2 * x1 + z3 * x2)],
        [-x3, x2, -x1, -x3, p * z1 * x3 - q * (z2 * x2 + z3 * x1)],
        [0.0, 0.0, 0.0, 2.0 * z3, 2.0 * z1 * z3 * (r23 - 1.0)],
        [0.0, 0.0, 0.0, -2.0 * z2, 2.0 * z1 * z2 * (1.0 - r23)],
    ])


def extended_matrix_deviation(y, c) -> float:
    """Max abs difference between the display and the row-scaled assembly.

    Also includes the magnitude of the assembled Z1 row, which the display
    omits because it vanishes identically.
    """
    s7 = build_s7_space()
    c = _positive_triple(c)
    metric = riemannian_metric(s7.space, c)
    ym = s7.space.coerce_m(y, allow_zero=True)
    a_mat, b_vec = assemble_system(metric, ym)
    full = np.column_stack([a_mat, b_vec])
    dev = float(np.abs(full[4]).max())
    scale = np.array([c[0]] * 4 + [c[2]] * 2)
    scaled = full[[0, 1, 2, 3, 5, 6]] / scale[:, None]
    return max(dev, float(np.abs(scaled - extended_matrix(ym, c)).max()))


def extended_matrix_sweep(n_samples: int, seed: int, tol: float) -> dict:
    """Worst display-vs-assembly deviation over random base vectors and weights."""
    rng = np.random.default_rng(seed)
    worst, worst_y, worst_c = -1.0, None, None
    for _ in range(n_samples):
        y = rng.standard_normal(7)
        c = rng.uniform(0.25, 4.0, size=3)
        dev = extended_matrix_deviation(y, c)
        if dev > worst:
            worst, worst_y, worst_c = dev, y, c
    return {
        "passed": worst <= tol,
        "worst": worst,
        "tol": tol,
        "witness_y": [float(v) for v in worst_y],
        "witness_c": [float(v) for v in worst_c],
    }


def check_equivariance_sweep(n_samples: int, seed: int, tol: float) -> dict:
    """Worst transport deviation of the solved graph over random triples.

    Uses a genuinely two-metric combiner so the induced weights vary with
    the base vector.
    """
    s7 = build_s7_space()
    family = MetricFamily(s7.space, [[1.0, 1.0, 1.0], [2.0, 1.0, 4.0]])
    metric = FinslerMetric(family, LFunction.squared_sum([1.0, 3.0]))
    rng = np.random.default_rng(seed)
    gram = s7.space.alpha_gram()
    worst = -1.0
    witness = None
    for _ in range(n_samples):
        v = rng.standard_normal(7)
        ym = v / np.sqrt(v @ gram @ v)
        h = rng.standard_normal(4)
        t = float(rng.uniform(-1.0, 1.0))
        chk = check_equivariance(metric, ym, h, t)
        if chk.deviation > worst:
            worst = chk.deviation
            witness = (ym, h, t)
    return {
        "passed": worst <= tol,
        "worst": worst,
        "tol": tol,
        "witness_y": [float(v) for v in witness[0]],
        "witness_h": [float(v) for v in witness[1]],
        "witness_t": witness[2],
    }


@dataclass(frozen=True)
class ClosedFormReport:
    """Oracle equivalence of the closed form against the numeric solver."""

    n_samples: int
    tol: float
    max_residual: float
    worst_residual_y: Vector
    worst_residual_c: Vector
    max_mismatch: float
    worst_mismatch_y: Vector
    worst_mismatch_c: Vector
    n_unique: int

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tol and self.max_mismatch <= self.tol

    def to_json_dict(self) -> dict:
        return {
            "n_samples": self.n_samples,
            "tol": self.tol,
            "max_residual": self.max_residual,
            "worst_residual_y": [float(v) for v in self.worst_residual_y],
            "worst_residual_c": [float(v) for v in self.worst_residual_c],
            "max_mismatch": self.max_mismatch,
            "worst_mismatch_y": [float(v) for v in self.worst_mismatch_y],
            "worst_mismatch_c": [float(v) for v in self.worst_mismatch_c],
            "n_unique": self.n_unique,
            "passed": self.passed,
        }


def verify_closed_form(n_samples: int = 1000, seed: int = 0,
                       tol: float = 1e-8) -> ClosedFormReport:
    """Check the closed form against the criterion and the numeric solver.

    Draws unit-norm base vectors and positive weight triples; for each pair
    the closed form must satisfy the criterion within tol, and must match
    the minimal-norm solver wherever the solver reports a unique solution.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be at least 1")
    s7 = build_s7_space()
    space = s7.space
    rng = np.random.default_rng(seed)
    gram = space.alpha_gram()

    max_res, worst_res_y, worst_res_c = -1.0, None, None
    max_mis, worst_mis_y, worst_mis_c = -1.0, None, None
    n_unique = 0
    for _ in range(n_samples):
        v = rng.standard_normal(7)
        ym = v / np.sqrt(v @ gram @ v)
        c = rng.uniform(0.25, 4.0, size=3)
        metric = riemannian_metric(space, c)
        xi = closed_form_xi(ym, c)
        res = float(np.abs(geodesic_residual(metric, ym, xi)).max())
        if res > max_res:
            max_res, worst_res_y, worst_res_c = res, ym, c
        sol = solve_geodesic_graph(metric, ym)
        if sol.unique:
            n_unique += 1
            mis = float(np.abs(sol.xi - xi).max())
            if mis > max_mis:
                max_mis, worst_mis_y, worst_mis_c = mis, ym, c

    return ClosedFormReport(
        n_samples=n_samples,
        tol=tol,
        max_residual=max_res,
        worst_residual_y=worst_res_y,
        worst_residual_c=worst_res_c,
        max_mismatch=max(max_mis, 0.0),
        worst_mismatch_y=worst_mis_y if worst_mis_y is not None else np.zeros(7),
        worst_mismatch_c=worst_mis_c if worst_mis_c is not None else np.ones(3),
        n_unique=n_unique,
    )
