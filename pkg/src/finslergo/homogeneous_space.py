"""Reductive decompositions g = h + m with invariant block scalar products.

A :class:`ReductiveSpace` splits a Lie algebra into an isotropy part h and a
complement m, partitions m into declared invariant blocks m_1, ..., m_s, and
carries one symmetric positive-definite Gram matrix per block.  A
:class:`MetricFamily` is a k x s matrix of positive coefficients; row j
defines the scalar product g_j = sum_i a[j, i] * alpha_i on m.

Blocks are user-declared, not computed.  The m-coordinate order is the
concatenation of the blocks, so every family Gram matrix is block diagonal.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .lie_algebra import LieAlgebra, Vector

STRUCTURAL_TOL = 1e-12
INVARIANCE_TOL = 1e-10


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    worst: float
    tol: float


@dataclass(frozen=True)
class SpaceValidationReport:
    checks: tuple

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


class ReductiveSpace:
    """Reductive split of an algebra with an invariant block decomposition."""

    def __init__(self, alg: LieAlgebra, h, blocks, alpha=None):
        """
        Args:
            alg: the underlying Lie algebra.
            h: basis labels or indices spanning the isotropy subalgebra.
            blocks: list of lists of labels/indices; their concatenation is
                the complement m, in m-coordinate order.
            alpha: one symmetric positive-definite Gram matrix per block, in
                block coordinates.  Defaults to identity blocks.
        """
        self.alg = alg
        self.h_indices = np.array([alg.index(k) for k in h], dtype=int)
        self.blocks = [np.array([alg.index(k) for k in blk], dtype=int)
                       for blk in blocks]
        self.m_indices = (np.concatenate(self.blocks)
                          if self.blocks else np.array([], dtype=int))

        used = list(self.h_indices) + list(self.m_indices)
        if sorted(used) != list(range(alg.dim)):
            raise ValueError("h and the blocks must partition the basis")

        if alpha is None:
            alpha = [np.eye(len(blk)) for blk in self.blocks]
        alpha = [np.asarray(a, dtype=float) for a in alpha]
        if len(alpha) != len(self.blocks):
            raise ValueError("need exactly one Gram matrix per block")
        for a, blk in zip(alpha, self.blocks):
            if a.shape != (len(blk), len(blk)):
                raise ValueError(
                    f"Gram matrix shape {a.shape} does not match block "
                    f"size {len(blk)}")
            if not np.all(np.isfinite(a)):
                raise ValueError("Gram matrices must be finite")
        self.alpha = alpha

        # positions of each block inside the m-coordinate layout
        self._block_slices = []
        off = 0
        for blk in self.blocks:
            self._block_slices.append(slice(off, off + len(blk)))
            off += len(blk)

    # -- shape helpers -------------------------------------------------------

    @property
    def dim(self) -> int:
        return self.alg.dim

    @property
    def dim_m(self) -> int:
        return len(self.m_indices)

    @property
    def dim_h(self) -> int:
        return len(self.h_indices)

    @property
    def n_blocks(self) -> int:
        return len(self.blocks)

    def m_labels(self):
        return [self.alg.basis_labels[i] for i in self.m_indices]

    def h_labels(self):
        return [self.alg.basis_labels[i] for i in self.h_indices]

    # -- projections and coordinates -----------------------------------------

    def project_m(self, v) -> Vector:
        """Zero out the h-coordinates; idempotent and linear."""
        v = self.alg.vector(v).copy()
        v[self.h_indices] = 0.0
        return v

    def project_h(self, v) -> Vector:
        """Zero out the m-coordinates; complementary to project_m."""
        v = self.alg.vector(v).copy()
        v[self.m_indices] = 0.0
        return v

    def m_coords(self, v) -> Vector:
        return self.alg.vector(v)[self.m_indices]

    def h_coords(self, v) -> Vector:
        return self.alg.vector(v)[self.h_indices]

    def embed_m(self, vm) -> Vector:
        vm = np.asarray(vm, dtype=float)
        if vm.shape != (self.dim_m,):
            raise ValueError(f"expected {self.dim_m} m-coordinates")
        v = np.zeros(self.dim)
        v[self.m_indices] = vm
        return v

    def embed_h(self, vh) -> Vector:
        vh = np.asarray(vh, dtype=float)
        if vh.shape != (self.dim_h,):
            raise ValueError(f"expected {self.dim_h} h-coordinates")
        v = np.zeros(self.dim)
        v[self.h_indices] = vh
        return v

    def coerce_m(self, v, allow_zero: bool = False) -> Vector:
        """m-coordinates of a vector given in full or m-coordinates.

        Full-length input must have exactly zero h-coordinates; membership
        in m is the caller's responsibility, enforced, not assumed.
        """
        v = np.asarray(v, dtype=float)
        if v.shape == (self.dim,) and self.dim != self.dim_m:
            if np.any(v[self.h_indices] != 0.0):
                raise ValueError(
                    "vector has isotropy components; project it onto m first")
            vm = v[self.m_indices]
        elif v.shape == (self.dim_m,):
            vm = v.copy()
        else:
            raise ValueError(
                f"expected {self.dim_m} m-coordinates or {self.dim} full "
                f"coordinates, got shape {v.shape}")
        if not allow_zero and not np.any(vm):
            raise ValueError("the zero vector is not allowed here")
        return vm

    def coerce_h(self, v) -> Vector:
        """h-coordinates of a vector given in full or h-coordinates."""
        v = np.asarray(v, dtype=float)
        if v.shape == (self.dim,) and self.dim != self.dim_h:
            if np.any(v[self.m_indices] != 0.0):
                raise ValueError(
                    "vector has complement components; project it onto h first")
            return v[self.h_indices]
        if v.shape == (self.dim_h,):
            return v.copy()
        raise ValueError(
            f"expected {self.dim_h} h-coordinates or {self.dim} full "
            f"coordinates, got shape {v.shape}")

    # -- block scalar products -------------------------------------------------

    def alpha_gram(self) -> np.ndarray:
        """Block-diagonal Gram of the base products (all weights one)."""
        return self.weighted_alpha_gram(np.ones(self.n_blocks))

    def weighted_alpha_gram(self, weights) -> np.ndarray:
        """Block-diagonal Gram sum_i weights[i] * alpha_i in m-coordinates."""
        weights = np.asarray(weights, dtype=float)
        if weights.shape != (self.n_blocks,):
            raise ValueError(f"expected {self.n_blocks} block weights")
        g = np.zeros((self.dim_m, self.dim_m))
        for w, a, s in zip(weights, self.alpha, self._block_slices):
            g[s, s] = w * a
        return g

    def alpha_norm(self, v) -> float:
        """Norm of the m-part of v in the unweighted block products."""
        vm = self.m_coords(self.alg.vector(v)) if len(v) == self.dim \
            else np.asarray(v, dtype=float)
        return float(np.sqrt(vm @ self.alpha_gram() @ vm))

    def block_quadratics(self, vm) -> Vector:
        """Per-block values alpha_i(v, v) of an m-coordinate vector."""
        vm = np.asarray(vm, dtype=float)
        if vm.shape != (self.dim_m,):
            raise ValueError(f"expected {self.dim_m} m-coordinates")
        return np.array([float(vm[s] @ a @ vm[s])
                         for a, s in zip(self.alpha, self._block_slices)])

    # -- validation -------------------------------------------------------------

    def validate(self) -> SpaceValidationReport:
        """Run all numeric invariants and report per-check worst violations.

        Tolerances are fixed: 1e-12 for the structural bracket conditions,
        1e-10 for the metric-invariance condition.
        """
        tol_structural = STRUCTURAL_TOL
        tol_invariance = INVARIANCE_TOL
        checks = []

        # [h, h] stays in h
        worst = 0.0
        for i in self.h_indices:
            for j in self.h_indices:
                br = self.alg.structure[i, j]
                if self.dim_m:
                    worst = max(worst, float(np.abs(br[self.m_indices]).max()))
        checks.append(CheckResult("subalgebra", worst <= tol_structural,
                                  worst, tol_structural))

        # [h, m] stays in m
        worst = 0.0
        for i in self.h_indices:
            for j in self.m_indices:
                br = self.alg.structure[i, j]
                if self.dim_h:
                    worst = max(worst, float(np.abs(br[self.h_indices]).max()))
        checks.append(CheckResult("reductivity", worst <= tol_structural,
                                  worst, tol_structural))

        worst = max((float(np.abs(a - a.T).max()) for a in self.alpha),
                    default=0.0)
        checks.append(CheckResult("alpha_symmetry", worst <= tol_structural,
                                  worst, tol_structural))

        min_eig = min((float(np.linalg.eigvalsh(a).min()) for a in self.alpha),
                      default=np.inf)
        checks.append(CheckResult("alpha_positive_definite", min_eig > 0.0,
                                  min_eig, 0.0))

        # alpha_i(ad(h)u, v) + alpha_i(u, ad(h)v) = 0 within each block
        worst = 0.0
        for i in self.h_indices:
            ad = self.alg.ad_operator(self.alg.basis_vector(int(i)))
            for a, blk in zip(self.alpha, self.blocks):
                sub = ad[np.ix_(blk, blk)]
                worst = max(worst, float(np.abs(sub.T @ a + a @ sub).max()))
        checks.append(CheckResult("invariance", worst <= tol_invariance,
                                  worst, tol_invariance))

        return SpaceValidationReport(checks=tuple(checks))

    # -- serialization -----------------------------------------------------------

    def to_json_dict(self, family: "MetricFamily | None" = None) -> dict:
        doc = {
            "algebra": self.alg.to_json_dict(),
            "h": self.h_labels(),
            "m_blocks": [[self.alg.basis_labels[i] for i in blk]
                         for blk in self.blocks],
            "alpha": [[float(x) for x in a.ravel()] for a in self.alpha],
        }
        if family is not None:
            doc["family_a"] = [[float(x) for x in row] for row in family.a]
        return doc

    def to_json(self, family=None, indent=None) -> str:
        return json.dumps(self.to_json_dict(family), indent=indent)

    @classmethod
    def from_json_dict(cls, doc: dict) -> "ReductiveSpace":
        alg = LieAlgebra.from_json_dict(doc["algebra"])
        blocks = doc["m_blocks"]
        alpha = [np.array(flat, dtype=float).reshape(len(blk), len(blk))
                 for flat, blk in zip(doc["alpha"], blocks)]
        return cls(alg, doc["h"], blocks, alpha)

    @classmethod
    def from_json(cls, text: str) -> "ReductiveSpace":
        return cls.from_json_dict(json.loads(text))

    def __repr__(self) -> str:
        return (f"ReductiveSpace(dim={self.dim}, h={self.h_labels()}, "
                f"blocks={[len(b) for b in self.blocks]})")


class MetricFamily:
    """Positively related scalar products g_j = sum_i a[j, i] * alpha_i."""

    def __init__(self, space: ReductiveSpace, a):
        a = np.asarray(a, dtype=float)
        if a.ndim != 2:
            raise ValueError("coefficient matrix must be 2-D (k x s)")
        if a.shape[0] < 1 or a.shape[1] != space.n_blocks:
            raise ValueError(
                f"coefficient matrix must be k x {space.n_blocks} with k >= 1, "
                f"got {a.shape}")
        if not np.all(np.isfinite(a)) or np.any(a <= 0.0):
            raise ValueError("all family coefficients must be positive")
        self.space = space
        self.a = a
        self.a.flags.writeable = False

    @property
    def k(self) -> int:
        return self.a.shape[0]

    def _check_j(self, j: int) -> int:
        j = int(j)
        if not 0 <= j < self.k:
            raise ValueError(f"metric index {j} out of range for k={self.k}")
        return j

    def gram(self, j: int) -> np.ndarray:
        """Block-diagonal Gram matrix of g_j on m (m-coordinate layout)."""
        return self.space.weighted_alpha_gram(self.a[self._check_j(j)])

    def evaluate(self, j: int, u, v) -> float:
        """g_j(u, v) for vectors given in full or m-coordinates."""
        um = self._as_m(u)
        vm = self._as_m(v)
        return float(um @ self.gram(j) @ vm)

    def _as_m(self, v) -> Vector:
        v = np.asarray(v, dtype=float)
        if v.shape == (self.space.dim_m,):
            return v
        return self.space.m_coords(self.space.alg.vector(v))

    def __repr__(self) -> str:
        return f"MetricFamily(k={self.k}, s={self.space.n_blocks})"


def load_space_document(doc: dict):
    """Read a combined space document; returns (space, family or None)."""
    space = ReductiveSpace.from_json_dict(doc)
    family = None
    if "family_a" in doc:
        family = MetricFamily(space, np.array(doc["family_a"], dtype=float))
    return space, family
