"""Indefinite-signature linear algebra on small dense matrices.

Inner products with a (neg, pos, null) signature, numerical signature
computation, radical extraction and metric-orthogonal decompositions.
Coordinate convention everywhere: negative block first, then positive,
then null.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError

DEFAULT_ZERO_TOL = 1e-8
SYMMETRY_TOL = 1e-14


@dataclass(frozen=True)
class Signature:
    """Signature (neg, pos, null) of a possibly degenerate symmetric form."""

    neg: int
    pos: int
    null: int = 0

    def __post_init__(self):
        if self.neg < 0 or self.pos < 0 or self.null < 0:
            raise InputError(f"signature counts must be non-negative: {self}")

    @property
    def dim(self) -> int:
        return self.neg + self.pos + self.null

    @property
    def degenerate(self) -> bool:
        return self.null > 0

    def weights(self) -> np.ndarray:
        """Diagonal of the canonical metric: (-1,...,-1, +1,...,+1, 0,...,0)."""
        return np.concatenate([
            -np.ones(self.neg), np.ones(self.pos), np.zeros(self.null)])

    def metric(self) -> np.ndarray:
        return np.diag(self.weights())

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.neg, self.pos, self.null)


@dataclass(frozen=True)
class SymmetricForm:
    """Dense symmetric matrix of double-precision reals."""

    entries: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.entries, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise InputError(f"form must be square, got shape {a.shape}")
        if np.max(np.abs(a - a.T), initial=0.0) > SYMMETRY_TOL:
            raise InputError("form is not symmetric to within 1e-14")
        object.__setattr__(self, "entries", a)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


def inner_product(u, v, sig: Signature) -> float:
    """Indefinite inner product of u and v; null-block coordinates contribute 0."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != (sig.dim,) or v.shape != (sig.dim,):
        raise InputError(
            f"dimension mismatch: u {u.shape}, v {v.shape}, signature dim {sig.dim}")
    return float(np.dot(u * sig.weights(), v))


def gram_matrix(vectors: np.ndarray, sig: Signature) -> np.ndarray:
    """Pairwise inner products of the rows of `vectors`."""
    vectors = np.atleast_2d(np.asarray(vectors, dtype=float))
    if vectors.shape[1] != sig.dim:
        raise InputError("vector length does not match signature dimension")
    return (vectors * sig.weights()) @ vectors.T


def signature_of(form: SymmetricForm | np.ndarray,
                 tol_zero: float = DEFAULT_ZERO_TOL) -> Signature:
    """Count eigenvalues below -tol_zero / above +tol_zero / in between."""
    if tol_zero <= 0:
        raise InputError("tol_zero must be positive")
    if not isinstance(form, SymmetricForm):
        form = SymmetricForm(form)
    eig = np.linalg.eigvalsh(form.entries)
    neg = int(np.sum(eig < -tol_zero))
    pos = int(np.sum(eig > tol_zero))
    return Signature(neg, pos, form.dim - neg - pos)


def radical_basis(form: SymmetricForm | np.ndarray,
                  tol_zero: float = DEFAULT_ZERO_TOL) -> list[np.ndarray]:
    """Orthonormal (Euclidean) basis of the near-kernel of a symmetric form.

    Ordered by ascending |eigenvalue|; each vector sign-normalized so its
    first nonzero component is positive.
    """
    if not isinstance(form, SymmetricForm):
        form = SymmetricForm(form)
    eig, vecs = np.linalg.eigh(form.entries)
    idx = [i for i in range(form.dim) if abs(eig[i]) <= tol_zero]
    idx.sort(key=lambda i: abs(eig[i]))
    out = []
    for i in idx:
        v = vecs[:, i].copy()
        nz = np.nonzero(np.abs(v) > 1e-12)[0]
        if nz.size and v[nz[0]] < 0:
            v = -v
        out.append(v)
    return out


def numerical_rank(matrix: np.ndarray, tol: float = DEFAULT_ZERO_TOL) -> int:
    """Rank by singular values above an absolute tolerance (scaled by s_max)."""
    matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
    if matrix.size == 0:
        return 0
    s = np.linalg.svd(matrix, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > tol * max(1.0, s[0])))


def row_space_basis(matrix: np.ndarray, tol: float = DEFAULT_ZERO_TOL) -> np.ndarray:
    """Euclidean-orthonormal basis (rows) of the row space of `matrix`."""
    matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
    _, s, vh = np.linalg.svd(matrix)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((0, matrix.shape[1]))
    r = int(np.sum(s > tol * max(1.0, s[0])))
    return vh[:r]


def null_space_basis(matrix: np.ndarray, tol: float = DEFAULT_ZERO_TOL) -> np.ndarray:
    """Euclidean-orthonormal basis (rows) of the right null space of `matrix`."""
    matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
    n = matrix.shape[1]
    _, s, vh = np.linalg.svd(matrix, full_matrices=True)
    if s.size == 0 or s[0] == 0.0:
        return np.eye(n)
    r = int(np.sum(s > tol * max(1.0, s[0])))
    return vh[r:]


def orthogonal_split(span, sig: Signature, tol: float = DEFAULT_ZERO_TOL):
    """Metric-orthogonal complement of a span, with degeneracy detection.

    Returns (complement_basis, degenerate, projector):
      complement_basis: rows spanning span^perp = {w : <w, span> = 0};
      degenerate: True iff span intersects its own complement (within tol);
      projector: metric-orthogonal projector onto the span when
        non-degenerate, else None.
    """
    span = np.atleast_2d(np.asarray(span, dtype=float))
    if span.shape[1] != sig.dim:
        raise InputError("span vectors do not match signature dimension")
    basis = row_space_basis(span, tol)
    metric = sig.metric()
    complement = null_space_basis(basis @ metric, tol)
    gram = basis @ metric @ basis.T
    degenerate = basis.shape[0] > 0 and signature_of(gram, tol).null > 0
    projector = None
    if not degenerate and basis.shape[0] > 0:
        projector = basis.T @ np.linalg.solve(gram, basis @ metric)
    elif basis.shape[0] == 0:
        projector = np.zeros((sig.dim, sig.dim))
    return [complement[i] for i in range(complement.shape[0])], degenerate, projector


def random_pseudo_orthogonal(sig: Signature, rng: np.random.Generator,
                             rotations: int | None = None,
                             max_boost: float = 0.4) -> np.ndarray:
    """Random isometry of the indefinite form: circular rotations inside the
    sign blocks, hyperbolic boosts across them.  Null coordinates are fixed.
    """
    n = sig.dim
    L = np.eye(n)
    neg_idx = list(range(sig.neg))
    pos_idx = list(range(sig.neg, sig.neg + sig.pos))
    if rotations is None:
        rotations = 2 * (sig.neg + sig.pos)
    for _ in range(rotations):
        kind = rng.integers(0, 3)
        step = np.eye(n)
        if kind == 0 and len(pos_idx) >= 2:
            i, j = rng.choice(pos_idx, size=2, replace=False)
            a = rng.uniform(0, 2 * np.pi)
            step[i, i] = step[j, j] = np.cos(a)
            step[i, j] = -np.sin(a)
            step[j, i] = np.sin(a)
        elif kind == 1 and len(neg_idx) >= 2:
            i, j = rng.choice(neg_idx, size=2, replace=False)
            a = rng.uniform(0, 2 * np.pi)
            step[i, i] = step[j, j] = np.cos(a)
            step[i, j] = -np.sin(a)
            step[j, i] = np.sin(a)
        elif neg_idx and pos_idx:
            i = rng.choice(neg_idx)
            j = rng.choice(pos_idx)
            t = rng.uniform(-max_boost, max_boost)
            step[i, i] = step[j, j] = np.cosh(t)
            step[i, j] = step[j, i] = np.sinh(t)
        L = step @ L
    return L
