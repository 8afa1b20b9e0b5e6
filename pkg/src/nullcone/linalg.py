"""Real-linear matrix algebra helpers.

Everything in this package manipulates real subspaces of complex matrix
spaces: Lie brackets, trace forms, kernels of real-linear maps, signatures,
structure constants.  Complex n x n matrices are flattened to real vectors
of length 2*n*n (row-major, real parts first, then imaginary parts), and all
rank decisions go through numpy's SVD with explicit tolerances.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class Tolerance:
    """Numerical thresholds used across the package.

    abs: absolute tolerance for residuals that should vanish.
    rank_rel: relative cutoff for singular values / eigenvalues in rank
        and signature decisions.
    """

    abs: float = 1e-9
    rank_rel: float = 1e-8


DEFAULT_TOL = Tolerance()


@dataclass(frozen=True)
class BilinForm:
    """Real bilinear form X, Y -> scale * Re tr(X Y) on a matrix space."""

    scale: float = 1.0

    def __call__(self, X: np.ndarray, Y: np.ndarray) -> float:
        return float(self.scale * np.trace(X @ Y).real)


def bracket(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Matrix commutator [X, Y] = XY - YX."""
    if X.shape != Y.shape or X.shape[0] != X.shape[1]:
        raise ValueError(f"bracket needs equal square shapes, got {X.shape} and {Y.shape}")
    return X @ Y - Y @ X


@dataclass(frozen=True)
class QMat:
    """Quaternionic n x n matrix written as X + Y j with complex blocks X, Y."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        if self.x.shape != self.y.shape or self.x.shape[0] != self.x.shape[1]:
            raise ValueError("QMat blocks must be square and equal-shaped")


def quat_embed(q: QMat) -> np.ndarray:
    """Complex 2n x 2n image [[X, -Y], [conj(Y), conj(X)]] of X + Y j.

    The embedding is an injective algebra homomorphism, so brackets,
    products and trace identities can be checked on the image.
    """
    X, Y = q.x, q.y
    return np.block([[X, -Y], [Y.conj(), X.conj()]])


def quat_mul(a: QMat, b: QMat) -> QMat:
    """Product of quaternionic matrices, (X1 + Y1 j)(X2 + Y2 j)."""
    # j Z = conj(Z) j moves j past a complex block
    x = a.x @ b.x - a.y @ b.y.conj()
    y = a.x @ b.y + a.y @ b.x.conj()
    return QMat(x, y)


def quat_split(M: np.ndarray) -> QMat:
    """Inverse of quat_embed; raises if M is not in the image pattern."""
    m = M.shape[0]
    if m % 2:
        raise ValueError("even dimension required")
    n = m // 2
    X, Y = M[:n, :n], -M[:n, n:]
    rebuilt = quat_embed(QMat(X, Y))
    err = np.abs(M - rebuilt).max()
    if err > 1e-8 * max(1.0, np.abs(M).max()):
        raise ValueError(f"matrix is not in the quaternionic block pattern, residual {err:.3e}")
    return QMat(X, Y)


def realify(X: np.ndarray) -> np.ndarray:
    """Flatten a complex matrix to a real vector (row-major, re then im)."""
    flat = np.asarray(X, dtype=complex).ravel()
    return np.concatenate([flat.real, flat.imag])


def unrealify(v: np.ndarray, shape: tuple[int, int]) -> np.ndarray:
    """Inverse of realify for the given matrix shape."""
    half = v.size // 2
    flat = v[:half] + 1j * v[half:]
    return flat.reshape(shape)


def solve_real_kernel(rows: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis (columns) of the kernel of a real matrix.

    rows has shape (m, d); the kernel lives in R^d.  Rank is decided by
    singular values below rank_rel times the largest one.
    """
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    m, d = rows.shape
    if m == 0 or not rows.any():
        return np.eye(d)
    _, s, vt = np.linalg.svd(rows)
    cut = tol.rank_rel * s[0]
    rank = int(np.sum(s > cut))
    return vt[rank:].T


class RealSubspace:
    """Real-linear span of complex matrices with a fixed, ordered basis.

    The basis is kept exactly as supplied (callers often rely on the
    ordering); construction fails if it is linearly dependent.
    """

    def __init__(self, basis, tol: Tolerance = DEFAULT_TOL):
        basis = [np.asarray(b, dtype=complex) for b in basis]
        if not basis:
            raise ValueError("empty basis; use RealSubspace.span for rank-safe construction")
        shape = basis[0].shape
        for b in basis:
            if b.shape != shape:
                raise ValueError("all basis matrices must share one shape")
        self.basis = basis
        self.shape = shape
        self.tol = tol
        self._mat = np.column_stack([realify(b) for b in basis])
        s = np.linalg.svd(self._mat, compute_uv=False)
        if s[-1] <= tol.rank_rel * s[0]:
            raise ValueError("supplied basis is linearly dependent")

    @classmethod
    def span(cls, mats, tol: Tolerance = DEFAULT_TOL) -> "RealSubspace":
        """Subspace spanned by possibly dependent matrices (orthonormalized)."""
        mats = [np.asarray(m, dtype=complex) for m in mats]
        if not mats:
            raise ValueError("need at least one matrix to take a span")
        shape = mats[0].shape
        rows = np.stack([realify(m) for m in mats])
        _, s, vt = np.linalg.svd(rows)
        cut = tol.rank_rel * s[0] if s[0] > 0 else 0.0
        rank = int(np.sum(s > cut))
        if rank == 0:
            raise ValueError("all matrices are numerically zero")
        return cls([unrealify(v, shape) for v in vt[:rank]], tol=tol)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coords(self, X: np.ndarray) -> np.ndarray:
        """Real coordinates of X in this basis (least squares)."""
        c, *_ = np.linalg.lstsq(self._mat, realify(X), rcond=None)
        return c

    def project(self, X: np.ndarray) -> np.ndarray:
        return self.combine(self.coords(X))

    def combine(self, coeffs: np.ndarray) -> np.ndarray:
        return unrealify(self._mat @ np.asarray(coeffs, dtype=float), self.shape)

    def residual(self, X: np.ndarray) -> float:
        """Frobenius distance from X to the subspace."""
        return float(np.linalg.norm(X - self.project(X)))

    def contains(self, X: np.ndarray, scale: float | None = None) -> bool:
        if scale is None:
            scale = max(1.0, float(np.linalg.norm(X)))
        return self.residual(X) <= self.tol.abs * scale

    def random_element(self, rng: np.random.Generator, norm: float | None = None) -> np.ndarray:
        X = self.combine(rng.standard_normal(self.dim))
        if norm is not None:
            nx = np.linalg.norm(X)
            if nx > 0:
                X = X * (norm / nx)
        return X

    def kernel_of(self, linmap, tol: Tolerance | None = None) -> "RealSubspace | None":
        """Kernel, inside this subspace, of a real-linear matrix-valued map.

        linmap takes a matrix and returns an ndarray (any shape); returns
        None when the kernel is trivial.
        """
        tol = tol or self.tol
        # column i holds the flattened image of basis[i]
        cols = np.column_stack(
            [realify(np.asarray(linmap(b), dtype=complex)) for b in self.basis]
        )
        ker = _kernel_cols(cols, tol)
        if ker.shape[1] == 0:
            return None
        return RealSubspace([self.combine(ker[:, j]) for j in range(ker.shape[1])], tol=tol)

    def intersection(self, other: "RealSubspace", tol: Tolerance | None = None) -> int:
        """Dimension of the intersection with another subspace."""
        tol = tol or self.tol
        a, b = self._mat, other._mat
        # null vectors of [a, -b] give pairs of coordinates with equal images
        stacked = np.hstack([a, -b])
        ker = _kernel_cols(stacked, tol)
        if ker.shape[1] == 0:
            return 0
        images = a @ ker[: self.dim]
        s = np.linalg.svd(images, compute_uv=False)
        if s.size == 0 or s[0] <= tol.abs:
            return 0
        return int(np.sum(s > tol.rank_rel * s[0]))

    def equals(self, other: "RealSubspace") -> bool:
        if self.dim != other.dim:
            return False
        return all(other.contains(b) for b in self.basis) and all(
            self.contains(b) for b in other.basis
        )


def _kernel_cols(mat: np.ndarray, tol: Tolerance) -> np.ndarray:
    """Orthonormal kernel columns of a real matrix (possibly wide or tall)."""
    mat = np.asarray(mat, dtype=float)
    if mat.size == 0 or not mat.any():
        return np.eye(mat.shape[1])
    _, s, vt = np.linalg.svd(mat, full_matrices=True)
    cut = tol.rank_rel * s[0]
    rank = int(np.sum(s > cut))
    return vt[rank:].T


def form_eval(form: BilinForm, X: np.ndarray, Y: np.ndarray) -> float:
    return form(X, Y)


def gram_matrix(form: BilinForm, basis) -> np.ndarray:
    k = len(basis)
    G = np.empty((k, k))
    for i in range(k):
        for j in range(i, k):
            G[i, j] = G[j, i] = form(basis[i], basis[j])
    return G


def sym_signature(G: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> tuple[int, int, int]:
    """Signature (n+, n-, n0) of a real symmetric matrix.

    Eigenvalues with magnitude below rank_rel times the largest magnitude
    count as zero.
    """
    w = np.linalg.eigvalsh(0.5 * (G + G.T))
    top = np.abs(w).max() if w.size else 0.0
    if top == 0.0:
        return (0, 0, G.shape[0])
    cut = tol.rank_rel * top
    plus = int(np.sum(w > cut))
    minus = int(np.sum(w < -cut))
    return (plus, minus, G.shape[0] - plus - minus)


def gram_signature(form: BilinForm, space: RealSubspace, tol: Tolerance = DEFAULT_TOL):
    """Gram matrix of the form on the subspace basis plus its signature."""
    G = gram_matrix(form, space.basis)
    return G, sym_signature(G, tol)


def orth_complement(space: RealSubspace, within: RealSubspace, form: BilinForm,
                    tol: Tolerance = DEFAULT_TOL):
    """Orthogonal complement of `space` inside `within` for the given form.

    Returns (complement, degenerate).  When the form is degenerate on
    `space` the complement can intersect it; the flag reports that case
    and callers decide whether it is an error.
    """
    G = gram_matrix(form, space.basis)
    _, _, n0 = sym_signature(G, tol)
    degenerate = n0 > 0
    rows = np.array([[form(b, w) for w in within.basis] for b in space.basis])
    ker = _kernel_cols(rows, tol)
    if ker.shape[1] == 0:
        raise ValueError("orthogonal complement is trivial")
    comp = RealSubspace([within.combine(ker[:, j]) for j in range(ker.shape[1])], tol=tol)
    return comp, degenerate


def structure_constants(space: RealSubspace, tol: Tolerance = DEFAULT_TOL):
    """Structure constants c[i, j, :] of the bracket in the given basis.

    Also reports whether the space is closed under the bracket; when it is
    not, the constants are the coordinates of the projections.
    """
    k = space.dim
    c = np.zeros((k, k, k))
    closed = True
    for i in range(k):
        for j in range(i + 1, k):
            B = bracket(space.basis[i], space.basis[j])
            scale = max(1.0, float(np.linalg.norm(B)))
            if space.residual(B) > tol.abs * scale:
                closed = False
            cij = space.coords(B)
            c[i, j] = cij
            c[j, i] = -cij
    return c, closed


def algebra_profile(space: RealSubspace, tol: Tolerance = DEFAULT_TOL):
    """(dim, killing_signature, center_dim, derived_dim) of a matrix Lie algebra.

    Raises if the space is not closed under the bracket.  The Killing form
    is computed from the adjoint matrices in the supplied basis, so the
    result is basis-independent up to the stated tolerances.
    """
    c, closed = structure_constants(space, tol)
    if not closed:
        raise ValueError("space is not closed under the bracket")
    k = space.dim
    # ad_i maps coordinates a to coordinates of [b_i, sum_a a_a b_a]
    ads = np.empty((k, k, k))
    for i in range(k):
        ads[i] = c[i].T
    K = np.einsum("iab,jba->ij", ads, ads)
    sig = sym_signature(K, tol)
    flat = ads.reshape(k, k * k).T  # columns: vectorized ad matrices
    center = _kernel_cols(flat, tol).shape[1]
    pairs = [c[i, j] for i in range(k) for j in range(i + 1, k)]
    if pairs:
        s = np.linalg.svd(np.stack(pairs), compute_uv=False)
        derived = int(np.sum(s > tol.rank_rel * s[0])) if s[0] > tol.abs else 0
    else:
        derived = 0
    return k, sig, center, derived


def signed_gram_schmidt(form: BilinForm, space: RealSubspace,
                        rng: np.random.Generator | None = None,
                        tol: Tolerance = DEFAULT_TOL,
                        max_remix: int = 100):
    """Basis with form(e_i, e_j) = eps_i delta_ij, eps_i in {+1, -1}.

    Pivoting picks the largest |form(v, v)| first.  Subspaces can contain
    large totally null chunks where every remaining self-pairing vanishes;
    in that case the remaining vectors are remixed with random coefficients
    and the sweep continues.  Requires the form to be nondegenerate on the
    space.  Returns (basis, eps) with eps ordered +1 entries first.
    """
    rng = rng or np.random.default_rng(0)
    vecs = [b.copy() for b in space.basis]
    out, eps = [], []
    remix = 0
    while vecs:
        norms = [abs(form(v, v)) for v in vecs]
        i = int(np.argmax(norms))
        if norms[i] < 1e-8:
            if remix >= max_remix:
                raise ValueError("form appears degenerate on the space")
            remix += 1
            coeff = rng.standard_normal((len(vecs), len(vecs)))
            vecs = [sum(coeff[a, b] * vecs[b] for b in range(len(vecs))) for a in range(len(vecs))]
            continue
        v = vecs.pop(i)
        fv = form(v, v)
        e = v / np.sqrt(abs(fv))
        s = 1.0 if fv > 0 else -1.0
        vecs = [u - s * form(u, e) * e for u in vecs]
        out.append(e)
        eps.append(s)
    order = sorted(range(len(out)), key=lambda a: -eps[a])
    basis = [out[a] for a in order]
    eps_arr = np.array([eps[a] for a in order])
    return basis, eps_arr
