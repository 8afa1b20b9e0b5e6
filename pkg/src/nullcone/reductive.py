"""Reductive splits of the isotropy algebra and their geometry.

Given a subalgebra b of h on which the trace form is nondegenerate, the
orthogonal complement n inside h is an invariant complement, and the
homogeneous geometry it models is driven by three tensors computed here:
the torsion -[u, v]_n, the curvature of the canonical connection
R(u, v) w = -[[u, v]_b, w], and the two Ricci contractions.  The Ricci
convention is fixed so that the Casimir constant and the Einstein
constants of the two case studies come out with their known positive
signs: Ric(X, Y) = sum_i eps_i K(R(X, e_i) Y, e_i).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import (
    BilinForm,
    DEFAULT_TOL,
    RealSubspace,
    Tolerance,
    bracket,
    gram_signature,
    signed_gram_schmidt,
    structure_constants,
)
from .pairs import SymmetricPair
from .report import Report


@dataclass
class ReductiveSplit:
    """h = b + n with a signed orthonormal basis of n.

    b may be None for the degenerate case of a trivial stabilizer, in
    which case n is all of h and the canonical curvature vanishes.
    """

    pair: SymmetricPair
    b: RealSubspace | None
    n: RealSubspace
    e_basis: list
    eps: np.ndarray
    form: BilinForm

    @property
    def dim_b(self) -> int:
        return 0 if self.b is None else self.b.dim

    @property
    def dim_n(self) -> int:
        return len(self.e_basis)

    def n_coords(self, X: np.ndarray) -> np.ndarray:
        """Coordinates of an element of n in the signed orthonormal basis."""
        return np.array([self.eps[k] * self.form(X, self.e_basis[k])
                         for k in range(self.dim_n)])

    def proj_n(self, X: np.ndarray) -> np.ndarray:
        out = np.zeros_like(self.e_basis[0])
        for k in range(self.dim_n):
            out = out + (self.eps[k] * self.form(X, self.e_basis[k])) * self.e_basis[k]
        return out

    def bracket_parts(self, u: np.ndarray, v: np.ndarray):
        """([u, v]_b, [u, v]_n) for u, v in n; the bracket stays in h."""
        B = bracket(u, v)
        Bn = self.proj_n(B)
        return B - Bn, Bn


def reductive_split(pair: SymmetricPair, b: RealSubspace | None,
                    tol: Tolerance | None = None, rng=0) -> ReductiveSplit:
    """Build the orthogonal invariant complement of b inside h."""
    tol = tol or pair.tol
    form = pair.form
    if b is not None and b.dim > 0:
        for X in b.basis:
            if pair.h.residual(X) > tol.abs * max(1.0, float(np.linalg.norm(X))):
                raise ValueError("b is not contained in the isotropy algebra")
        _, closed = structure_constants(b, tol)
        if not closed:
            raise ValueError("b is not closed under the bracket")
        _, sig_b = gram_signature(form, b, tol)
        if sig_b[2] > 0:
            raise ValueError("form is degenerate on b; no orthogonal complement")
        from .linalg import orth_complement

        n, _ = orth_complement(b, pair.h, form, tol)
        worst = max(n.residual(bracket(x, u)) for x in b.basis for u in n.basis)
        if worst > 1e-7:
            raise ValueError("complement is not invariant under b")
    else:
        b = None
        n = pair.h
    e_basis, eps = signed_gram_schmidt(form, n, np.random.default_rng(rng), tol)
    return ReductiveSplit(pair=pair, b=b, n=n, e_basis=e_basis, eps=eps, form=form)


@dataclass(frozen=True)
class TorsionTensor:
    """Components T[i, j, :] of -[e_i, e_j]_n in the signed basis."""

    components: np.ndarray

    def lowered(self, eps: np.ndarray) -> np.ndarray:
        """Three-index array K(T(e_i, e_j), e_k)."""
        return self.components * eps[None, None, :]


def torsion(split: ReductiveSplit) -> TorsionTensor:
    d = split.dim_n
    t = np.zeros((d, d, d))
    for i in range(d):
        for j in range(i + 1, d):
            _, Bn = split.bracket_parts(split.e_basis[i], split.e_basis[j])
            row = split.n_coords(-Bn)
            t[i, j] = row
            t[j, i] = -row
    return TorsionTensor(t)


def torsion_eval(split: ReductiveSplit, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    _, Bn = split.bracket_parts(u, v)
    return -Bn


def torsion_derivation_check(split: ReductiveSplit,
                             tol: Tolerance | None = None) -> Report:
    """Skewness and the derivation property of the torsion.

    The derivation residual is [b, T(u, v)] - T([b, u]_n, v) - T(u, [b, v]_n)
    over all basis triples; it vanishes exactly when the isotropy action
    preserves the torsion tensor.
    """
    tol = tol or split.pair.tol
    rep = Report(suite="torsion")
    t = torsion(split)
    low = t.lowered(split.eps)
    anti = float(np.abs(t.components + np.transpose(t.components, (1, 0, 2))).max())
    rep.residual("torsion_antisymmetry", anti, tol.abs,
                 anchor="torsion is antisymmetric in its two arguments")
    skew = 0.0
    for perm, sign in [((1, 0, 2), -1), ((0, 2, 1), -1), ((2, 1, 0), -1),
                       ((1, 2, 0), 1), ((2, 0, 1), 1)]:
        skew = max(skew, float(np.abs(np.transpose(low, perm) - sign * low).max()))
    rep.residual("torsion_total_skew", skew, tol.abs,
                 anchor="lowered torsion changes by the sign of the permutation")
    worst = 0.0
    b_basis = [] if split.b is None else split.b.basis
    for X in b_basis:
        for i in range(split.dim_n):
            u = split.e_basis[i]
            Xu = split.proj_n(bracket(X, u))
            for j in range(split.dim_n):
                v = split.e_basis[j]
                Xv = split.proj_n(bracket(X, v))
                D = (bracket(X, torsion_eval(split, u, v))
                     - torsion_eval(split, Xu, v)
                     - torsion_eval(split, u, Xv))
                worst = max(worst, float(np.linalg.norm(D)))
    rep.residual("torsion_derivation", worst, tol.abs,
                 anchor="isotropy elements act as derivations of the torsion")
    return rep


def canonical_curvature(split: ReductiveSplit, u: np.ndarray,
                        v: np.ndarray) -> np.ndarray:
    """Matrix of w -> -[[u, v]_b, w] on the signed basis coordinates."""
    Bb, _ = split.bracket_parts(u, v)
    cols = [split.n_coords(-bracket(Bb, e)) for e in split.e_basis]
    return np.column_stack(cols)


def curvature_eval(split: ReductiveSplit, u, v, w) -> np.ndarray:
    Bb, _ = split.bracket_parts(u, v)
    return -bracket(Bb, w)


def bianchi_residual(split: ReductiveSplit, u, v, w) -> float:
    """First Bianchi sum with torsion, reported as a diagnostic.

    cyclic[R(u, v) w] - cyclic[T(T(u, v), w)] for the canonical connection.
    """
    trip = [(u, v, w), (v, w, u), (w, u, v)]
    total = np.zeros_like(u)
    for a, b, c in trip:
        total = total + curvature_eval(split, a, b, c)
        total = total - torsion_eval(split, torsion_eval(split, a, b), c)
    return float(np.linalg.norm(total))


def ricci_canonical(split: ReductiveSplit) -> np.ndarray:
    """Ric(e_i, e_j) = sum_k eps_k K(R(e_i, e_k) e_j, e_k)."""
    d = split.dim_n
    ric = np.zeros((d, d))
    for i in range(d):
        for k in range(d):
            Bb, _ = split.bracket_parts(split.e_basis[i], split.e_basis[k])
            for j in range(d):
                val = split.form(-bracket(Bb, split.e_basis[j]), split.e_basis[k])
                ric[i, j] += split.eps[k] * val
    return ric


def ricci_levi_civita(split: ReductiveSplit) -> np.ndarray:
    """Canonical Ricci minus the quarter torsion-square correction."""
    d = split.dim_n
    ric = ricci_canonical(split)
    corr = np.zeros((d, d))
    for k in range(d):
        Tk = [torsion_eval(split, split.e_basis[k], split.e_basis[i]) for i in range(d)]
        for i in range(d):
            for j in range(i, d):
                val = split.eps[k] * split.form(Tk[i], Tk[j])
                corr[i, j] += val
                if j != i:
                    corr[j, i] += val
    return ric - 0.25 * corr


def metric_gram(split: ReductiveSplit) -> np.ndarray:
    return np.diag(split.eps)


def einstein_fit(split: ReductiveSplit, ric: np.ndarray | None = None):
    """Least-squares Einstein constant and the worst entry residual."""
    if ric is None:
        ric = ricci_levi_civita(split)
    G = metric_gram(split)
    lam = float(np.sum(ric * G) / np.sum(G * G))
    residual = float(np.abs(ric - lam * G).max())
    return lam, residual


def _ad_matrix(split: ReductiveSplit, X: np.ndarray) -> np.ndarray:
    cols = [split.n_coords(bracket(X, e)) for e in split.e_basis]
    return np.column_stack(cols)


def casimir(split: ReductiveSplit, rng=0, tol: Tolerance | None = None) -> np.ndarray:
    """Casimir of the b-action on n, sum_i eps_i ad(A_i)^2.

    Computed twice with independently randomized signed orthonormal bases
    of b; a mismatch means the form data is inconsistent and raises.
    """
    tol = tol or split.pair.tol
    d = split.dim_n
    if split.b is None or split.b.dim == 0:
        return np.zeros((d, d))
    rng = np.random.default_rng(rng)

    def one_pass(space):
        basis, eps = signed_gram_schmidt(split.form, space, rng, tol)
        chi = np.zeros((d, d))
        for A, e in zip(basis, eps):
            rho = _ad_matrix(split, A)
            chi += e * (rho @ rho)
        return chi

    chi1 = one_pass(split.b)
    k = split.b.dim
    mix = rng.standard_normal((k, k)) + np.eye(k)
    remixed = RealSubspace(
        [sum(mix[a, c] * split.b.basis[c] for c in range(k)) for a in range(k)],
        tol=tol,
    )
    chi2 = one_pass(remixed)
    drift = float(np.abs(chi1 - chi2).max())
    if drift > 1e-7 * max(1.0, float(np.abs(chi1).max())):
        raise ValueError(f"Casimir is basis-dependent, drift {drift:.3e}")
    return chi1


def wang_ziller_check(split: ReductiveSplit, tol: Tolerance | None = None,
                      rng=0):
    """Fit the Casimir to c * Id; (is_multiple, c)."""
    tol = tol or split.pair.tol
    chi = casimir(split, rng, tol)
    d = split.dim_n
    c = float(np.trace(chi) / d)
    residual = float(np.abs(chi - c * np.eye(d)).max())
    return residual <= 1e-8 * max(1.0, abs(c)), c


def homothety_check(split: ReductiveSplit, S: np.ndarray, S_hat: np.ndarray,
                    isometry=None, tol: Tolerance | None = None):
    """Compare n with the orthogonal complement of span{S, S_hat} in m.

    Equality of dimension plus equality of signatures (up to an overall
    sign swap) decides linear isometry; when an explicit map n -> m is
    supplied its Gram matrix is compared entrywise as well.
    Returns (ok, note).
    """
    tol = tol or split.pair.tol
    pair = split.pair
    from .linalg import orth_complement

    span = RealSubspace([S, S_hat], tol=tol)
    n_hat, _ = orth_complement(span, pair.m, pair.form, tol)
    _, sig_n = gram_signature(pair.form, split.n, tol)
    _, sig_hat = gram_signature(pair.form, n_hat, tol)
    ok = split.n.dim == n_hat.dim
    sig_match = (sig_n == sig_hat) or (sig_n == (sig_hat[1], sig_hat[0], sig_hat[2]))
    ok = ok and sig_match and sig_n[2] == 0
    note = (f"dim n = {split.n.dim}, dim n_hat = {n_hat.dim}, "
            f"signatures {sig_n[:2]} vs {sig_hat[:2]}")
    if isometry is not None:
        imgs = [isometry(e) for e in split.e_basis]
        G_src = np.array([[split.form(a, b) for b in split.e_basis] for a in split.e_basis])
        G_img = np.array([[split.form(a, b) for b in imgs] for a in imgs])
        res = float(np.abs(G_src - G_img).max())
        in_hat = max(n_hat.residual(im) for im in imgs)
        rank = RealSubspace.span(imgs, tol).dim
        ok = ok and res <= 1e-8 and in_hat <= 1e-8 and rank == split.n.dim
        note += f"; explicit map gram residual {res:.2e}, rank {rank}"
    return ok, note
