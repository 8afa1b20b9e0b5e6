"""Null vectors in the tangent summand: sampling, stabilizers, normal forms.

A null vector is S in m with K(S, S) = 0.  Generic samples are produced
with a prescribed spectrum in a convenient frame and moved to the pair's
frame by a form congruence plus a random isotropy conjugation.  Ray
stabilizers are kernels of a joint linear system (the commutator may scale
S along the ray, so the scaling coefficient is solved for, not assumed to
vanish).  Normal-form routines reduce a generic null vector to a diagonal
matrix whose invariant-form Gram takes an antidiagonal corner shape.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm, null_space

from .linalg import (
    DEFAULT_TOL,
    QMat,
    RealSubspace,
    Tolerance,
    bracket,
    quat_embed,
    realify,
    _kernel_cols,
)
from .pairs import SymmetricPair

GAP_FACTOR = 1e3  # genericity asks for eigenvalue gaps above GAP_FACTOR * tol.abs


@dataclass(frozen=True)
class NullVector:
    """A sampled or supplied element of the null cone.

    eigenvalues holds n entries; for the quaternionic family these are the
    clustered values of the doubled spectrum of the complex carrier.
    genericity means all pairwise gaps exceed the sampling threshold.
    """

    S: np.ndarray
    eigenvalues: np.ndarray
    genericity: bool
    nullity_residual: float
    trace_residual: float
    gap: float


@dataclass(frozen=True)
class StabilizerResult:
    """Ray stabilizer: all X in h with [X, S] = c S for some real c."""

    b: RealSubspace | None
    dim: int
    c_functional: np.ndarray
    residual: float


def _as_rng(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def _pair_doubled_spectrum(vals: np.ndarray):
    """Greedy nearest-partner pairing of a doubled spectrum.

    Returns (n cluster means, max intra-pair spread, min inter-pair gap).
    """
    left = list(vals)
    reps, spread = [], 0.0
    while left:
        v = left.pop(0)
        dists = [abs(v - u) for u in left]
        j = int(np.argmin(dists))
        spread = max(spread, dists[j])
        reps.append(0.5 * (v + left.pop(j)))
    reps = np.array(reps)
    gap = _min_gap(reps)
    return reps, spread, gap


def _min_gap(vals: np.ndarray) -> float:
    if len(vals) < 2:
        return np.inf
    diffs = np.abs(vals[:, None] - vals[None, :])
    np.fill_diagonal(diffs, np.inf)
    return float(diffs.min())


def make_null_vector(pair: SymmetricPair, S: np.ndarray,
                     tol: Tolerance | None = None) -> NullVector:
    """Wrap a matrix as a null vector after membership and nullity checks."""
    tol = tol or pair.tol
    S = np.asarray(S, dtype=complex)
    scale = max(1.0, float(np.linalg.norm(S)))
    if pair.m.residual(S) > 1e-7 * scale:
        raise ValueError("matrix is not in the tangent summand within tolerance")
    nullity = abs(pair.form(S, S))
    trace_res = abs(complex(np.trace(S)))
    vals = np.linalg.eigvals(S)
    if pair.family.field == "H":
        reps, spread, gap = _pair_doubled_spectrum(vals)
        generic = spread < 1e-6 * scale and gap > GAP_FACTOR * tol.abs
        order = np.lexsort((reps.imag, reps.real))
        vals = reps[order]
    else:
        order = np.lexsort((vals.imag, vals.real))
        vals = vals[order]
        gap = _min_gap(vals)
        generic = gap > GAP_FACTOR * tol.abs
    return NullVector(
        S=S,
        eigenvalues=vals,
        genericity=bool(generic),
        nullity_residual=nullity,
        trace_residual=trace_res,
        gap=float(gap),
    )


def t_form(p: int, q: int, r: int) -> np.ndarray:
    """Antidiagonal-corner form: flipped identities of size r in the corners,
    a diagonal (p-r, q-r) signature block in the middle."""
    n = p + q
    if r > min(p, q):
        raise ValueError("corner size exceeds min(p, q)")
    T = np.zeros((n, n), dtype=complex)
    if r:
        T[:r, n - r:] = np.fliplr(np.eye(r))
        T[n - r:, :r] = np.fliplr(np.eye(r))
    mid = [1.0] * (p - r) + [-1.0] * (q - r)
    for i, s in enumerate(mid):
        T[r + i, r + i] = s
    return T


def congruence(F: np.ndarray, T: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """P with P* F P = T for Hermitian F, T with matching +-1 spectra."""
    wf, Vf = np.linalg.eigh(F)
    wt, Vt = np.linalg.eigh(T)
    of, ot = np.argsort(-wf), np.argsort(-wt)
    if not np.allclose(np.sign(wf[of]), np.sign(wt[ot]), atol=0.1):
        raise ValueError("forms have different signatures")
    P = Vf[:, of] @ Vt[:, ot].conj().T
    res = np.abs(P.conj().T @ F @ P - T).max()
    if res > 1e-10 * max(1.0, np.abs(T).max()):
        raise ValueError(f"congruence failed, residual {res:.3e}")
    return P


def _sample_spectrum(p: int, q: int, rng: np.random.Generator):
    """Spectrum (mu complex r-vector, lam real (n-2r)-vector) with zero sum
    of all eigenvalues and zero sum of their squares; corner size r = min(p, q)."""
    r, free = min(p, q), p + q - 2 * min(p, q)
    a = rng.standard_normal(r)
    lam = rng.standard_normal(free)
    # joint trace centering: 2*sum(a) + sum(lam) = 0 afterwards
    t = (2.0 * a.sum() + lam.sum()) / (2 * r + free)
    a -= t
    lam -= t
    # sum of squares: 2*sum(a^2 - b^2) + sum(lam^2) = 0 fixes the b magnitudes
    budget = a @ a + 0.5 * (lam @ lam)
    w = rng.uniform(0.5, 1.5, r)
    b = np.sqrt(budget * w / w.sum())
    return a + 1j * b, lam


def _complex_null_matrix(F: np.ndarray, p: int, q: int, rng: np.random.Generator,
                         tol: Tolerance):
    """n x n matrix X with X* F = F X, tr X = 0, tr X^2 = 0, generic spectrum."""
    mu, lam = _sample_spectrum(p, q, rng)
    r = len(mu)
    diag = np.concatenate([mu, lam.astype(complex), np.conj(mu)[::-1]])
    S_T = np.diag(diag)
    P = congruence(F, t_form(p, q, r), tol)
    return P @ S_T @ np.linalg.inv(P), diag


def _real_null_matrix(p: int, q: int, rng: np.random.Generator):
    """As above over the reals in the diagonal-form frame: rotation-style
    2 x 2 blocks couple one positive and one negative coordinate."""
    n = p + q
    r = min(p, q)
    mu, lam = _sample_spectrum(p, q, rng)
    S = np.zeros((n, n))
    for i in range(r):
        a, b = mu[i].real, mu[i].imag
        S[i, i] = S[p + i, p + i] = a
        S[i, p + i] = b
        S[p + i, i] = -b
    slots = list(range(r, p)) + list(range(p + r, n))
    for s, c in zip(slots, lam):
        S[s, s] = c
    return S, np.concatenate([mu, lam.astype(complex), np.conj(mu)[::-1]])


def _isotropy_conjugate(pair: SymmetricPair, S: np.ndarray,
                        rng: np.random.Generator) -> np.ndarray:
    """Conjugate by exp(Z) for a random isotropy element with norm <= 1."""
    Z = pair.h.random_element(rng, norm=rng.uniform(0.2, 1.0))
    A = expm(Z)
    # S -> A S A^{-1} via a solve, avoiding an explicit inverse
    return np.linalg.solve(A.T, (A @ S).T).T


def sample_null_generic(pair: SymmetricPair, rng=0,
                        tol: Tolerance | None = None,
                        max_tries: int = 60) -> NullVector:
    """Random generic null vector (distinct spectrum, nonreal pairs present)."""
    tol = tol or pair.tol
    rng = _as_rng(rng)
    fam = pair.family
    if fam.n < 3:
        raise ValueError("generic null vectors need p + q >= 3")
    for _ in range(max_tries):
        if fam.field == "R":
            S0, _ = _real_null_matrix(fam.p, fam.q, rng)
            P = congruence(pair.hermitian_matrix,
                           np.diag([1.0] * fam.p + [-1.0] * fam.q).astype(complex), tol)
            S0 = (P @ S0 @ np.linalg.inv(P))
        elif fam.field == "C":
            S0, _ = _complex_null_matrix(pair.hermitian_matrix, fam.p, fam.q, rng, tol)
        else:
            X, _ = _complex_null_matrix(pair.hermitian_matrix, fam.p, fam.q, rng, tol)
            S0 = quat_embed(QMat(X, np.zeros_like(X)))
        S = _isotropy_conjugate(pair, S0, rng)
        nv = make_null_vector(pair, S, tol)
        if nv.genericity and nv.nullity_residual < 1e-8:
            return nv
    raise RuntimeError("failed to draw a generic null vector")


def stabilizer_of_ray(pair: SymmetricPair, nv: NullVector,
                      tol: Tolerance | None = None) -> StabilizerResult:
    """All (X, c) in h x R with [X, S] = c S, as a subspace of h.

    The projection to the X component is injective (X = 0 forces c = 0),
    so the kernel maps to a subspace of h of the same dimension; the ray
    coefficient c is returned per basis vector.
    """
    tol = tol or pair.tol
    S = nv.S
    cols = [realify(bracket(b, S)) for b in pair.h.basis]
    cols.append(-realify(S))
    M = np.column_stack(cols)
    ker = _kernel_cols(M, tol)
    dim = ker.shape[1]
    if dim == 0:
        return StabilizerResult(None, 0, np.zeros(0), 0.0)
    mats, cs, residual = [], [], 0.0
    for j in range(dim):
        X = pair.h.combine(ker[: pair.h.dim, j])
        c = float(ker[pair.h.dim, j])
        residual = max(residual, float(np.linalg.norm(bracket(X, S) - c * S)))
        mats.append(X)
        cs.append(c)
    return StabilizerResult(RealSubspace(mats, tol=tol), dim, np.array(cs), residual)


def partner_null(pair: SymmetricPair, nv: NullVector,
                 tol: Tolerance | None = None):
    """Partner null vector sharing the eigenframe, and its pairing with S.

    The partner keeps every eigenvector of S and maps each eigenvalue to
    minus its conjugate.  On a canonical representative (eigenframe
    adapted to the involution) this is exactly the negative conjugate
    transpose; unlike the raw matrix map it commutes with isotropy
    conjugation, so the stabilizer equality it feeds is frame-independent.
    Returns (partner, form pairing); the pairing is strictly negative.
    """
    if not nv.genericity:
        raise ValueError("the partner construction needs a generic spectrum")
    S = nv.S
    w, V = np.linalg.eig(S)
    M = V @ np.diag(-np.conj(w)) @ np.linalg.inv(V)
    if pair.family.field == "R":
        M = M.real.astype(complex)
    elif pair.family.field == "H":
        n = pair.family.n
        X = (M[:n, :n] + np.conj(M[n:, n:])) / 2
        Y = (-M[:n, n:] + np.conj(M[n:, :n])) / 2
        M = np.block([[X, -Y], [np.conj(Y), np.conj(X)]])
    M = pair.m.project(M)
    nv_hat = make_null_vector(pair, M, tol)
    return nv_hat, float(pair.form(S, M))


def orbit_codimension(pair: SymmetricPair, nv: NullVector,
                      tol: Tolerance | None = None) -> int:
    """Codimension of the ray orbit inside the projectivized null cone."""
    stab = stabilizer_of_ray(pair, nv, tol)
    cone_dim = pair.m.dim - 2
    orbit_dim = pair.h.dim - stab.dim
    return cone_dim - orbit_dim


def split_spectrum(values: np.ndarray, thr: float):
    """Indices of upper-half-plane, real, and lower-half-plane eigenvalues."""
    values = np.asarray(values)
    upper = [i for i in range(len(values)) if values[i].imag > thr]
    real = [i for i in range(len(values)) if abs(values[i].imag) <= thr]
    lower = [i for i in range(len(values)) if values[i].imag < -thr]
    upper.sort(key=lambda i: (values[i].real, values[i].imag))
    real.sort(key=lambda i: values[i].real)
    return upper, real, lower


def canonicalize_unitary(pair: SymmetricPair, nv: NullVector,
                         tol: Tolerance | None = None):
    """Basis P diagonalizing a generic complex-family null vector so that
    P* F P is the antidiagonal-corner form; returns (P, corner size r)."""
    tol = tol or pair.tol
    if pair.family.field != "C":
        raise ValueError("unitary normal form applies to the complex family")
    if not nv.genericity:
        raise ValueError("normal form needs a generic spectrum")
    S, F = nv.S, pair.carrier_form
    n = S.shape[0]
    w, V = np.linalg.eig(S)
    thr = max(GAP_FACTOR * tol.abs, 0.25 * nv.gap)
    upper, real, lower = split_spectrum(w, thr)
    r = len(upper)
    slots = [None] * n
    for i, idx in enumerate(upper):
        slots[i] = idx
        partner = min(lower, key=lambda j: abs(w[j] - np.conj(w[idx])))
        lower.remove(partner)
        slots[n - 1 - i] = partner
    # middle slots: positive self-pairing first, then negative, values ascending
    mids = []
    for idx in real:
        u = V[:, idx]
        mids.append((idx, float((u.conj() @ F @ u).real)))
    mids.sort(key=lambda t: (-np.sign(t[1]), w[t[0]].real))
    for k, (idx, _) in enumerate(mids):
        slots[r + k] = idx
    cols = []
    for i in range(n):
        u = V[:, slots[i]]
        cols.append(u / np.linalg.norm(u))
    for i in range(r):
        c = np.conj(cols[i]) @ F @ cols[n - 1 - i]
        if abs(c) < 1e-10:
            raise ValueError("degenerate pairing between conjugate eigenlines")
        cols[n - 1 - i] = cols[n - 1 - i] / c
    for k in range(r, n - r):
        s = float((np.conj(cols[k]) @ F @ cols[k]).real)
        if abs(s) < 1e-10:
            raise ValueError("degenerate self-pairing on a real eigenline")
        cols[k] = cols[k] / np.sqrt(abs(s))
    return np.column_stack(cols), r


def _omega_matrix(pair: SymmetricPair) -> np.ndarray:
    F = pair.hermitian_matrix
    Z = np.zeros_like(F)
    return np.block([[Z, F], [-F, Z]])


def canonicalize_symplectic(pair: SymmetricPair, nv: NullVector,
                            tol: Tolerance | None = None) -> np.ndarray:
    """Basis normalizing a generic quaternionic-family null vector.

    The returned 2n x 2n matrix P diagonalizes the complex carrier of S;
    its columns are arranged so the complex-symplectic Gram becomes the
    block form [[0, T], [-T, 0]] with T the corner form of size r = number
    of nonreal eigenvalue pairs, and the Hermitian Gram is supported on
    the same corner pattern in each diagonal block.
    """
    tol = tol or pair.tol
    if pair.family.field != "H":
        raise ValueError("symplectic normal form applies to the quaternionic family")
    if not nv.genericity:
        raise ValueError("normal form needs a generic spectrum")
    M = nv.S
    n = pair.family.n
    Hm = pair.carrier_form
    Om = _omega_matrix(pair)
    eye = np.eye(n)
    Jstr = np.block([[0 * eye, -eye], [eye, 0 * eye]]).astype(complex)

    def h(x, y):
        return np.conj(x) @ Hm @ y

    def om(x, y):
        return x @ Om @ y

    def cmap(x):
        return Jstr @ np.conj(x)

    def eigenspace(lam):
        E = null_space(M - lam * np.eye(2 * n), rcond=1e-8)
        if E.shape[1] != 2:
            raise ValueError("eigenspace is not two-dimensional; spectrum not generic")
        return E

    thr = max(GAP_FACTOR * tol.abs, 0.25 * nv.gap)
    upper, real, _ = split_spectrum(nv.eigenvalues, thr)
    r = len(upper)
    lam_order = [nv.eigenvalues[i] for i in upper]
    lam_order += [nv.eigenvalues[i].real + 0j for i in real]
    lam_order += [np.conj(nv.eigenvalues[i]) for i in reversed(upper)]
    vs = [None] * n
    ws = [None] * n
    for k in range(r, n - r):
        lam = lam_order[k]
        E = eigenspace(lam)
        v = E[:, 0]
        w = cmap(v)
        t = om(v, w)
        Hk = np.array([[h(v, v), h(v, w)], [h(w, v), h(w, w)]])
        _, U = np.linalg.eigh(Hk)
        U = U.copy()
        U[:, 0] = U[:, 0] / np.linalg.det(U)
        G = U * np.sqrt(1.0 / t)
        B = np.column_stack([v, w]) @ G
        vs[k], ws[k] = B[:, 0], B[:, 1]
    for i in range(r):
        lam = lam_order[i]
        E1 = eigenspace(lam)
        E2 = eigenspace(np.conj(lam))
        v = E1[:, 0]
        w_i = cmap(v)
        scores = [abs(om(v, cmap(E2[:, j]))) for j in range(2)]
        u = E2[:, int(np.argmax(scores))]
        if max(scores) < 1e-10:
            raise ValueError("degenerate symplectic pairing between eigenspaces")
        w_p = cmap(u)
        w_p = w_p / om(v, w_p)
        u = u / om(u, w_i)
        H2 = np.array([[h(v, u), h(v, w_i)], [h(w_p, u), h(w_p, w_i)]])
        B2 = np.sqrt(np.linalg.det(H2)) * np.linalg.inv(H2)
        C = np.column_stack([u, w_i]) @ B2
        vs[i], ws[i] = v, C[:, 1]
        vs[n - 1 - i], ws[n - 1 - i] = C[:, 0], w_p
    return np.column_stack(vs + ws)


def so21_orbit_class(S: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> str:
    """Stratum of a 3 x 3 null vector: open, two-step- or one-step-nilpotent.

    For traceless null S the characteristic polynomial collapses so that
    S^3 = det(S) * 1; the strata are separated by the vanishing order.
    """
    S = np.asarray(S, dtype=complex)
    norm = float(np.linalg.norm(S))
    if norm <= tol.abs:
        raise ValueError("zero matrix does not lie on any stratum")
    S2 = S @ S
    S3 = S2 @ S
    if np.linalg.norm(S2) <= tol.abs * norm**2:
        return "one-step-nilpotent"
    if np.linalg.norm(S3) <= tol.abs * norm**3:
        return "two-step-nilpotent"
    return "open"


def sample_so21_stratum(pair: SymmetricPair, stratum: str, rng=0,
                        tol: Tolerance | None = None) -> NullVector:
    """Random representative of one of the three strata for (R, 2, 1)."""
    tol = tol or pair.tol
    rng = _as_rng(rng)
    fam = pair.family
    if (fam.field, fam.p, fam.q) != ("R", 2, 1):
        raise ValueError("strata sampling is defined for the real (2, 1) pair")
    if stratum == "open":
        return sample_null_generic(pair, rng, tol)
    E = np.zeros((3, 3), dtype=complex)
    if stratum == "two-step-nilpotent":
        E[0, 1] = E[1, 2] = 1.0
    elif stratum == "one-step-nilpotent":
        E[0, 2] = 1.0
    else:
        raise ValueError(f"unknown stratum {stratum!r}")
    P = congruence(pair.hermitian_matrix, t_form(2, 1, 1), tol)
    S0 = P @ E @ np.linalg.inv(P)
    S = rng.uniform(0.5, 2.0) * _isotropy_conjugate(pair, S0, rng)
    return make_null_vector(pair, S, tol)
