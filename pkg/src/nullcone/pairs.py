"""Symmetric pairs sl(n, K) = h + m for K = R, C, H.

For a Hermitian form matrix F (diagonal signature matrix or the
antidiagonal variant, both with F^2 = 1) the two eigenspaces are cut out
by X*F = -FX (isotropy part h) and X*F = FX with zero trace (tangent part
m).  Quaternionic matrices X + Y j are handled through their complex
2n x 2n image, where the same equations hold blockwise: FY symmetric for
h, FY antisymmetric for m.

The invariant form is the real trace form, scaled by one half in the
quaternionic case so that numeric constants downstream match the chosen
normalization of the case studies.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .linalg import (
    BilinForm,
    DEFAULT_TOL,
    QMat,
    RealSubspace,
    Tolerance,
    bracket,
    gram_matrix,
    gram_signature,
    quat_embed,
)
from .report import Report

FIELDS = ("R", "C", "H")
VARIANTS = ("standard", "canonical-T")


@dataclass(frozen=True)
class Family:
    """One symmetric pair label: ground field and form signature (p, q)."""

    field: str
    p: int
    q: int

    def __post_init__(self):
        if self.field not in FIELDS:
            raise ValueError(f"field must be one of {FIELDS}, got {self.field!r}")
        if self.p < 1 or self.q < 1:
            raise ValueError("p and q must both be at least 1")
        if self.p + self.q < 2:
            raise ValueError("need p + q >= 2")

    @property
    def n(self) -> int:
        return self.p + self.q


@dataclass(frozen=True)
class SymmetricPair:
    """Constructed pair with explicit real bases and invariant data.

    hermitian_matrix is the n x n form matrix F in the ground-field frame;
    carrier_form is the matrix actually used at the complex-carrier level
    (F itself for R and C, diag(F, F) for the quaternionic embedding).
    """

    family: Family
    variant: str
    hermitian_matrix: np.ndarray
    carrier_form: np.ndarray
    form: BilinForm
    h: RealSubspace
    m: RealSubspace
    g: RealSubspace
    tol: Tolerance = DEFAULT_TOL

    @property
    def carrier_dim(self) -> int:
        return self.carrier_form.shape[0]

    def involution(self, X: np.ndarray) -> np.ndarray:
        """Negative conjugate transpose; fixes h and m setwise."""
        return -np.asarray(X).conj().T

    def in_h(self, X: np.ndarray) -> bool:
        return self.h.contains(X)

    def in_m(self, X: np.ndarray) -> bool:
        return self.m.contains(X)


def _eij(n: int, i: int, j: int) -> np.ndarray:
    M = np.zeros((n, n), dtype=complex)
    M[i, j] = 1.0
    return M


def _antihermitian_gens(n: int):
    gens = [1j * _eij(n, j, j) for j in range(n)]
    for j in range(n):
        for k in range(j + 1, n):
            gens.append(_eij(n, j, k) - _eij(n, k, j))
            gens.append(1j * (_eij(n, j, k) + _eij(n, k, j)))
    return gens


def _hermitian_gens(n: int):
    gens = [_eij(n, j, j) for j in range(n)]
    for j in range(n):
        for k in range(j + 1, n):
            gens.append(_eij(n, j, k) + _eij(n, k, j))
            gens.append(1j * (_eij(n, j, k) - _eij(n, k, j)))
    return gens


def _real_antisym_gens(n: int):
    return [
        _eij(n, j, k) - _eij(n, k, j) for j in range(n) for k in range(j + 1, n)
    ]


def _real_sym_gens(n: int):
    gens = [_eij(n, j, j) for j in range(n)]
    for j in range(n):
        for k in range(j + 1, n):
            gens.append(_eij(n, j, k) + _eij(n, k, j))
    return gens


def _complex_sym_gens(n: int):
    gens = []
    for j in range(n):
        gens.append(_eij(n, j, j))
        gens.append(1j * _eij(n, j, j))
    for j in range(n):
        for k in range(j + 1, n):
            s = _eij(n, j, k) + _eij(n, k, j)
            gens.append(s)
            gens.append(1j * s)
    return gens


def _complex_antisym_gens(n: int):
    gens = []
    for j in range(n):
        for k in range(j + 1, n):
            a = _eij(n, j, k) - _eij(n, k, j)
            gens.append(a)
            gens.append(1j * a)
    return gens


def _drop_trace(gens):
    """Impose zero trace on a generator family by pivot subtraction.

    On each family used here the trace functional takes values on a single
    real line through the origin, so subtracting a real multiple of the
    largest-trace generator from the others is a real-linear operation.
    """
    traces = np.array([np.trace(g) for g in gens])
    mags = np.abs(traces)
    if mags.max() < 1e-12:
        return list(gens)
    piv = int(np.argmax(mags))
    tp = traces[piv]
    out = []
    for i, g in enumerate(gens):
        if i == piv:
            continue
        ratio = traces[i] / tp
        if abs(ratio.imag) > 1e-12:
            raise AssertionError("trace functional is not one-real-dimensional here")
        out.append(g - ratio.real * gens[piv])
    return out


def _form_matrix(fam: Family, variant: str) -> np.ndarray:
    n = fam.n
    if variant == "standard":
        return np.diag(np.array([1.0] * fam.p + [-1.0] * fam.q, dtype=complex))
    if variant == "canonical-T":
        if (fam.p, fam.q) != (2, 1):
            raise ValueError("canonical-T variant is only defined for (p, q) = (2, 1)")
        return np.fliplr(np.eye(n)).astype(complex)
    raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")


def build_pair(fam: Family, variant: str = "standard",
               tol: Tolerance = DEFAULT_TOL) -> SymmetricPair:
    """Construct the pair for the family, with explicit ordered bases.

    Enumeration order is fixed: diagonal generators first, then the
    off-diagonal real/imaginary pairs row by row; for the quaternionic
    family all first-block generators precede the second-block ones.
    """
    F = _form_matrix(fam, variant)
    n = fam.n
    if fam.field == "R":
        h_gens = [F @ A for A in _real_antisym_gens(n)]
        m_gens = _drop_trace([F @ S for S in _real_sym_gens(n)])
        carrier = F
        scale = 1.0
    elif fam.field == "C":
        h_gens = _drop_trace([F @ A for A in _antihermitian_gens(n)])
        m_gens = _drop_trace([F @ S for S in _hermitian_gens(n)])
        carrier = F
        scale = 1.0
    else:
        zero = np.zeros((n, n), dtype=complex)
        h_x = [F @ A for A in _antihermitian_gens(n)]
        h_y = [F @ S for S in _complex_sym_gens(n)]
        m_x = _drop_trace([F @ Hg for Hg in _hermitian_gens(n)])
        m_y = [F @ A for A in _complex_antisym_gens(n)]
        h_gens = [quat_embed(QMat(X, zero)) for X in h_x]
        h_gens += [quat_embed(QMat(zero, Y)) for Y in h_y]
        m_gens = [quat_embed(QMat(X, zero)) for X in m_x]
        m_gens += [quat_embed(QMat(zero, Y)) for Y in m_y]
        carrier = np.block([[F, np.zeros_like(F)], [np.zeros_like(F), F]])
        scale = 0.5
    h = RealSubspace(h_gens, tol=tol)
    m = RealSubspace(m_gens, tol=tol)
    g = RealSubspace(h_gens + m_gens, tol=tol)
    return SymmetricPair(
        family=fam,
        variant=variant,
        hermitian_matrix=F,
        carrier_form=carrier,
        form=BilinForm(scale),
        h=h,
        m=m,
        g=g,
        tol=tol,
    )


def ambient_dimension(fam: Family) -> int:
    """Real dimension of the trace-free matrix algebra over the field."""
    n = fam.n
    if fam.field == "R":
        return n * n - 1
    if fam.field == "C":
        return 2 * (n * n - 1)
    return 4 * n * n - 1


def formula_dims(fam: Family):
    """Closed-form (dim h, dim m, signature of the form on m)."""
    p, q, n = fam.p, fam.q, fam.n
    if fam.field == "R":
        dim_h = n * (n - 1) // 2
        dim_m = n * (n + 1) // 2 - 1
        sig = ((p * (p + 1) + q * (q + 1)) // 2 - 1, p * q)
    elif fam.field == "C":
        dim_h = n * n - 1
        dim_m = n * n - 1
        sig = (p * p + q * q - 1, 2 * p * q)
    else:
        dim_h = n * (2 * n + 1)
        dim_m = (2 * n + 1) * (n - 1)
        sig = (p * (2 * p - 1) + q * (2 * q - 1) - 1, 4 * p * q)
    return dim_h, dim_m, sig


@dataclass(frozen=True)
class TableRow:
    family: Family
    dim_h: int
    dim_m: int
    signature: tuple
    formula: tuple
    match: bool


def dimension_table(families, tol: Tolerance = DEFAULT_TOL):
    """Dimension/signature rows computed from constructed pairs.

    Each row also carries the closed-formula prediction and whether the
    construction agrees with it.
    """
    rows = []
    for fam in families:
        pair = build_pair(fam, "standard", tol=tol)
        _, sig = gram_signature(pair.form, pair.m, tol)
        if sig[2] != 0:
            raise ValueError(f"degenerate form on m for {fam}")
        observed = (pair.h.dim, pair.m.dim, (sig[0], sig[1]))
        predicted = formula_dims(fam)
        rows.append(
            TableRow(
                family=fam,
                dim_h=observed[0],
                dim_m=observed[1],
                signature=observed[2],
                formula=predicted,
                match=observed == predicted,
            )
        )
    return rows


def default_families(n_min: int = 2, n_max: int = 6):
    """All (field, p, q) with p, q >= 1 and n_min <= p + q <= n_max."""
    fams = []
    for field in FIELDS:
        for n in range(n_min, n_max + 1):
            for p in range(1, n):
                fams.append(Family(field, p, n - p))
    return fams


def isotropy_matrix(pair: SymmetricPair, X: np.ndarray,
                    tol: Tolerance | None = None) -> np.ndarray:
    """Matrix of S -> [X, S] on the stored m-basis coordinates."""
    tol = tol or pair.tol
    scale = max(1.0, float(np.linalg.norm(X)))
    if pair.h.residual(X) > tol.abs * scale:
        raise ValueError("X is not in the isotropy algebra within tolerance")
    cols = [pair.m.coords(bracket(X, b)) for b in pair.m.basis]
    return np.column_stack(cols)


def check_symmetric_axioms(pair: SymmetricPair, tol: Tolerance | None = None,
                           rng: np.random.Generator | None = None) -> Report:
    """Verify the defining properties of the constructed pair."""
    tol = tol or pair.tol
    rng = rng or np.random.default_rng(0)
    fam = pair.family
    label = f"{fam.field}_{fam.p}{fam.q}_{pair.variant}"
    rep = Report(suite=f"axioms_{label}")

    rep.equals(
        f"{label}_dim_sum",
        pair.h.dim + pair.m.dim,
        ambient_dimension(fam),
        anchor="h and m fill out the trace-free matrix algebra",
    )

    def max_residual(space_a, space_b, target):
        worst = 0.0
        for a in space_a.basis:
            for b in space_b.basis:
                B = bracket(a, b)
                worst = max(worst, target.residual(B))
        return worst

    rep.residual(f"{label}_bracket_hh", max_residual(pair.h, pair.h, pair.h),
                 tol.abs, anchor="[h, h] inside h")
    rep.residual(f"{label}_bracket_hm", max_residual(pair.h, pair.m, pair.m),
                 tol.abs, anchor="[h, m] inside m")
    rep.residual(f"{label}_bracket_mm", max_residual(pair.m, pair.m, pair.h),
                 tol.abs, anchor="[m, m] inside h")

    cross = max(
        abs(pair.form(a, b)) for a in pair.h.basis for b in pair.m.basis
    )
    rep.residual(f"{label}_form_orthogonal", cross, tol.abs,
                 anchor="h and m are orthogonal for the trace form")

    _, sig_h = gram_signature(pair.form, pair.h, tol)
    _, sig_m = gram_signature(pair.form, pair.m, tol)
    rep.equals(f"{label}_form_nondegenerate",
               (sig_h[2], sig_m[2]), (0, 0),
               anchor="trace form nondegenerate on both summands")

    worst_theta = 0.0
    worst_auto = 0.0
    for _ in range(20):
        X = pair.g.random_element(rng)
        Y = pair.g.random_element(rng)
        tX, tY = pair.involution(X), pair.involution(Y)
        worst_theta = max(worst_theta, float(np.linalg.norm(pair.involution(tX) - X)))
        worst_auto = max(
            worst_auto,
            float(np.linalg.norm(bracket(tX, tY) - pair.involution(bracket(X, Y)))),
        )
    rep.residual(f"{label}_involution_squares", worst_theta, tol.abs,
                 anchor="negative conjugate transpose squares to identity")
    rep.residual(f"{label}_involution_automorphism", worst_auto, 1e-7,
                 anchor="negative conjugate transpose respects brackets")

    worst_h = max(pair.h.residual(pair.involution(b)) for b in pair.h.basis)
    worst_m = max(pair.m.residual(pair.involution(b)) for b in pair.m.basis)
    rep.residual(f"{label}_involution_fixes_h", worst_h, tol.abs,
                 anchor="involution maps the isotropy algebra to itself")
    rep.residual(f"{label}_involution_fixes_m", worst_m, tol.abs,
                 anchor="involution maps the tangent summand to itself")

    G = gram_matrix(pair.form, pair.m.basis)
    worst_inv = 0.0
    for _ in range(10):
        Z = pair.h.random_element(rng)
        M = isotropy_matrix(pair, Z)
        worst_inv = max(worst_inv, float(np.abs(M.T @ G + G @ M).max()))
        worst_inv = max(worst_inv, abs(float(np.trace(M))))
    rep.residual(f"{label}_isotropy_skew", worst_inv, 1e-7,
                 anchor="isotropy action is traceless and form-skew")
    return rep


def corrupt_pair(pair: SymmetricPair) -> SymmetricPair:
    """Negative control: move one generator between the two summands."""
    h_bad = list(pair.h.basis[:-1]) + [pair.m.basis[0]]
    m_bad = [pair.h.basis[-1]] + list(pair.m.basis[1:])
    return replace(
        pair,
        h=RealSubspace(h_bad, tol=pair.tol),
        m=RealSubspace(m_bad, tol=pair.tol),
    )
