"""Gamma-matrix machinery: Clifford bases, Dirac operators and the N-cell
world-line construction.

The 4x4 sector provides the five-gamma bases of C(3,2) and C(4,1) (the
fifth gamma is gamma5 or i*gamma5 depending on eps4) and the 15-element set
{gamma^mu, i^{(1-eps4)/2} gamma5, gamma^{mu nu}, gamma^mu gamma5} that pairs
with the fifteen derivations to form the Dirac operator D = i Gamma_a d^a.

The cell sector realizes the space-time operators as sums of second-order
elements over N Clifford cells: each cell carries a six-generator Clifford
algebra on an 8-dimensional spinor factor (metric eta6), first-order
generators are embedded with a Jordan-Wigner chirality chain so that
different cells anticommute, and the even bilinears gamma^{ab}(n) then live
on single tensor factors.  All per-cell matrices are exact Gaussian-rational;
the N-cell operators are dense complex arrays.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .algebra import IM, M_IDS, M_PAIRS, P_IDS, X_IDS, LieAlgebraSpec, \
    Signature, eta4
from .diffcalc import derivation_labels, derivation_set
from .enveloping import EnvElement
from .scalars import QQI_I, QQI_ONE, QQi

CELL_DIM_ENV = "NCST_CLIFFORD_MAX_DIM"
DEFAULT_MAX_DIM = 512  # 8^3: three cells

# Recorded normalizations of the cell operators (see finkelstein_operators):
#   M-sum prefactor i/2, Im-sum prefactor i/(N-1).
CELL_M_PREFACTOR = "i/2"
CELL_IM_PREFACTOR = "i/(N-1)"


class ResourceBudgetError(RuntimeError):
    pass


class ConstraintViolation(ValueError):
    pass


# -- exact small matrices ---------------------------------------------------

def qmat(rows):
    return tuple(tuple(x if isinstance(x, QQi) else QQi(x) for x in row)
                 for row in rows)


def qmat_mul(a, b):
    n, m, k = len(a), len(b[0]), len(b)
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = QQi(0)
            for t in range(k):
                if a[i][t] and b[t][j]:
                    acc = acc + a[i][t] * b[t][j]
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def qmat_add(a, b):
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def qmat_scale(a, s):
    s = s if isinstance(s, QQi) else QQi(s)
    return tuple(tuple(s * x for x in row) for row in a)


def qmat_eye(n):
    return tuple(tuple(QQi(1 if i == j else 0) for j in range(n))
                 for i in range(n))


def qmat_anticommutator(a, b):
    return qmat_add(qmat_mul(a, b), qmat_mul(b, a))


def qmat_commutator(a, b):
    return qmat_add(qmat_mul(a, b), qmat_scale(qmat_mul(b, a), -1))


def qmat_to_numpy(a) -> np.ndarray:
    return np.array([[x.to_complex() for x in row] for row in a])


def qmat_kron(a, b):
    na, nb = len(a), len(b)
    out = []
    for i in range(na):
        for k in range(nb):
            row = []
            for j in range(na):
                for l in range(nb):
                    row.append(a[i][j] * b[k][l])
            out.append(tuple(row))
    return tuple(out)


_I = QQI_I
PAULI1 = qmat([[0, 1], [1, 0]])
PAULI2 = qmat([[0, -_I], [_I, 0]])
PAULI3 = qmat([[1, 0], [0, -1]])
ID2 = qmat_eye(2)

# Dirac basis: gamma0 = diag(1,1,-1,-1), gamma^k antidiagonal in Pauli blocks.
GAMMA0 = qmat([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, -1, 0], [0, 0, 0, -1]])


def _dirac_spatial(pauli):
    z = QQi(0)
    out = [[z] * 4 for _ in range(4)]
    for i in range(2):
        for j in range(2):
            out[i][2 + j] = pauli[i][j]
            out[2 + i][j] = -pauli[i][j]
    return tuple(tuple(row) for row in out)


GAMMA1 = _dirac_spatial(PAULI1)
GAMMA2 = _dirac_spatial(PAULI2)
GAMMA3 = _dirac_spatial(PAULI3)
GAMMA5 = qmat_scale(qmat_mul(qmat_mul(GAMMA0, GAMMA1),
                             qmat_mul(GAMMA2, GAMMA3)), _I)

GAMMA_KINDS = ("C31", "C32", "C41")


@dataclass
class GammaBasis:
    """Four (or five) anticommuting gammas with exact entries."""

    kind: str
    gammas: tuple          # gamma^0..gamma^3 [, gamma^4]
    gamma5: tuple
    eta: tuple[int, ...]   # metric values matching the gamma list

    @property
    def eps4(self) -> int:
        if self.kind == "C32":
            return 1
        if self.kind == "C41":
            return -1
        raise ValueError("the four-gamma basis has no fifth axis")


def gamma_basis(kind: str) -> GammaBasis:
    """C31: the 4d basis; C32/C41: add gamma^4 = gamma5 or i*gamma5."""
    if kind not in GAMMA_KINDS:
        raise ValueError(f"unknown gamma basis kind {kind!r}")
    base = (GAMMA0, GAMMA1, GAMMA2, GAMMA3)
    if kind == "C31":
        return GammaBasis(kind, base, GAMMA5, (1, -1, -1, -1))
    if kind == "C32":
        return GammaBasis(kind, base + (GAMMA5,), GAMMA5, (1, -1, -1, -1, 1))
    g4 = qmat_scale(GAMMA5, _I)
    return GammaBasis(kind, base + (g4,), GAMMA5, (1, -1, -1, -1, -1))


def gamma_basis_for(sig: Signature) -> GammaBasis:
    return gamma_basis("C32" if sig.eps4 == 1 else "C41")


def gamma_set_15(basis: GammaBasis) -> dict[int, tuple]:
    """The 15 matrices paired with the full derivation labels.

    d^mu <-> gamma^mu, d^4 <-> i^{(1-eps4)/2} gamma5,
    d^{mu nu} <-> (1/2)[gamma^mu, gamma^nu], d^{x_mu} <-> gamma^mu gamma5.
    """
    eps4 = basis.eps4
    g = basis.gammas
    out: dict[int, tuple] = {}
    for mu in range(4):
        out[P_IDS[mu]] = g[mu]
    g5w = basis.gamma5 if eps4 == 1 else qmat_scale(basis.gamma5, _I)
    out[IM] = g5w
    for k, (mu, nu) in enumerate(M_PAIRS):
        out[M_IDS[k]] = qmat_scale(qmat_commutator(g[mu], g[nu]), Fraction(1, 2))
    for mu in range(4):
        out[X_IDS[mu]] = qmat_mul(g[mu], basis.gamma5)
    return out


def lowered_gamma(label: int, basis: GammaBasis) -> tuple:
    """Index-lowered weight Gamma_a for the Dirac pairing i Gamma_a d^a."""
    mats = gamma_set_15(basis)
    if label in P_IDS:
        mu = label - P_IDS[0]
        return qmat_scale(mats[label], eta4(mu, mu))
    if label == IM:
        return qmat_scale(mats[label], basis.eps4)
    if label in M_IDS:
        mu, nu = M_PAIRS[label - M_IDS[0]]
        return qmat_scale(mats[label], eta4(mu, mu) * eta4(nu, nu))
    mu = label  # x-type labels already carry a lower index
    return qmat_scale(mats[label], eta4(mu, mu))


@dataclass
class DiracOperator:
    """Formal sum of (matrix weight, derivation) pairs: D = i Gamma_a d^a."""

    regime: str
    terms: dict[int, tuple]  # label -> exact 4x4 weight (includes the i)

    @property
    def n_terms(self) -> int:
        return len(self.terms)


def dirac_operator(regime: str, basis: GammaBasis) -> DiracOperator:
    labels = derivation_labels(regime)
    terms = {lab: qmat_scale(lowered_gamma(lab, basis), _I) for lab in labels}
    return DiracOperator(regime, terms)


def d_form_via_D(a: EnvElement, regime: str, spec: LieAlgebraSpec,
                 basis: GammaBasis, derivs=None):
    """[D, a] as matrix-weighted one-form components: label -> (Gamma, i*d^a(a)).

    Multiplication operators commute with the constant matrix weights, so
    the commutator reduces to i Gamma_a d^a(a); the derivation action is
    computed directly so the result can be compared against the exterior
    derivative as an independent route.
    """
    if derivs is None:
        derivs = derivation_set(regime, spec)
    op = dirac_operator(regime, basis)
    out = {}
    for lab in derivation_labels(regime):
        val = derivs[lab].apply(a)
        out[lab] = (op.terms[lab], val)
    return out


# -- N-cell construction ----------------------------------------------------

def cl6_generators(sig: Signature) -> tuple:
    """Six exact 8x8 generators with {G^a, G^b} = 2 eta6^{ab}."""
    euclid = []
    for j in range(3):
        for p in (PAULI1, PAULI2):
            factors = [PAULI3] * j + [p] + [ID2] * (2 - j)
            m = factors[0]
            for f in factors[1:]:
                m = qmat_kron(m, f)
            euclid.append(m)
    eta = sig.eta6
    return tuple(m if eta[a] == 1 else qmat_scale(m, _I)
                 for a, m in enumerate(euclid))


def cell_chirality(sig: Signature) -> tuple:
    """Normalized product of the six generators; squares to +1 and
    anticommutes with each of them."""
    gens = cl6_generators(sig)
    m = gens[0]
    for g in gens[1:]:
        m = qmat_mul(m, g)
    sq = qmat_mul(m, m)
    if sq[0][0] == QQI_ONE:
        return m
    return qmat_scale(m, _I)


def max_cell_dim() -> int:
    raw = os.environ.get(CELL_DIM_ENV)
    if raw is None:
        return DEFAULT_MAX_DIM
    return int(raw)


def _check_budget(n_cells: int) -> int:
    dim = 8 ** n_cells
    if dim > max_cell_dim():
        raise ResourceBudgetError(
            f"{n_cells} cells need dimension {dim} > budget {max_cell_dim()}"
            f" (override with {CELL_DIM_ENV})")
    return dim


def embed_first_order(mat8, n: int, n_cells: int, sig: Signature) -> np.ndarray:
    """gamma^a(n) with a Jordan-Wigner chirality chain: cells anticommute."""
    _check_budget(n_cells)
    omega = qmat_to_numpy(cell_chirality(sig))
    m = qmat_to_numpy(mat8)
    out = np.ones((1, 1), dtype=complex)
    for k in range(1, n_cells + 1):
        if k < n:
            out = np.kron(out, omega)
        elif k == n:
            out = np.kron(out, m)
        else:
            out = np.kron(out, np.eye(8))
    return out


def embed_even(mat8, n: int, n_cells: int) -> np.ndarray:
    """Embedding for even (second-order) per-cell elements: plain factor."""
    _check_budget(n_cells)
    m = qmat_to_numpy(mat8)
    out = np.ones((1, 1), dtype=complex)
    for k in range(1, n_cells + 1):
        out = np.kron(out, m if k == n else np.eye(8))
    return out


def cell_bilinear(sig: Signature, a: int, b: int) -> tuple:
    """gamma^{ab} = (1/2)[G^a, G^b] on one cell (= G^a G^b for a != b)."""
    gens = cl6_generators(sig)
    return qmat_scale(qmat_commutator(gens[a], gens[b]), Fraction(1, 2))


@dataclass
class FinkelsteinParams:
    """Cell count and the two simplifier parameters of the construction."""

    n_cells: int
    chi: QQi
    phi_cell: QQi
    hbar: Fraction = Fraction(1)
    enforce_constraint: bool = True

    def __post_init__(self):
        if self.n_cells < 2:
            raise ValueError("the construction needs at least two cells")
        if not isinstance(self.chi, QQi):
            self.chi = QQi(self.chi)
        if not isinstance(self.phi_cell, QQi):
            self.phi_cell = QQi(self.phi_cell)
        self.hbar = Fraction(self.hbar)
        if self.hbar <= 0:
            raise ValueError("hbar must be positive")

    def constraint_holds(self) -> bool:
        """chi * phi_cell * (N-1) = hbar/2, exactly."""
        lhs = self.chi * self.phi_cell * QQi(self.n_cells - 1)
        return lhs == QQi(Fraction(self.hbar, 2))

    def check(self) -> None:
        if self.enforce_constraint and not self.constraint_holds():
            raise ConstraintViolation(
                "chi*phi_cell*(N-1) != hbar/2 for "
                f"N={self.n_cells}, chi={self.chi!r}, phi_cell={self.phi_cell!r}")


def finkelstein_operators(params: FinkelsteinParams,
                          sig: Signature) -> dict[str, np.ndarray]:
    """The cell realizations of the space-time operators.

    x^mu = -chi      * sum_n gamma^{mu 4}(n)
    p^mu = phi_cell  * sum_n gamma^{mu 5}(n)
    M^{mu nu} = (i/2)     * sum_n gamma^{mu nu}(n)
    Im   = (i/(N-1)) * sum_n gamma^{4 5}(n)

    with n running over cells 1..N-1 (the growing tip carries no sum term).
    The M and Im prefactors are the normalizations that make the M-sector
    bracket and, on the constraint locus, [p, x] = i hbar eta Im come out
    exactly; they are recorded in the closure report.
    """
    params.check()
    n_cells = params.n_cells
    dim = _check_budget(n_cells)
    out: dict[str, np.ndarray] = {}

    def cell_sum(a: int, b: int) -> np.ndarray:
        acc = np.zeros((dim, dim), dtype=complex)
        mat = cell_bilinear(sig, a, b)
        for n in range(1, n_cells):
            acc += embed_even(mat, n, n_cells)
        return acc

    chi = params.chi.to_complex()
    phi_cell = params.phi_cell.to_complex()
    for mu in range(4):
        out[f"x{mu}"] = -chi * cell_sum(mu, 4)
        out[f"p{mu}"] = phi_cell * cell_sum(mu, 5)
    for (mu, nu) in M_PAIRS:
        out[f"M{mu}{nu}"] = 0.5j * cell_sum(mu, nu)
    out["Im"] = (1j / (n_cells - 1)) * cell_sum(4, 5)
    return out


FAMILY_NAMES = ("x0", "x1", "x2", "x3", "p0", "p1", "p2", "p3",
                "M01", "M02", "M03", "M12", "M13", "M23", "Im")


def closure_report(params: FinkelsteinParams, sig: Signature):
    """Least-squares match of every family commutator onto the family span.

    Returns a list of rows
        (name_a, name_b, matches: list[(name, complex)], relative_residual)
    with coefficients below 1e-12 dropped from the match list.
    """
    ops = finkelstein_operators(params, sig)
    basis = np.stack([ops[name].ravel() for name in FAMILY_NAMES], axis=1)
    gram = basis.conj().T @ basis
    rows = []
    for i, name_a in enumerate(FAMILY_NAMES):
        for name_b in FAMILY_NAMES[i + 1:]:
            comm = ops[name_a] @ ops[name_b] - ops[name_b] @ ops[name_a]
            vec = comm.ravel()
            coeffs = np.linalg.lstsq(gram, basis.conj().T @ vec, rcond=None)[0]
            fit = basis @ coeffs
            norm = np.linalg.norm(vec)
            residual = np.linalg.norm(vec - fit) / max(norm, 1e-300)
            if norm < 1e-12:
                residual = 0.0
            matches = [(FAMILY_NAMES[k], coeffs[k])
                       for k in range(len(FAMILY_NAMES))
                       if abs(coeffs[k]) > 1e-12]
            rows.append((name_a, name_b, matches, float(residual)))
    return rows
