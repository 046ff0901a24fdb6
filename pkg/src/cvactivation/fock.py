"""Truncated-Fock-space linear algebra.

States, operators, norms, fidelity and tensor products on the space spanned
by Fock levels 0..dim-1.  Every object carries a :class:`FockCutoff` tag and
interoperates only with objects of the same dimension.  All values are
immutable after construction and every operation is a pure function, so
everything here is safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm
from scipy.special import gammainc

from .errors import BudgetError, TruncationError

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-9
POSITIVITY_TOL = 1e-9
# Displacements leak probability above the cutoff; reject when the coherent
# tail mass at the target cutoff exceeds this.
DISPLACEMENT_TAIL_TOL = 1e-8
# Largest allowed dimension of a product space (matrix of budget^2 entries).
DEFAULT_BUDGET = 4096


@dataclass(frozen=True)
class FockCutoff:
    """Truncated Fock space keeping levels 0..dim-1."""

    dim: int

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 2:
            raise ValueError(f"cutoff dim must be an integer >= 2, got {self.dim}")
        object.__setattr__(self, "dim", int(self.dim))


def as_cutoff(cutoff: FockCutoff | int) -> FockCutoff:
    return cutoff if isinstance(cutoff, FockCutoff) else FockCutoff(int(cutoff))


def _check_same_cutoff(a, b) -> None:
    if a.cutoff.dim != b.cutoff.dim:
        raise ValueError(f"mixed cutoffs: {a.cutoff.dim} vs {b.cutoff.dim}")


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class PureState:
    """Unit vector in the truncated Fock basis.

    ``leakage`` records the probability mass the constructing operation lost
    above the cutoff, so truncation error stays auditable downstream.
    """

    amplitudes: np.ndarray
    cutoff: FockCutoff
    leakage: float = 0.0

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        cutoff = as_cutoff(self.cutoff)
        object.__setattr__(self, "cutoff", cutoff)
        if amps.shape[0] != cutoff.dim:
            raise ValueError(f"amplitude length {amps.shape[0]} != dim {cutoff.dim}")
        nrm = float(np.linalg.norm(amps))
        if abs(nrm - 1.0) > 1e-10:
            raise ValueError(f"state norm {nrm} deviates from 1 beyond 1e-10")
        object.__setattr__(self, "amplitudes", _frozen(amps / nrm))

    @property
    def dim(self) -> int:
        return self.cutoff.dim

    def tail_mass(self, k: int) -> float:
        """Probability carried by Fock levels >= k."""
        return float(np.sum(np.abs(self.amplitudes[k:]) ** 2))

    def overlap(self, other: "PureState") -> complex:
        _check_same_cutoff(self, other)
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def expectation(self, op: "OperatorMatrix") -> complex:
        if op.dim != self.dim:
            raise ValueError(f"operator dim {op.dim} != state dim {self.dim}")
        return complex(np.vdot(self.amplitudes, op.matrix @ self.amplitudes))

    def to_density(self) -> "DensityMatrix":
        return DensityMatrix(
            np.outer(self.amplitudes, self.amplitudes.conj()),
            self.cutoff,
            leakage=self.leakage,
        )


@dataclass(frozen=True)
class DensityMatrix:
    """Trace-one positive Hermitian matrix on the truncated space.

    Construction validates Hermiticity (1e-10 elementwise), unit trace
    (1e-9) and positivity (min eigenvalue >= -1e-9); states that fail are
    rejected, never projected.  Round-off asymmetry is removed once by
    symmetrizing (M + M^dag)/2.
    """

    matrix: np.ndarray
    cutoff: FockCutoff
    leakage: float = 0.0

    def __post_init__(self):
        mat = np.array(self.matrix, dtype=complex)
        cutoff = as_cutoff(self.cutoff)
        object.__setattr__(self, "cutoff", cutoff)
        if mat.shape != (cutoff.dim, cutoff.dim):
            raise ValueError(f"matrix shape {mat.shape} != ({cutoff.dim}, {cutoff.dim})")
        herm_dev = float(np.max(np.abs(mat - mat.conj().T)))
        if herm_dev > HERMITICITY_TOL:
            raise ValueError(f"matrix not Hermitian: max deviation {herm_dev:.3e}")
        mat = (mat + mat.conj().T) / 2.0
        tr = float(np.real(np.trace(mat)))
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"trace {tr} deviates from 1 beyond 1e-9")
        eig_min = float(np.linalg.eigvalsh(mat)[0])
        if eig_min < -POSITIVITY_TOL:
            raise ValueError(f"matrix not positive: min eigenvalue {eig_min:.3e}")
        object.__setattr__(self, "matrix", _frozen(mat))

    @property
    def dim(self) -> int:
        return self.cutoff.dim

    def expectation(self, op: "OperatorMatrix") -> complex:
        if op.dim != self.dim:
            raise ValueError(f"operator dim {op.dim} != state dim {self.dim}")
        return complex(np.trace(op.matrix @ self.matrix))

    def mean_photon_number(self) -> float:
        return float(np.real(np.sum(np.diag(self.matrix) * np.arange(self.dim))))


@dataclass(frozen=True)
class OperatorMatrix:
    """Bounded operator with a certified upper bound on its spectral norm."""

    matrix: np.ndarray
    hermitian: bool
    norm_bound: float

    def __post_init__(self):
        mat = np.array(self.matrix, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError(f"operator must be square, got shape {mat.shape}")
        if self.hermitian:
            dev = float(np.max(np.abs(mat - mat.conj().T)))
            if dev > HERMITICITY_TOL:
                raise ValueError(f"operator flagged Hermitian deviates by {dev:.3e}")
            mat = (mat + mat.conj().T) / 2.0
        if self.norm_bound < 0:
            raise ValueError("norm_bound must be nonnegative")
        object.__setattr__(self, "matrix", _frozen(mat))
        object.__setattr__(self, "norm_bound", float(self.norm_bound))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def dagger(self) -> "OperatorMatrix":
        return OperatorMatrix(self.matrix.conj().T, self.hermitian, self.norm_bound)


def identity_op(cutoff: FockCutoff | int) -> OperatorMatrix:
    dim = as_cutoff(cutoff).dim
    return OperatorMatrix(np.eye(dim, dtype=complex), hermitian=True, norm_bound=1.0)


def annihilation_matrix(dim: int) -> np.ndarray:
    """Raw matrix of the annihilation operator, sqrt(j) on the superdiagonal."""
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), k=1).astype(complex)


def ladder_ops(cutoff: FockCutoff | int) -> tuple[OperatorMatrix, OperatorMatrix, OperatorMatrix]:
    """Annihilation, creation and number operators on the truncated space.

    The commutator [a, a^dag] equals the identity only on the leading
    (dim-1)-block; the corner element is a truncation artifact.
    """
    dim = as_cutoff(cutoff).dim
    a = annihilation_matrix(dim)
    adag = a.conj().T
    n = adag @ a
    bound = float(np.sqrt(dim - 1))
    return (
        OperatorMatrix(a, hermitian=False, norm_bound=bound),
        OperatorMatrix(adag, hermitian=False, norm_bound=bound),
        OperatorMatrix(n, hermitian=True, norm_bound=float(dim - 1)),
    )


def parity_op(cutoff: FockCutoff | int) -> OperatorMatrix:
    """Photon-number parity, diagonal (+1, -1, +1, ...); squares to identity."""
    dim = as_cutoff(cutoff).dim
    diag = (-1.0) ** np.arange(dim)
    return OperatorMatrix(np.diag(diag).astype(complex), hermitian=True, norm_bound=1.0)


def position_op(cutoff: FockCutoff | int) -> OperatorMatrix:
    """x = (a + a^dag)/sqrt(2), convention [x, p] = i."""
    dim = as_cutoff(cutoff).dim
    a = annihilation_matrix(dim)
    x = (a + a.conj().T) / np.sqrt(2.0)
    return OperatorMatrix(x, hermitian=True, norm_bound=float(np.sqrt(2.0 * (dim - 1))))


def momentum_op(cutoff: FockCutoff | int) -> OperatorMatrix:
    """p = -i (a - a^dag)/sqrt(2), convention [x, p] = i."""
    dim = as_cutoff(cutoff).dim
    a = annihilation_matrix(dim)
    p = -1j * (a - a.conj().T) / np.sqrt(2.0)
    return OperatorMatrix(p, hermitian=True, norm_bound=float(np.sqrt(2.0 * (dim - 1))))


def coherent_tail_mass(alpha: complex, dim: int) -> float:
    """Probability a coherent state |alpha> carries above Fock level dim-1.

    Exact Poisson tail: sum_{n>=dim} e^{-|a|^2} |a|^{2n}/n! .
    """
    lam = abs(alpha) ** 2
    if lam == 0.0:
        return 0.0
    return float(gammainc(dim, lam))


def _unitary_polar(mat: np.ndarray) -> np.ndarray:
    """Closest unitary in Frobenius norm (polar factor via SVD)."""
    u, _, vh = np.linalg.svd(mat)
    return u @ vh


def displacement_op(
    alpha: complex,
    cutoff: FockCutoff | int,
    tail_tol: float = DISPLACEMENT_TAIL_TOL,
) -> OperatorMatrix:
    """Weyl displacement exp(alpha a^dag - alpha* a) on the truncated space.

    The generator is exponentiated densely (scaling-and-squaring Pade) and
    the result is projected onto the closest unitary, so the returned
    operator has exactly unit spectral norm; the pre-projection defect is
    available through :func:`displacement_defect`.
    """
    cutoff = as_cutoff(cutoff)
    dim = cutoff.dim
    tail = coherent_tail_mass(alpha, dim)
    if tail > tail_tol:
        raise TruncationError(
            f"displacement alpha={alpha} leaks {tail:.3e} > {tail_tol:.1e} at dim {dim}"
        )
    a = annihilation_matrix(dim)
    gen = alpha * a.conj().T - np.conj(alpha) * a
    d_raw = expm(gen)
    return OperatorMatrix(_unitary_polar(d_raw), hermitian=False, norm_bound=1.0)


def displacement_defect(alpha: complex, cutoff: FockCutoff | int) -> float:
    """Unitarity residual max|D D^dag - I| of the raw truncated exponential."""
    dim = as_cutoff(cutoff).dim
    a = annihilation_matrix(dim)
    d_raw = expm(alpha * a.conj().T - np.conj(alpha) * a)
    return float(np.max(np.abs(d_raw @ d_raw.conj().T - np.eye(dim))))


def _psd_sqrt(mat: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh(mat)
    vals = np.clip(vals, 0.0, None)
    return (vecs * np.sqrt(vals)) @ vecs.conj().T


def fidelity(a: DensityMatrix, b: DensityMatrix) -> float:
    """Uhlmann fidelity (Tr sqrt(sqrt(a) b sqrt(a)))^2, in [0, 1]."""
    _check_same_cutoff(a, b)
    sq = _psd_sqrt(a.matrix)
    inner = sq @ b.matrix @ sq
    vals = np.clip(np.linalg.eigvalsh(inner), 0.0, None)
    f = float(np.sum(np.sqrt(vals)) ** 2)
    return min(max(f, 0.0), 1.0)


def pure_fidelity(psi: PureState, rho: DensityMatrix) -> float:
    """<psi|rho|psi>, the Uhlmann fidelity for a pure first argument."""
    if psi.dim != rho.dim:
        raise ValueError(f"mixed cutoffs: {psi.dim} vs {rho.dim}")
    val = np.vdot(psi.amplitudes, rho.matrix @ psi.amplitudes)
    return min(max(float(np.real(val)), 0.0), 1.0)


def trace_norm(x: OperatorMatrix | np.ndarray) -> float:
    """Schatten-1 norm, the sum of singular values."""
    mat = x.matrix if isinstance(x, OperatorMatrix) else np.asarray(x)
    return float(np.sum(np.linalg.svd(mat, compute_uv=False)))


def tensor(a, b, budget: int = DEFAULT_BUDGET):
    """Kronecker product of two density matrices or two operators.

    The product dimension must stay within ``budget``; trace and norm bound
    are multiplicative.
    """
    if isinstance(a, DensityMatrix) and isinstance(b, DensityMatrix):
        prod_dim = a.dim * b.dim
        if prod_dim > budget:
            raise BudgetError(f"product dim {prod_dim} exceeds budget {budget}")
        return DensityMatrix(
            np.kron(a.matrix, b.matrix),
            FockCutoff(prod_dim),
            leakage=max(a.leakage, b.leakage),
        )
    if isinstance(a, OperatorMatrix) and isinstance(b, OperatorMatrix):
        prod_dim = a.dim * b.dim
        if prod_dim > budget:
            raise BudgetError(f"product dim {prod_dim} exceeds budget {budget}")
        return OperatorMatrix(
            np.kron(a.matrix, b.matrix),
            hermitian=a.hermitian and b.hermitian,
            norm_bound=a.norm_bound * b.norm_bound,
        )
    raise TypeError("tensor expects two DensityMatrix or two OperatorMatrix arguments")
