"""CPTP maps on the truncated Fock space.

Pure loss, additive Gaussian displacement noise, number damping, phase
rotation, the two-mode SUM-type gate and one deterministic round of
grid-code error correction.  Channels are immutable once built and their
application is a pure function, so parameter sweeps may apply them in
parallel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import expm
from scipy.special import roots_hermite

from .errors import BudgetError, TruncationError
from .fock import (
    DEFAULT_BUDGET,
    DensityMatrix,
    FockCutoff,
    OperatorMatrix,
    PureState,
    annihilation_matrix,
    as_cutoff,
    displacement_op,
    momentum_op,
    position_op,
)

TRACE_PRESERVATION_TOL = 1e-8
SQRT_PI = float(np.sqrt(np.pi))


@dataclass(frozen=True)
class LossParams:
    """Transmissivity of the pure-loss channel."""

    eta: float

    def __post_init__(self):
        if not 0.0 <= self.eta <= 1.0:
            raise ValueError(f"transmissivity must lie in [0, 1], got {self.eta}")


@dataclass(frozen=True)
class GaussNoiseParams:
    """Additive Gaussian displacement noise, variance sigma2 per quadrature."""

    sigma2: float
    quad_order: int = 15

    def __post_init__(self):
        if self.sigma2 <= 0:
            raise ValueError("sigma2 must be positive")
        if self.quad_order < 1:
            raise ValueError("quad_order must be a positive integer")


def sigma2_from_db(squeezing_db: float) -> float:
    """Noise variance per quadrature for a squeezing level in dB: 0.5 * 10^(-s/10)."""
    return 0.5 * 10.0 ** (-squeezing_db / 10.0)


@dataclass(frozen=True)
class KrausChannel:
    """Trace-preserving channel given by its Kraus elements."""

    kraus_ops: tuple[OperatorMatrix, ...]
    label: str

    def __post_init__(self):
        if not self.kraus_ops:
            raise ValueError("need at least one Kraus element")
        dim = self.kraus_ops[0].dim
        acc = np.zeros((dim, dim), dtype=complex)
        for k in self.kraus_ops:
            if k.dim != dim:
                raise ValueError("Kraus elements have mixed dimensions")
            acc += k.matrix.conj().T @ k.matrix
        dev = float(np.max(np.abs(acc - np.eye(dim))))
        if dev > TRACE_PRESERVATION_TOL:
            raise ValueError(f"channel '{self.label}' not trace preserving: defect {dev:.3e}")
        object.__setattr__(self, "kraus_ops", tuple(self.kraus_ops))

    @property
    def dim(self) -> int:
        return self.kraus_ops[0].dim

    def apply(self, rho: DensityMatrix) -> DensityMatrix:
        if rho.dim != self.dim:
            raise ValueError(f"channel dim {self.dim} != state dim {rho.dim}")
        out = np.zeros_like(rho.matrix)
        for k in self.kraus_ops:
            out = out + k.matrix @ rho.matrix @ k.matrix.conj().T
        tr = float(np.real(np.trace(out)))
        defect = abs(1.0 - tr)
        return DensityMatrix(
            out / tr, rho.cutoff, leakage=max(rho.leakage, defect)
        )


def pure_loss(params: LossParams | float, cutoff: FockCutoff | int) -> KrausChannel:
    """Pure-loss channel with Kraus elements sqrt((1-eta)^k/k!) eta^(n/2) a^k.

    The element ordering (damping after annihilation) is fixed by the
    single-photon identity eta |1><1| + (1-eta) |0><0|.
    """
    eta = params.eta if isinstance(params, LossParams) else LossParams(params).eta
    cutoff = as_cutoff(cutoff)
    dim = cutoff.dim
    a = annihilation_matrix(dim)
    damp = np.diag(np.power(eta, np.arange(dim) / 2.0)).astype(complex)
    ops = []
    a_power = np.eye(dim, dtype=complex)
    for k in range(dim):
        coeff = (1.0 - eta) ** k / math.factorial(k)
        if coeff > 0.0:
            ops.append(
                OperatorMatrix(
                    math.sqrt(coeff) * damp @ a_power, hermitian=False, norm_bound=1.0
                )
            )
        a_power = a @ a_power
        if not np.any(a_power):
            break
    return KrausChannel(tuple(ops), label=f"loss(eta={eta})")


def gaussian_noise(
    params: GaussNoiseParams, cutoff: FockCutoff | int
) -> KrausChannel:
    """Random displacement noise as a Gauss-Hermite mixture of displacements.

    rho -> sum_j w_j D(xi_j) rho D(xi_j)^dag with the 2-D product rule
    alpha_ij = sigma (t_i + i t_j), weights normalized to sum to one.  The
    composition law G_a o G_b = G_(a+b) is the correctness oracle for the
    discretization.
    """
    cutoff = as_cutoff(cutoff)
    sigma = math.sqrt(params.sigma2)
    nodes, weights = roots_hermite(params.quad_order)
    w2 = np.outer(weights, weights).ravel()
    w2 = w2 / w2.sum()
    alphas = (sigma * (nodes[:, None] + 1j * nodes[None, :])).ravel()
    ops = tuple(
        OperatorMatrix(
            math.sqrt(w) * displacement_op(al, cutoff).matrix,
            hermitian=False,
            norm_bound=math.sqrt(w),
        )
        for w, al in zip(w2, alphas)
    )
    return KrausChannel(ops, label=f"gaussian_noise(sigma2={params.sigma2})")


@dataclass(frozen=True)
class DampingMap:
    """Normalized number damping rho -> N rho N / Tr(N rho N), N = exp(-eps n)."""

    epsilon: float
    cutoff: FockCutoff

    def __post_init__(self):
        if self.epsilon < 0:
            raise ValueError("epsilon must be nonnegative")
        object.__setattr__(self, "cutoff", as_cutoff(self.cutoff))

    def _diag(self) -> np.ndarray:
        return np.exp(-self.epsilon * np.arange(self.cutoff.dim))

    def apply(self, rho: DensityMatrix) -> DensityMatrix:
        if rho.dim != self.cutoff.dim:
            raise ValueError("cutoff mismatch")
        d = self._diag()
        out = d[:, None] * rho.matrix * d[None, :]
        tr = float(np.real(np.trace(out)))
        if tr <= 0.0:
            raise ValueError("damped state has zero trace")
        return DensityMatrix(out / tr, rho.cutoff, leakage=rho.leakage)

    def apply_pure(self, psi: PureState) -> PureState:
        if psi.dim != self.cutoff.dim:
            raise ValueError("cutoff mismatch")
        amps = self._diag() * psi.amplitudes
        nrm = np.linalg.norm(amps)
        if nrm == 0.0:
            raise ValueError("damped state has zero norm")
        return PureState(amps / nrm, psi.cutoff, leakage=psi.leakage)


def damping(epsilon: float, cutoff: FockCutoff | int) -> DampingMap:
    return DampingMap(epsilon, as_cutoff(cutoff))


def phase_rotation(theta: float, cutoff: FockCutoff | int) -> OperatorMatrix:
    """Gaussian unitary exp(i theta n), free for every free set used here."""
    dim = as_cutoff(cutoff).dim
    return OperatorMatrix(
        np.diag(np.exp(1j * theta * np.arange(dim))), hermitian=False, norm_bound=1.0
    )


def apply_unitary(u: OperatorMatrix, rho: DensityMatrix) -> DensityMatrix:
    if u.dim != rho.dim:
        raise ValueError("dimension mismatch")
    out = u.matrix @ rho.matrix @ u.matrix.conj().T
    tr = float(np.real(np.trace(out)))
    return DensityMatrix(out / tr, rho.cutoff, leakage=rho.leakage)


def sum_gate(cutoff: FockCutoff | int, budget: int = DEFAULT_BUDGET) -> OperatorMatrix:
    """Two-mode gate exp(-i q_1 (x) p_2) on equal per-mode cutoffs."""
    dim = as_cutoff(cutoff).dim
    if dim * dim > budget:
        raise BudgetError(f"two-mode dim {dim * dim} exceeds budget {budget}")
    q = position_op(dim).matrix
    p = momentum_op(dim).matrix
    gate = expm(-1j * np.kron(q, p))
    return OperatorMatrix(gate, hermitian=False, norm_bound=1.0)


def nearest_lattice_shift(value: float, spacing: float) -> float:
    """Residue of value modulo the lattice, nearest point, ties toward zero."""
    ratio = value / spacing
    nearest = np.round(ratio)
    if abs(abs(ratio - np.trunc(ratio)) - 0.5) < 1e-12:
        nearest = np.trunc(ratio)
    return float(value - nearest * spacing)


@lru_cache(maxsize=8)
def _quadrature_eigensystem(dim: int):
    q = position_op(dim).matrix
    p = momentum_op(dim).matrix
    qvals, qvecs = np.linalg.eigh(q)
    pvals, pvecs = np.linalg.eigh(p)
    return (qvals, qvecs), (pvals, pvecs)


@lru_cache(maxsize=8)
def _ec_gates(dim: int):
    q = position_op(dim).matrix
    p = momentum_op(dim).matrix
    gate_q = expm(-1j * np.kron(q, p))  # ancilla position picks up data position
    gate_p = expm(1j * np.kron(p, q))  # ancilla momentum picks up data momentum
    return gate_q, gate_p


def _validate_gkp_ancilla(ancilla: PureState) -> None:
    amps = ancilla.amplitudes
    if float(np.max(np.abs(amps.imag))) > 1e-8:
        raise ValueError("ancilla validation failed: amplitudes not real")
    odd_mass = float(np.sum(np.abs(amps[1::2]) ** 2))
    if odd_mass > 1e-6:
        raise ValueError(f"ancilla validation failed: odd-sector mass {odd_mass:.3e}")
    # logical-0 alignment: the position comb sits on even multiples of sqrt(pi),
    # so the lattice translation exp(i sqrt(pi) q) has clearly positive expectation
    d = displacement_op(1j * math.sqrt(math.pi / 2.0), ancilla.cutoff)
    stab = complex(np.vdot(amps, d.matrix @ amps))
    if stab.real < 0.1:
        raise ValueError(
            f"ancilla validation failed: lattice alignment expectation {stab.real:.3f}"
        )


def _steane_round(
    rho_data: np.ndarray,
    ancilla: np.ndarray,
    gate: np.ndarray,
    eigvals: np.ndarray,
    eigvecs: np.ndarray,
    correct_quadrature: str,
    cutoff: FockCutoff,
) -> np.ndarray:
    """Couple data to ancilla, measure one ancilla quadrature, displace back.

    Outcome-averaged (deterministic) channel: each measurement branch gets
    the displacement returning its modular residue (mod sqrt(pi)) to zero.
    """
    dim = rho_data.shape[0]
    anc_rho = np.outer(ancilla, ancilla.conj())
    joint = np.kron(rho_data, anc_rho)
    joint = gate @ joint @ gate.conj().T
    t = joint.reshape(dim, dim, dim, dim)
    # branch k: <e_k|_ancilla joint |e_k>_ancilla, all outcomes at once
    tmp = np.einsum("iajb,bk->iajk", t, eigvecs, optimize=True)
    branches = np.einsum("ak,iajk->kij", eigvecs.conj(), tmp, optimize=True)
    out = np.zeros((dim, dim), dtype=complex)
    for k in range(dim):
        branch = branches[k]
        prob = float(np.real(np.trace(branch)))
        if prob <= 1e-14:
            out += branch
            continue
        shift = nearest_lattice_shift(float(eigvals[k]), SQRT_PI)
        if correct_quadrature == "q":
            delta = -shift / math.sqrt(2.0)
        else:
            delta = -1j * shift / math.sqrt(2.0)
        corr = displacement_op(delta, cutoff).matrix
        out += corr @ branch @ corr.conj().T
    return out


def gkp_ec_round(
    state: DensityMatrix,
    ancilla: PureState,
    budget: int = DEFAULT_BUDGET,
) -> DensityMatrix:
    """One deterministic round of grid-code error correction, both quadratures.

    Steane-style circuit per quadrature: the data couples to a fresh
    finite-energy codeword ancilla through a SUM-type gate, the relevant
    ancilla quadrature is measured in the eigenbasis of the truncated
    quadrature operator, and the data is displaced so the modular residue
    (mod sqrt(pi), nearest lattice point, ties toward zero) returns to
    zero.  Branches are averaged, so the map is trace preserving.

    The position round uses the ancilla rotated by a quarter period
    (exp(i pi n / 2)), whose position comb has sqrt(pi) spacing; the
    momentum round uses the codeword ancilla unchanged.
    """
    if state.dim != ancilla.dim:
        raise ValueError("data and ancilla must share the cutoff")
    dim = state.dim
    if dim * dim > budget:
        raise BudgetError(f"two-mode dim {dim * dim} exceeds budget {budget}")
    _validate_gkp_ancilla(ancilla)
    (qvals, qvecs), (pvals, pvecs) = _quadrature_eigensystem(dim)
    gate_q, gate_p = _ec_gates(dim)

    fourier = np.exp(1j * (np.pi / 2.0) * np.arange(dim))
    anc_plus = fourier * ancilla.amplitudes

    rho = _steane_round(state.matrix, anc_plus, gate_q, qvals, qvecs, "q", state.cutoff)
    rho = _steane_round(rho, ancilla.amplitudes, gate_p, pvals, pvecs, "p", state.cutoff)

    tr = float(np.real(np.trace(rho)))
    if abs(tr - 1.0) > 1e-6:
        raise TruncationError(f"error-correction round lost trace: defect {abs(tr - 1.0):.3e}")
    rho = (rho + rho.conj().T) / 2.0
    return DensityMatrix(
        rho / tr, state.cutoff, leakage=max(state.leakage, ancilla.leakage, abs(tr - 1.0))
    )
