"""Factories for the canonical single-mode states.

Fock, coherent, squeezed-coherent, cat, photon-subtracted squeezed and
finite-energy grid-code (GKP) states, plus thermal states.  All factories
return normalized :class:`~cvactivation.fock.PureState` /
:class:`~cvactivation.fock.DensityMatrix` objects with the truncation
leakage recorded.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gammainc, roots_hermite

from .errors import TruncationError
from .fock import DensityMatrix, FockCutoff, PureState, as_cutoff

# Reject factory outputs whose probability mass above the cutoff exceeds this.
STATE_TAIL_TOL = 1e-6
DEFAULT_R_MAX = 2.0
SQRT_PI = float(np.sqrt(np.pi))


@dataclass(frozen=True)
class GaussianPureParams:
    """Displaced squeezed vacuum D(alpha) S(r e^{i phi}) |0>."""

    alpha: complex = 0.0
    r: float = 0.0
    phi: float = 0.0

    def __post_init__(self):
        if self.r < 0:
            raise ValueError("squeezing magnitude r must be nonnegative")
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "phi", float(self.phi) % (2.0 * np.pi))


@dataclass(frozen=True)
class GkpParams:
    """Finite-energy square-lattice grid codeword exp(-eps n) |logical>.

    ``peak_window`` limits the position comb to lattice peaks |s| <= S;
    ``None`` selects the smallest window whose S -> S+2 refinement changes
    the state by less than 1e-8.
    """

    epsilon: float
    logical: int = 0
    peak_window: int | None = None

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.logical not in (0, 1):
            raise ValueError("logical must be 0 or 1")
        if self.peak_window is not None and self.peak_window < 1:
            raise ValueError("peak_window must be a positive integer")

    @property
    def squeezing_db(self) -> float:
        """Equivalent squeezing label -10 log10(tanh epsilon) in dB."""
        return float(-10.0 * np.log10(np.tanh(self.epsilon)))

    @classmethod
    def from_db(cls, squeezing_db: float, logical: int = 0, peak_window: int | None = None):
        eps = float(np.arctanh(10.0 ** (-squeezing_db / 10.0)))
        return cls(epsilon=eps, logical=logical, peak_window=peak_window)


def hermite_functions(n_max: int, x: np.ndarray) -> np.ndarray:
    """Orthonormal Hermite functions psi_n(x), n < n_max, rows indexed by n.

    Stable three-term recurrence on the functions themselves (bounded),
    never on the raw Hermite polynomials.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty((n_max, x.size))
    out[0] = np.pi ** -0.25 * np.exp(-0.5 * x * x)
    if n_max > 1:
        out[1] = np.sqrt(2.0) * x * out[0]
    for n in range(2, n_max):
        out[n] = np.sqrt(2.0 / n) * x * out[n - 1] - np.sqrt((n - 1) / n) * out[n - 2]
    return out


def hermgauss_total(n_nodes: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Hermite nodes with total weights lambda_i = w_i exp(x_i^2).

    The total weights are computed as 1/(N psi_{N-1}(x_i)^2), which stays
    finite for large N where the bare weights w_i underflow.  Nodes beyond
    |x| ~ 37 underflow the recurrence seed psi_0; every Hermite function of
    degree < N/2 is itself zero to double precision there, so those nodes
    get zero weight instead of a spurious infinity.
    """
    x = roots_hermite(n_nodes)[0]
    psi = hermite_functions(n_nodes, x)
    last = psi[n_nodes - 1]
    lam = np.zeros_like(x)
    ok = last != 0.0
    lam[ok] = 1.0 / (n_nodes * last[ok] ** 2)
    return x, lam


def fock(n: int, cutoff: FockCutoff | int) -> PureState:
    """Number state |n>."""
    cutoff = as_cutoff(cutoff)
    if not 0 <= n < cutoff.dim:
        raise ValueError(f"Fock index {n} outside cutoff dim {cutoff.dim}")
    amps = np.zeros(cutoff.dim, dtype=complex)
    amps[n] = 1.0
    return PureState(amps, cutoff)


def _coherent_amps(alpha: complex, n_levels: int) -> np.ndarray:
    # c_n = e^{-|a|^2/2} a^n / sqrt(n!), built iteratively to avoid overflow
    amps = np.empty(n_levels, dtype=complex)
    amps[0] = np.exp(-0.5 * abs(alpha) ** 2)
    for n in range(1, n_levels):
        amps[n] = amps[n - 1] * alpha / np.sqrt(n)
    return amps


def coherent(
    alpha: complex,
    cutoff: FockCutoff | int,
    tail_tol: float = 1e-8,
) -> PureState:
    """Coherent state |alpha>, renormalized on the truncated space."""
    cutoff = as_cutoff(cutoff)
    tail = float(gammainc(cutoff.dim, abs(alpha) ** 2)) if alpha != 0 else 0.0
    if tail > tail_tol:
        raise TruncationError(
            f"coherent alpha={alpha} leaks {tail:.3e} > {tail_tol:.1e} at dim {cutoff.dim}"
        )
    amps = _coherent_amps(alpha, cutoff.dim)
    return PureState(amps / np.linalg.norm(amps), cutoff, leakage=tail)


def squeezed_coherent_amps(
    alpha: complex, r: float, phi: float, n_levels: int
) -> np.ndarray:
    """Unnormalized Fock amplitudes of D(alpha) S(r e^{i phi}) |0>.

    Uses the annihilator identity [mu a + nu a^dag - (mu alpha + nu alpha*)]
    |psi> = 0 with mu = cosh r, nu = e^{i phi} sinh r, which gives a stable
    forward recurrence for the amplitudes.
    """
    mu = np.cosh(r)
    nu = np.exp(1j * phi) * np.sinh(r)
    gamma = mu * alpha + nu * np.conj(alpha)
    amps = np.zeros(n_levels, dtype=complex)
    amps[0] = 1.0
    if n_levels > 1:
        amps[1] = gamma / mu
    for n in range(1, n_levels - 1):
        amps[n + 1] = (gamma * amps[n] - nu * np.sqrt(n) * amps[n - 1]) / (
            mu * np.sqrt(n + 1)
        )
    return amps


def _truncate_with_leakage(
    amps_ext: np.ndarray, dim: int, tail_tol: float, what: str
) -> tuple[np.ndarray, float]:
    total = float(np.sum(np.abs(amps_ext) ** 2))
    if total == 0.0:
        raise ValueError(f"{what}: zero vector")
    leak = float(np.sum(np.abs(amps_ext[dim:]) ** 2)) / total
    if leak > tail_tol:
        raise TruncationError(f"{what} leaks {leak:.3e} > {tail_tol:.1e} at dim {dim}")
    kept = amps_ext[:dim]
    return kept / np.linalg.norm(kept), leak


def gaussian_pure(
    params: GaussianPureParams,
    cutoff: FockCutoff | int,
    r_max: float = DEFAULT_R_MAX,
    tail_tol: float = STATE_TAIL_TOL,
) -> PureState:
    """Pure Gaussian state D(alpha) S(r e^{i phi}) |0>."""
    cutoff = as_cutoff(cutoff)
    if params.r > r_max:
        raise ValueError(f"squeezing r={params.r} exceeds r_max={r_max}")
    n_ext = 2 * cutoff.dim + 32
    amps = squeezed_coherent_amps(params.alpha, params.r, params.phi, n_ext)
    kept, leak = _truncate_with_leakage(amps, cutoff.dim, tail_tol, "gaussian_pure")
    return PureState(kept, cutoff, leakage=leak)


def cat(
    alpha: complex,
    sign: int,
    cutoff: FockCutoff | int,
    tail_tol: float = STATE_TAIL_TOL,
) -> PureState:
    """Normalized |alpha> + sign |-alpha>; sign=-1 has odd Fock support."""
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    cutoff = as_cutoff(cutoff)
    n_ext = cutoff.dim + 64
    base = _coherent_amps(alpha, n_ext)
    parity = (-1.0) ** np.arange(n_ext)
    amps = base * (1.0 + sign * parity)
    kept, leak = _truncate_with_leakage(amps, cutoff.dim, tail_tol, "cat")
    return PureState(kept, cutoff, leakage=leak)


def photon_subtracted_squeezed(
    r: float,
    cutoff: FockCutoff | int,
    tail_tol: float = STATE_TAIL_TOL,
) -> PureState:
    """Normalized a S(r)|0>; supported on odd Fock levels only."""
    cutoff = as_cutoff(cutoff)
    if r <= 0:
        raise ValueError("photon subtraction from vacuum (r=0) gives the zero vector")
    n_ext = 2 * cutoff.dim + 32
    sq = squeezed_coherent_amps(0.0, r, 0.0, n_ext + 1)
    sub = np.sqrt(np.arange(1, n_ext + 1)) * sq[1:]
    kept, leak = _truncate_with_leakage(sub, cutoff.dim, tail_tol, "photon_subtracted_squeezed")
    return PureState(kept, cutoff, leakage=leak)


def thermal(nbar: float, cutoff: FockCutoff | int) -> DensityMatrix:
    """Thermal state with mean photon number nbar, renormalized."""
    if nbar < 0:
        raise ValueError("nbar must be nonnegative")
    cutoff = as_cutoff(cutoff)
    if nbar == 0:
        return fock(0, cutoff).to_density()
    ratio = nbar / (nbar + 1.0)
    probs = ratio ** np.arange(cutoff.dim)
    leak = float(ratio ** cutoff.dim)  # exact geometric tail
    probs /= probs.sum()
    return DensityMatrix(np.diag(probs).astype(complex), cutoff, leakage=leak)


def _gkp_wavefunction(params: GkpParams, window: int):
    """Damped comb wavefunction evaluator and its peak data.

    The ideal square-lattice codeword is a comb of position eigenstates at
    x = (2s + logical) sqrt(pi).  Acting with exp(-eps n) via the harmonic
    oscillator heat kernel turns each delta peak into a Gaussian of variance
    sigma^2 = tanh(eps), centered at the shrunk lattice point y/cosh(eps),
    with envelope weight exp(-y^2 tanh(eps)/2).
    """
    eps = params.epsilon
    sigma2 = np.tanh(eps)
    shrink = np.cosh(eps)
    if params.logical == 0:
        peaks = 2.0 * np.arange(-window, window + 1, dtype=float) * SQRT_PI
    else:
        peaks = (2.0 * np.arange(-window, window, dtype=float) + 1.0) * SQRT_PI
    envelope = np.exp(-0.5 * sigma2 * peaks**2)
    centers = peaks / shrink

    def psi(x: np.ndarray) -> np.ndarray:
        expo = -((x[:, None] - centers[None, :]) ** 2) / (2.0 * sigma2)
        return np.exp(expo) @ envelope

    return psi, envelope


def _gkp_amps(params: GkpParams, window: int, n_levels: int) -> np.ndarray:
    """Fock amplitudes of the damped comb by Gauss-Hermite projection.

    4 * n_levels nodes integrate products of Hermite functions of degree
    < 2 * n_levels near-exactly.
    """
    psi, _ = _gkp_wavefunction(params, window)
    nodes, lam = hermgauss_total(4 * n_levels)
    vals = psi(nodes)
    basis = hermite_functions(n_levels, nodes)
    amps = basis @ (lam * vals)
    return amps


def _adaptive_window(params: GkpParams) -> int:
    # envelope weight exp(-2 pi s^2 tanh eps) < 1e-16 at the first excluded shell
    sigma2 = np.tanh(params.epsilon)
    s = int(np.ceil(np.sqrt(37.0 / (2.0 * np.pi * sigma2)))) + 1
    return max(s, 2)


def gkp_comb(params: GkpParams, window: int | None = None):
    """Peak centers, envelope weights and peak variance of the damped comb.

    The damped codeword wavefunction is exactly
    sum_s w_s exp(-(x - mu_s)^2 / (2 sigma^2)) with sigma^2 = tanh(eps),
    mu_s the lattice points shrunk by cosh(eps) and w_s the Gaussian
    envelope; this is the data consumed by the exact Wigner evaluator.
    """
    if window is None:
        window = params.peak_window if params.peak_window is not None else _adaptive_window(params)
    _, envelope = _gkp_wavefunction(params, window)
    eps = params.epsilon
    if params.logical == 0:
        peaks = 2.0 * np.arange(-window, window + 1, dtype=float) * SQRT_PI
    else:
        peaks = (2.0 * np.arange(-window, window, dtype=float) + 1.0) * SQRT_PI
    centers = peaks / np.cosh(eps)
    return centers, envelope, float(np.tanh(eps))


def gkp_damped(
    params: GkpParams,
    cutoff: FockCutoff | int,
    tail_tol: float = STATE_TAIL_TOL,
) -> PureState:
    """Finite-energy square-lattice codeword exp(-eps n)|logical>, normalized.

    Raises TruncationError when the Fock tail above the cutoff exceeds
    ``tail_tol`` and ValueError when an explicit peak window is too small
    (the S -> S+2 refinement still moves the state).
    """
    cutoff = as_cutoff(cutoff)
    window = params.peak_window if params.peak_window is not None else _adaptive_window(params)
    n_ext = cutoff.dim + max(16, cutoff.dim // 4)
    amps = _gkp_amps(params, window, n_ext)
    amps_wide = _gkp_amps(params, window + 2, n_ext)
    nrm = np.linalg.norm(amps)
    nrm_wide = np.linalg.norm(amps_wide)
    drift = float(np.max(np.abs(amps / nrm - amps_wide / nrm_wide)))
    if drift > 1e-8:
        raise ValueError(
            f"peak_window {window} too small: S -> S+2 moves amplitudes by {drift:.3e}"
        )
    amps = np.real(amps_wide)  # all-real construction; wide window is at least as good
    kept, leak = _truncate_with_leakage(
        amps.astype(complex), cutoff.dim, tail_tol, "gkp_damped"
    )
    return PureState(kept, cutoff, leakage=leak)
