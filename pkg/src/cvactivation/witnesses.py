"""Feasible witness families for the three free sets.

A witness is a bounded Hermitian operator with nonnegative expectation on
every free state; rescaled into the box -n I <= W <= m I it certifies a
lower bound on the corresponding resource monotone through its negative
expectation value.  Families implemented here:

* displaced parity, feasible against Wigner-positive states;
* pure-state projector witnesses lam*I - |psi><psi| with lam the maximal
  Gaussian fidelity of psi, feasible against the convex Gaussian hull;
* their two-copy lifts lam^2*I - |psi><psi|^(x2), feasible against convex
  mixtures of identical Gaussian pairs;
* explicit caller-supplied operators carrying a feasibility certificate
  tag (the engine verifies the box, never feasibility).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.optimize import minimize

from .errors import BudgetError, TruncationError
from .fock import (
    DEFAULT_BUDGET,
    DensityMatrix,
    FockCutoff,
    OperatorMatrix,
    PureState,
    as_cutoff,
    identity_op,
    tensor,
)
from .states import DEFAULT_R_MAX, GaussianPureParams, gaussian_pure
from .wigner import displaced_parity_matrix

BOX_TOL = 1e-9


class FreeSet(str, Enum):
    WIGNER_POSITIVE = "wigner_positive"
    GAUSSIAN_HULL = "gaussian_hull"
    GAUSSIAN_TWO_COPY = "gaussian_two_copy"


@dataclass(frozen=True)
class WitnessBox:
    """Operator interval -n I <= W <= m I."""

    n: float = 1.0
    m: float = 1.0

    def __post_init__(self):
        if self.n <= 0 or self.m <= 0:
            raise ValueError("box bounds must be positive")


@dataclass(frozen=True)
class DisplacedParity:
    alpha: complex = 0.0


@dataclass(frozen=True)
class PureProjector:
    psi: PureState
    lam: float | None = None


@dataclass(frozen=True)
class TwoCopyProjector:
    psi: PureState
    lam: float | None = None


@dataclass(frozen=True)
class ExplicitWitness:
    operator: OperatorMatrix
    certificate: str


Family = DisplacedParity | PureProjector | TwoCopyProjector | ExplicitWitness


@dataclass(frozen=True)
class WitnessSpec:
    """A tagged member of a feasible witness family with its box."""

    family: Family
    free_set: FreeSet
    box: WitnessBox = WitnessBox()

    def __post_init__(self):
        two_copy = isinstance(self.family, TwoCopyProjector)
        if two_copy and self.free_set is not FreeSet.GAUSSIAN_TWO_COPY:
            raise ValueError("two-copy projectors witness the two-copy Gaussian set")
        if isinstance(self.family, DisplacedParity) and self.free_set is FreeSet.GAUSSIAN_TWO_COPY:
            raise ValueError("single-copy parity witnesses need a single-copy free set")

    @property
    def is_two_copy(self) -> bool:
        return isinstance(self.family, TwoCopyProjector)

    def describe(self) -> dict:
        fam = self.family
        if isinstance(fam, DisplacedParity):
            detail = {
                "family": "displaced_parity",
                "alpha": [fam.alpha.real, fam.alpha.imag],
            }
        elif isinstance(fam, PureProjector):
            detail = {"family": "pure_projector", "lambda": fam.lam}
        elif isinstance(fam, TwoCopyProjector):
            detail = {"family": "two_copy_projector", "lambda": fam.lam}
        else:
            detail = {"family": "explicit", "certificate": fam.certificate}
        detail["free_set"] = self.free_set.value
        detail["box"] = [self.box.n, self.box.m]
        return detail


def _require_lam(fam) -> float:
    if fam.lam is None:
        raise ValueError(
            "projector witness needs the maximal Gaussian fidelity; "
            "supply lam or compute it with gaussian_fidelity"
        )
    return float(fam.lam)


def _assert_box(mat: np.ndarray, box: WitnessBox) -> None:
    vals = np.linalg.eigvalsh(mat)
    if vals[0] < -box.n - BOX_TOL or vals[-1] > box.m + BOX_TOL:
        raise ValueError(
            f"witness spectrum [{vals[0]:.6f}, {vals[-1]:.6f}] outside box "
            f"[-{box.n}, {box.m}]"
        )


def witness_matrix(
    spec: WitnessSpec, cutoff: FockCutoff | int, budget: int = DEFAULT_BUDGET
) -> OperatorMatrix:
    """Materialize the witness operator; eigenvalues are asserted in the box."""
    cutoff = as_cutoff(cutoff)
    fam = spec.family
    if isinstance(fam, DisplacedParity):
        op = displaced_parity_matrix(fam.alpha, cutoff)
        _assert_box(op.matrix, spec.box)
        return op
    if isinstance(fam, PureProjector):
        lam = _require_lam(fam)
        if fam.psi.dim != cutoff.dim:
            raise ValueError("projector state cutoff mismatch")
        mat = lam * np.eye(cutoff.dim) - np.outer(
            fam.psi.amplitudes, fam.psi.amplitudes.conj()
        )
        _assert_box(mat, spec.box)
        return OperatorMatrix(mat, hermitian=True, norm_bound=1.0)
    if isinstance(fam, TwoCopyProjector):
        lam = _require_lam(fam)
        if fam.psi.dim != cutoff.dim:
            raise ValueError("projector state cutoff mismatch")
        prod_dim = cutoff.dim**2
        if prod_dim > budget:
            raise BudgetError(f"two-copy dim {prod_dim} exceeds budget {budget}")
        proj = np.outer(fam.psi.amplitudes, fam.psi.amplitudes.conj())
        mat = lam**2 * np.eye(prod_dim) - np.kron(proj, proj)
        _assert_box(mat, spec.box)
        return OperatorMatrix(mat, hermitian=True, norm_bound=1.0)
    op = fam.operator
    _assert_box(op.matrix, spec.box)
    return op


def witness_value(spec: WitnessSpec, rho: DensityMatrix) -> float:
    """Signed violation -Tr(W rho); positive iff the witness detects rho.

    Two-copy specs are evaluated on rho (x) rho through the factored
    expectation <psi|rho|psi>^2, so no product-space matrix is built.
    """
    fam = spec.family
    if isinstance(fam, TwoCopyProjector):
        lam = _require_lam(fam)
        if fam.psi.dim != rho.dim:
            raise ValueError("projector state cutoff mismatch")
        overlap = float(
            np.real(
                np.vdot(fam.psi.amplitudes, rho.matrix @ fam.psi.amplitudes)
            )
        )
        return overlap**2 - lam**2
    if isinstance(fam, PureProjector):
        lam = _require_lam(fam)
        if fam.psi.dim != rho.dim:
            raise ValueError("projector state cutoff mismatch")
        overlap = float(
            np.real(np.vdot(fam.psi.amplitudes, rho.matrix @ fam.psi.amplitudes))
        )
        return overlap - lam
    op = witness_matrix(spec, rho.cutoff)
    if op.dim != rho.dim:
        raise ValueError("witness dimension mismatch")
    val = rho.expectation(op)
    if abs(val.imag) > 1e-10:
        raise ValueError(f"witness expectation has imaginary part {val.imag:.3e}")
    return -val.real


def rescale_to_box(op: OperatorMatrix, box: WitnessBox) -> OperatorMatrix:
    """Scale by t = min(n, m)/norm_bound; preserves every expectation sign."""
    if op.norm_bound == 0 or not np.any(op.matrix):
        raise ValueError("cannot rescale the zero operator")
    t = min(box.n, box.m) / op.norm_bound
    return OperatorMatrix(t * op.matrix, hermitian=op.hermitian, norm_bound=min(box.n, box.m))


def lift_witness(op: OperatorMatrix, budget: int = DEFAULT_BUDGET) -> OperatorMatrix:
    """W (x) I on the product space; expectation on rho^(x2) equals that of W."""
    return tensor(op, identity_op(op.dim), budget=budget)


@dataclass(frozen=True)
class GaussianFitConfig:
    """Multistart Nelder-Mead settings for the Gaussian-fidelity search."""

    r_max: float = DEFAULT_R_MAX
    n_starts: int = 16
    seeds: tuple[int, ...] = (0, 1, 2, 3)
    maxiter: int = 400
    fatol: float = 1e-12
    xatol: float = 1e-8


@dataclass(frozen=True)
class GaussianFidelityResult:
    """Best found fidelity sup |<psi|D(a)S(r e^{i phi})|0>|^2 with provenance."""

    max_fidelity: float
    argmax: GaussianPureParams
    multistart_spread: float
    n_converged: int

    def __post_init__(self):
        if not 0.0 <= self.max_fidelity <= 1.0 + 1e-12:
            raise ValueError("fidelity outside [0, 1]")
        object.__setattr__(self, "max_fidelity", min(float(self.max_fidelity), 1.0))

    def to_dict(self) -> dict:
        return {
            "max_gaussian_fidelity": self.max_fidelity,
            "argmax": {
                "alpha": [self.argmax.alpha.real, self.argmax.alpha.imag],
                "r": self.argmax.r,
                "phi": self.argmax.phi,
            },
            "multistart_spread": self.multistart_spread,
            "n_converged": self.n_converged,
        }


def _informed_starts(psi: PureState, cfg: GaussianFitConfig) -> list[np.ndarray]:
    amps = psi.amplitudes
    dim = psi.dim
    idx = np.arange(dim)
    a_mean = complex(np.vdot(amps[:-1], np.sqrt(idx[1:]) * amps[1:]))
    starts = [
        np.array([a_mean.real, a_mean.imag, 0.0, 0.0]),
        np.array([0.0, 0.0, 0.0, 0.0]),
        np.array([a_mean.real, a_mean.imag, 0.4, 0.0]),
        np.array([a_mean.real, a_mean.imag, 0.4, np.pi]),
        np.array([a_mean.real, a_mean.imag, 0.4, np.pi / 2]),
        np.array([abs(a_mean) + 0.5, 0.0, 0.2, 0.0]),
    ]
    rngs = [np.random.default_rng(seed) for seed in cfg.seeds] or [
        np.random.default_rng(0)
    ]
    i = 0
    while len(starts) < cfg.n_starts:
        rng = rngs[i % len(rngs)]
        i += 1
        starts.append(
            np.array(
                [
                    a_mean.real + rng.normal(0.0, 0.7),
                    a_mean.imag + rng.normal(0.0, 0.7),
                    rng.uniform(0.0, min(cfg.r_max, 1.2)),
                    rng.uniform(0.0, 2.0 * np.pi),
                ]
            )
        )
    return starts[: cfg.n_starts]


def gaussian_fidelity(
    psi: PureState, cfg: GaussianFitConfig | None = None
) -> GaussianFidelityResult:
    """Maximal fidelity of psi with a pure Gaussian state.

    Pure candidates suffice: the fidelity is linear in the Gaussian state
    and every mixed Gaussian is a mixture of pure ones.  Deterministic
    multistart Nelder-Mead over (Re alpha, Im alpha, r, phi); the spread
    between converged starts is reported so optimizer traps are visible.
    """
    if cfg is None:
        cfg = GaussianFitConfig()
    if psi.tail_mass(psi.dim - max(2, psi.dim // 10)) > 1e-4:
        raise TruncationError(
            "state occupies the top Fock levels; raise the cutoff before "
            "optimizing the Gaussian fidelity"
        )
    amps = psi.amplitudes

    def objective(params: np.ndarray) -> float:
        re_a, im_a, r, phi = params
        r = min(abs(r), cfg.r_max)
        try:
            cand = gaussian_pure(
                GaussianPureParams(complex(re_a, im_a), r, phi % (2.0 * np.pi)),
                psi.cutoff,
                r_max=cfg.r_max,
                tail_tol=1e-4,
            )
        except TruncationError:
            return 0.0
        return -abs(np.vdot(amps, cand.amplitudes)) ** 2

    best: tuple[float, np.ndarray] | None = None
    converged_vals = []
    for start in _informed_starts(psi, cfg):
        res = minimize(
            objective,
            x0=start,
            method="Nelder-Mead",
            options={
                "maxiter": cfg.maxiter,
                "fatol": cfg.fatol,
                "xatol": cfg.xatol,
            },
        )
        fid = -float(res.fun)
        if res.success:
            converged_vals.append(fid)
        if best is None or fid > best[0]:
            best = (fid, res.x)
    assert best is not None
    fid, x = best
    spread = float(max(converged_vals) - min(converged_vals)) if converged_vals else 0.0
    params = GaussianPureParams(
        complex(x[0], x[1]), min(abs(x[2]), cfg.r_max), x[3] % (2.0 * np.pi)
    )
    return GaussianFidelityResult(
        max_fidelity=max(0.0, min(fid, 1.0)),
        argmax=params,
        multistart_spread=spread,
        n_converged=len(converged_vals),
    )


def displaced_parity_spec(
    alpha: complex,
    free_set: FreeSet = FreeSet.WIGNER_POSITIVE,
    box: WitnessBox = WitnessBox(),
) -> WitnessSpec:
    return WitnessSpec(DisplacedParity(complex(alpha)), free_set, box)


def pure_projector_spec(
    psi: PureState,
    lam: float,
    free_set: FreeSet = FreeSet.GAUSSIAN_HULL,
    box: WitnessBox = WitnessBox(),
) -> WitnessSpec:
    return WitnessSpec(PureProjector(psi, float(lam)), free_set, box)


def two_copy_projector_spec(
    psi: PureState, lam: float, box: WitnessBox = WitnessBox()
) -> WitnessSpec:
    return WitnessSpec(TwoCopyProjector(psi, float(lam)), FreeSet.GAUSSIAN_TWO_COPY, box)


def explicit_spec(
    operator: OperatorMatrix,
    free_set: FreeSet,
    certificate: str,
    box: WitnessBox = WitnessBox(),
) -> WitnessSpec:
    """Uncertifiable witnesses must declare their provenance.

    The certificate travels with every result produced from the spec, so
    downstream bounds are labeled conditional on the caller's claim.
    """
    return WitnessSpec(ExplicitWitness(operator, certificate), free_set, box)
