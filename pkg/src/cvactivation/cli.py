"""Command-line drivers that emit machine-readable sweep and analysis data.

Subcommands: wigner, negativity-depth, loss-sweep, gkp-sweep, pure-bounds,
activate, boundary-mix, property-suite.  Every output embeds the resolved
configuration, its hash, the cutoff and the maximal truncation leakage, so
identical configurations reproduce byte-identical files.

Exit codes: 0 success, 2 configuration error, 3 truncation or budget
error, 4 invariant failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .activation import activate_entanglement, activate_steering
from .channels import (
    GaussNoiseParams,
    damping,
    gaussian_noise,
    gkp_ec_round,
    pure_loss,
)
from .errors import BudgetError, ConfigError, InvariantError, TruncationError
from .fock import (
    DEFAULT_BUDGET,
    DensityMatrix,
    FockCutoff,
    PureState,
    parity_op,
    pure_fidelity,
)
from .monotones import (
    FamilySearchConfig,
    exact_boundary_mixture,
    lower_bound,
    property_suite,
    pure_state_bounds,
)
from .states import (
    GaussianPureParams,
    GkpParams,
    cat,
    coherent,
    fock,
    gaussian_pure,
    gkp_comb,
    gkp_damped,
    photon_subtracted_squeezed,
    thermal,
)
from .wigner import (
    DepthSearchConfig,
    negativity_depth,
    negativity_depth_fn,
    wigner_grid,
    wigner_pure_comb,
)
from .witnesses import (
    FreeSet,
    GaussianFitConfig,
    WitnessSpec,
    displaced_parity_spec,
    gaussian_fidelity,
    pure_projector_spec,
    two_copy_projector_spec,
)

TOOL_VERSION = __version__


# ---------------------------------------------------------------------------
# configuration plumbing


def _canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _config_hash(cfg: dict) -> str:
    return hashlib.sha256(_canonical(cfg).encode()).hexdigest()[:16]


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config file must hold a JSON object")
    return cfg


def _resolve(args: argparse.Namespace, defaults: dict) -> dict:
    cfg = dict(defaults)
    cfg.update(_load_config(args.config))
    if args.cutoff is not None:
        cfg["cutoff"] = args.cutoff
    if args.out is not None:
        cfg["out"] = args.out
    if args.budget is not None:
        cfg["budget"] = args.budget
    if args.seed_list is not None:
        try:
            cfg["seeds"] = [int(s) for s in args.seed_list.split(",") if s.strip()]
        except ValueError as exc:
            raise ConfigError(f"bad --seed-list: {args.seed_list}") from exc
    unknown = set(cfg) - set(defaults)
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    return cfg


def _metadata(cfg: dict, max_leakage: float) -> dict:
    return {
        "tool_version": TOOL_VERSION,
        "config_hash": _config_hash(cfg),
        "config": cfg,
        "cutoff": cfg.get("cutoff"),
        "max_leakage": float(max_leakage),
    }


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(path: str, columns, rows, metadata: dict) -> None:
    lines = [f"# {key}: {_canonical(val)}" for key, val in sorted(metadata.items())]
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_json(path: str, payload: dict, metadata: dict) -> None:
    doc = {"metadata": metadata, "result": payload}
    Path(path).write_text(
        json.dumps(doc, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )


# ---------------------------------------------------------------------------
# spec parsing


def _parse_pure_state(spec, cutoff: int) -> PureState:
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ConfigError(f"bad state spec: {spec}")
    kind = spec["kind"]
    try:
        if kind == "fock":
            return fock(int(spec.get("n", 0)), cutoff)
        if kind == "coherent":
            return coherent(_parse_complex(spec.get("alpha", 0)), cutoff)
        if kind == "cat":
            return cat(
                _parse_complex(spec.get("alpha", 1.0)), int(spec.get("sign", -1)), cutoff
            )
        if kind == "photon_subtracted_squeezed":
            return photon_subtracted_squeezed(float(spec.get("r", 0.5)), cutoff)
        if kind == "gaussian":
            return gaussian_pure(
                GaussianPureParams(
                    _parse_complex(spec.get("alpha", 0)),
                    float(spec.get("r", 0.0)),
                    float(spec.get("phi", 0.0)),
                ),
                cutoff,
            )
        if kind == "gkp":
            return gkp_damped(_parse_gkp(spec), cutoff, tail_tol=float(spec.get("tail_tol", 1e-6)))
    except (ValueError, TypeError) as exc:
        if isinstance(exc, (TruncationError, BudgetError)):
            raise
        raise ConfigError(f"bad state spec {spec}: {exc}") from exc
    raise ConfigError(f"unknown pure-state kind: {kind}")


def _parse_gkp(spec: dict) -> GkpParams:
    logical = int(spec.get("logical", 0))
    window = spec.get("peak_window")
    if "squeezing_db" in spec:
        return GkpParams.from_db(float(spec["squeezing_db"]), logical, window)
    return GkpParams(float(spec.get("epsilon", 0.2)), logical, window)


def _parse_complex(val) -> complex:
    if isinstance(val, (int, float)):
        return complex(val)
    if isinstance(val, (list, tuple)) and len(val) == 2:
        return complex(float(val[0]), float(val[1]))
    raise ConfigError(f"bad complex literal: {val}")


def _parse_state(spec, cutoff: int) -> DensityMatrix:
    if isinstance(spec, dict) and spec.get("kind") == "thermal":
        return thermal(float(spec.get("nbar", 1.0)), cutoff)
    return _parse_pure_state(spec, cutoff).to_density()


def _parse_channel(spec, cutoff: int):
    if spec is None:
        return None
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ConfigError(f"bad channel spec: {spec}")
    kind = spec["kind"]
    if kind == "loss":
        return pure_loss(float(spec.get("eta", 1.0)), cutoff).apply
    if kind == "gaussian_noise":
        return gaussian_noise(
            GaussNoiseParams(float(spec.get("sigma2", 0.05)), int(spec.get("quad_order", 15))),
            cutoff,
        ).apply
    if kind == "damping":
        return damping(float(spec.get("epsilon", 0.1)), cutoff).apply
    raise ConfigError(f"unknown channel kind: {kind}")


def _parse_witness(spec, cutoff: int, seeds) -> WitnessSpec:
    if not isinstance(spec, dict) or "family" not in spec:
        raise ConfigError(f"bad witness spec: {spec}")
    family = spec["family"]
    if family in ("parity", "displaced_parity"):
        return displaced_parity_spec(_parse_complex(spec.get("alpha", 0)))
    if family in ("pure_projector", "two_copy_projector"):
        psi = _parse_pure_state(spec.get("state"), cutoff)
        lam = spec.get("lambda")
        if lam is None:
            lam = gaussian_fidelity(psi, GaussianFitConfig(seeds=tuple(seeds))).max_fidelity
        if family == "pure_projector":
            return pure_projector_spec(psi, float(lam))
        return two_copy_projector_spec(psi, float(lam))
    raise ConfigError(f"unknown witness family: {family}")


# ---------------------------------------------------------------------------
# subcommands


def run_wigner(cfg: dict) -> int:
    rho = _parse_state(cfg["state"], cfg["cutoff"])
    channel = _parse_channel(cfg.get("channel"), cfg["cutoff"])
    if channel is not None:
        rho = channel(rho)
    grid = wigner_grid(
        rho,
        radius=cfg.get("radius"),
        resolution=int(cfg["resolution"]),
        validate_marginal=bool(cfg.get("validate_marginal", True)),
    )
    meta = _metadata(cfg, grid.leakage)
    meta["dropped_points"] = int(grid.dropped.size)
    write_csv(cfg["out"], ("re_alpha", "im_alpha", "w_value"), grid.to_rows(), meta)
    return 0


def run_negativity_depth(cfg: dict) -> int:
    rho = _parse_state(cfg["state"], cfg["cutoff"])
    channel = _parse_channel(cfg.get("channel"), cfg["cutoff"])
    if channel is not None:
        rho = channel(rho)
    depth_cfg = DepthSearchConfig(
        radius=cfg.get("radius"), resolution=int(cfg["resolution"])
    )
    res = negativity_depth(rho, depth_cfg)
    write_json(
        cfg["out"],
        {
            "depth": res.depth,
            "argmin_alpha": [res.argmin_alpha.real, res.argmin_alpha.imag],
            "refinement_converged": res.refinement_converged,
        },
        _metadata(cfg, rho.leakage),
    )
    return 0


def run_loss_sweep(cfg: dict) -> int:
    cutoff = int(cfg["cutoff"])
    n = int(cfg["fock_n"])
    pi = parity_op(cutoff)
    input_state = fock(n, cutoff).to_density()
    rows = []
    max_leak = 0.0
    for eta in sorted(float(e) for e in cfg["etas"]):
        rho = pure_loss(eta, cutoff).apply(input_state)
        max_leak = max(max_leak, rho.leakage)
        parity_exp = float(np.real(rho.expectation(pi)))
        bound = lower_bound(
            rho,
            FreeSet.WIGNER_POSITIVE,
            cfg=FamilySearchConfig(
                depth=DepthSearchConfig(resolution=int(cfg["resolution"]))
            ),
        )
        ent = activate_entanglement(rho, bound.witness)
        steer = activate_steering(rho, bound.witness)
        rows.append(
            (
                eta,
                parity_exp,
                bound.lower,
                ent.entanglement,
                steer.steering,
                steer.classification.value,
            )
        )
    write_csv(
        cfg["out"],
        ("eta", "parity_expectation", "wn_lower_bound", "activated_E", "activated_S", "classification"),
        rows,
        _metadata(cfg, max_leak),
    )
    return 0


def _gkp_input_activation(params: GkpParams, depth_cfg: DepthSearchConfig, radius: float) -> float:
    """Best displaced-parity activation on the exact (untruncated) codeword."""
    centers, envelope, sigma2 = gkp_comb(params)
    res = negativity_depth_fn(
        lambda pts: wigner_pure_comb(centers, envelope, sigma2, pts), radius, depth_cfg
    )
    return (math.pi / 4.0) * res.depth


def run_gkp_sweep(cfg: dict) -> int:
    eta = float(cfg["eta"])
    if not 0.0 <= eta <= 1.0:
        raise ConfigError("eta must lie in [0, 1]")
    cutoff = int(cfg["cutoff"])
    budget = int(cfg["budget"])
    depth_cfg = DepthSearchConfig(
        radius=float(cfg["depth_radius"]), resolution=int(cfg["depth_resolution"])
    )
    loss_model = cfg["loss_model"]
    if loss_model not in ("bare", "amplified"):
        raise ConfigError("loss_model must be 'bare' or 'amplified'")
    ec_on = bool(cfg["ec"])
    tail_tol = float(cfg["tail_tol_two"])
    dbs = sorted(float(d) for d in cfg["squeezing_db"])

    if loss_model == "bare" or eta == 1.0:
        loss_apply = None if eta == 1.0 else pure_loss(eta, cutoff).apply
    else:
        sigma2 = (1.0 - eta) / eta  # loss followed by gain-1/eta amplification
        loss_apply = gaussian_noise(
            GaussNoiseParams(sigma2, int(cfg["quad_order"])), cutoff
        ).apply

    rows = []
    max_leak = 0.0
    for db in dbs:
        params = GkpParams.from_db(db)
        e_in = _gkp_input_activation(params, depth_cfg, float(cfg["depth_radius"]))
        code = gkp_damped(params, cutoff, tail_tol=tail_tol)
        anc_db = cfg.get("ancilla_db")
        anc_params = params if anc_db is None else GkpParams.from_db(float(anc_db))
        state = code.to_density()
        if loss_apply is not None:
            state = loss_apply(state)
        if ec_on:
            ancilla = gkp_damped(anc_params, cutoff, tail_tol=tail_tol)
            state = gkp_ec_round(state, ancilla, budget=budget)
        max_leak = max(max_leak, code.leakage, state.leakage)
        d_out = negativity_depth(state, depth_cfg)
        e_out = (math.pi / 4.0) * d_out.depth
        infid = 1.0 - pure_fidelity(code, state)
        rows.append((db, params.epsilon, e_in, e_out, infid, code.leakage))
    write_csv(
        cfg["out"],
        ("squeezing_db", "epsilon", "e_in", "e_out", "infidelity", "codeword_leakage"),
        rows,
        _metadata(cfg, max_leak),
    )
    return 0


def run_pure_bounds(cfg: dict) -> int:
    psi = _parse_pure_state(cfg["state"], cfg["cutoff"])
    fit_cfg = GaussianFitConfig(seeds=tuple(cfg["seeds"]))
    bounds = pure_state_bounds(psi, fit_cfg)
    payload = bounds.to_dict()
    payload["activated_entanglement_floor_gng"] = bounds.gng_lower / 2.0
    payload["activated_entanglement_floor_sng"] = bounds.sng_lower / 2.0
    payload["activated_steering_floor_gng"] = bounds.gng_lower
    payload["activated_steering_floor_sng"] = bounds.sng_lower
    write_json(cfg["out"], payload, _metadata(cfg, psi.leakage))
    return 0


def run_activate(cfg: dict) -> int:
    cutoff = int(cfg["cutoff"])
    rho = _parse_state(cfg["state"], cutoff)
    channel = _parse_channel(cfg.get("channel"), cutoff)
    if channel is not None:
        rho = channel(rho)
    spec = _parse_witness(cfg["witness"], cutoff, cfg["seeds"])
    ent = activate_entanglement(rho, spec, budget=int(cfg["budget"]))
    steer = activate_steering(rho, spec, budget=int(cfg["budget"]))
    write_json(
        cfg["out"],
        {"entanglement_channel": ent.to_dict(), "steering_channel": steer.to_dict()},
        _metadata(cfg, rho.leakage),
    )
    return 0


def run_boundary_mix(cfg: dict) -> int:
    cutoff = int(cfg["cutoff"])
    vac = fock(0, cutoff).to_density()
    one = fock(1, cutoff).to_density()
    sigma = DensityMatrix(0.5 * (vac.matrix + one.matrix), FockCutoff(cutoff))
    rows = exact_boundary_mixture(
        sigma,
        one,
        parity_op(cutoff),
        cfg["t_grid"],
        cfg=FamilySearchConfig(depth=DepthSearchConfig(resolution=int(cfg["resolution"]))),
    )
    write_csv(
        cfg["out"],
        ("t", "exact_value", "searched_lower"),
        [(r.t, r.exact_value, r.searched_lower) for r in rows],
        _metadata(cfg, 0.0),
    )
    return 0


def _default_corpus(cutoff: int):
    one = fock(1, cutoff).to_density()
    states = [
        ("lossy_photon_0.85", pure_loss(0.85, cutoff).apply(one)),
        ("lossy_photon_0.6", pure_loss(0.6, cutoff).apply(one)),
        ("odd_cat_1.2", cat(1.2, -1, cutoff).to_density()),
        ("vacuum", fock(0, cutoff).to_density()),
        (
            "photon_vacuum_mix",
            DensityMatrix(
                0.5 * one.matrix + 0.5 * fock(0, cutoff).to_density().matrix,
                FockCutoff(cutoff),
            ),
        ),
    ]
    return states


def run_property_suite(cfg: dict) -> int:
    cutoff = int(cfg["cutoff"])
    if cfg.get("states"):
        states = [
            (f"state_{i}", _parse_state(s, cutoff)) for i, s in enumerate(cfg["states"])
        ]
    else:
        states = _default_corpus(cutoff)
    from .channels import apply_unitary, phase_rotation

    rot = phase_rotation(0.7, cutoff)
    channels = [
        ("loss_0.9", pure_loss(0.9, cutoff).apply),
        ("gaussian_noise_0.05", gaussian_noise(GaussNoiseParams(0.05, 12), cutoff).apply),
        ("phase_rotation_0.7", lambda rho: apply_unitary(rot, rho)),
    ]
    report = property_suite(
        states,
        channels,
        cfg=FamilySearchConfig(depth=DepthSearchConfig(resolution=int(cfg["resolution"]))),
    )
    max_leak = max(rho.leakage for _, rho in states)
    write_json(cfg["out"], report.to_dict(), _metadata(cfg, max_leak))
    if not report.all_passed:
        raise InvariantError(
            f"{len(report.failures)} property checks failed; see {cfg['out']}"
        )
    return 0


# ---------------------------------------------------------------------------
# argument parsing

_DEFAULTS = {
    "wigner": {
        "state": {"kind": "fock", "n": 1},
        "channel": None,
        "cutoff": 30,
        "radius": None,
        "resolution": 60,
        "validate_marginal": True,
        "out": "wigner.csv",
        "seeds": [0, 1, 2, 3],
        "budget": DEFAULT_BUDGET,
    },
    "negativity-depth": {
        "state": {"kind": "fock", "n": 1},
        "channel": None,
        "cutoff": 30,
        "radius": None,
        "resolution": 40,
        "out": "negativity_depth.json",
        "seeds": [0, 1, 2, 3],
        "budget": DEFAULT_BUDGET,
    },
    "loss-sweep": {
        "etas": [round(0.1 * k, 1) for k in range(11)],
        "fock_n": 1,
        "cutoff": 25,
        "resolution": 40,
        "out": "loss_sweep.csv",
        "seeds": [0, 1, 2, 3],
        "budget": DEFAULT_BUDGET,
    },
    "gkp-sweep": {
        "squeezing_db": [6.0, 8.0, 10.0, 12.0, 14.0, 16.5],
        "eta": 0.9,
        "cutoff": 30,
        "ec": True,
        "loss_model": "bare",
        "quad_order": 15,
        "ancilla_db": None,
        "depth_radius": 2.8,
        "depth_resolution": 35,
        "tail_tol_two": 1.0,
        "out": "gkp_sweep.csv",
        "seeds": [0, 1, 2, 3],
        "budget": DEFAULT_BUDGET,
    },
    "pure-bounds": {
        "state": {"kind": "fock", "n": 1},
        "cutoff": 40,
        "out": "pure_bounds.json",
        "seeds": [0, 1, 2, 3],
        "budget": DEFAULT_BUDGET,
    },
    "activate": {
        "state": {"kind": "fock", "n": 1},
        "channel": None,
        "witness": {"family": "parity"},
        "cutoff": 25,
        "out": "activate.json",
        "seeds": [0, 1, 2, 3],
        "budget": DEFAULT_BUDGET,
    },
    "boundary-mix": {
        "t_grid": [0.0, 0.25, 0.5, 0.75, 1.0],
        "cutoff": 25,
        "resolution": 40,
        "out": "boundary_mix.csv",
        "seeds": [0, 1, 2, 3],
        "budget": DEFAULT_BUDGET,
    },
    "property-suite": {
        "states": None,
        "cutoff": 25,
        "resolution": 35,
        "out": "property_suite.json",
        "seeds": [0, 1, 2, 3],
        "budget": DEFAULT_BUDGET,
    },
}

_RUNNERS = {
    "wigner": run_wigner,
    "negativity-depth": run_negativity_depth,
    "loss-sweep": run_loss_sweep,
    "gkp-sweep": run_gkp_sweep,
    "pure-bounds": run_pure_bounds,
    "activate": run_activate,
    "boundary-mix": run_boundary_mix,
    "property-suite": run_property_suite,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cvactivation",
        description="Witness-based quantification and activation of CV nonclassicality",
    )
    parser.add_argument("--version", action="version", version=TOOL_VERSION)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _RUNNERS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--cutoff", type=int, help="Fock-space cutoff override")
        p.add_argument("--out", help="output path override")
        p.add_argument("--seed-list", help="comma-separated seeds for multistarts")
        p.add_argument("--budget", type=int, help="product-space dimension budget")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _resolve(args, _DEFAULTS[args.command])
        return _RUNNERS[args.command](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (TruncationError, BudgetError) as exc:
        print(f"truncation/budget error: {exc}", file=sys.stderr)
        return 3
    except InvariantError as exc:
        print(f"invariant failure: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    raise SystemExit(main())
