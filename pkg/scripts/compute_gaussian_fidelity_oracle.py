#!/usr/bin/env python3
"""Dense-grid oracle for the maximal Gaussian fidelity of Fock states.

Brute-force scan over (|alpha|, r, phi) followed by local grid refinement;
the value frozen into tests/test_witnesses.py (FOCK1_GAUSSIAN_FIDELITY)
comes from this script.  The scan is independent of the multistart
optimizer it calibrates: only the state constructor is shared.
"""

import argparse

import numpy as np


def batch_fock_overlap(target_n, alphas, rs, phis, n_ext=160):
    """|<n|D(a)S(r e^{i phi})|0>|^2 for batched parameters.

    Same annihilator recurrence as the library, carried with a running
    norm so arbitrarily large batches fit in memory.
    """
    mu = np.cosh(rs)
    nu = np.exp(1j * phis) * np.sinh(rs)
    gamma = mu * alphas + nu * np.conj(alphas)
    c_prev = np.ones_like(gamma)
    c_cur = gamma / mu
    norm = np.abs(c_prev) ** 2 + np.abs(c_cur) ** 2
    keep = c_prev.copy() if target_n == 0 else (c_cur.copy() if target_n == 1 else None)
    for n in range(1, n_ext - 1):
        c_next = (gamma * c_cur - nu * np.sqrt(n) * c_prev) / (mu * np.sqrt(n + 1))
        norm += np.abs(c_next) ** 2
        if n + 1 == target_n:
            keep = c_next.copy()
        c_prev, c_cur = c_cur, c_next
    return np.abs(keep) ** 2 / norm


def scan(target_n, mag_max=2.0, r_max=1.5):
    mags = np.linspace(0.0, mag_max, 81)
    rs = np.linspace(0.0, r_max, 61)
    phis = np.linspace(0.0, 2.0 * np.pi, 120, endpoint=False)
    grid_a, grid_r, grid_p = np.meshgrid(mags, rs, phis, indexing="ij")
    vals = batch_fock_overlap(
        target_n, grid_a.ravel().astype(complex), grid_r.ravel(), grid_p.ravel()
    )
    best = int(np.argmax(vals))
    a0, r0, p0 = grid_a.ravel()[best], grid_r.ravel()[best], grid_p.ravel()[best]
    value = vals[best]
    for scale in (0.05, 0.01, 0.002, 0.0004):
        mags2 = np.linspace(max(0.0, a0 - scale), a0 + scale, 21)
        rs2 = np.linspace(max(0.0, r0 - scale), r0 + scale, 21)
        phis2 = np.linspace(p0 - scale, p0 + scale, 21)
        ga, gr, gp = np.meshgrid(mags2, rs2, phis2, indexing="ij")
        vals2 = batch_fock_overlap(
            target_n, ga.ravel().astype(complex), gr.ravel(), gp.ravel()
        )
        best = int(np.argmax(vals2))
        a0, r0, p0 = ga.ravel()[best], gr.ravel()[best], gp.ravel()[best]
        value = vals2[best]
    return value, (a0, r0, p0)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--fock", type=int, default=1, help="target Fock level")
    args = parser.parse_args()
    value, (mag, r, phi) = scan(args.fock)
    print(f"max Gaussian fidelity of |{args.fock}>: {value:.10f}")
    print(f"argmax: displacement magnitude {mag:.6f}, r {r:.6f}, phi {phi:.6f}")


if __name__ == "__main__":
    main()
