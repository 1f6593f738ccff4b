#!/usr/bin/env python3
"""Smoke test for the sfq_control Python bindings.

Builds the extension module with cargo if needed, loads it from this
directory, and exercises each binding against independently computed
values. Run from anywhere:

    python3 python/smoke_test.py
"""

import math
import shutil
import subprocess
import sys
from pathlib import Path

HERE = Path(__file__).resolve().parent
REPO = HERE.parent
SO_NAME = "sfq_control.so"

# SI constants, written out independently of the Rust crate.
PLANCK_H = 6.62607015e-34
E_CHARGE = 1.602176634e-19
HBAR = 1.054571817e-34
PHI0 = PLANCK_H / (2.0 * E_CHARGE)

checks_run = 0


def check(label, ok, detail=""):
    global checks_run
    checks_run += 1
    if not ok:
        print(f"FAIL — {label}{': ' + detail if detail else ''}")
        sys.exit(1)
    print(f"PASS — {label}{': ' + detail if detail else ''}")


def close(a, b, rel=1e-9, abs_tol=0.0):
    return abs(a - b) <= max(rel * max(abs(a), abs(b)), abs_tol)


def ensure_module():
    target = HERE / SO_NAME
    built = REPO / "target" / "release" / "libsfq_control_py.so"
    try:
        subprocess.run(
            ["cargo", "build", "-p", "sfq-control-py", "--release"],
            cwd=REPO,
            check=True,
            capture_output=True,
        )
    except FileNotFoundError:
        if not target.exists():
            print("FAIL — cargo unavailable and no prebuilt module found")
            sys.exit(1)
        print("note: cargo unavailable, using existing module")
        return
    except subprocess.CalledProcessError as exc:
        print("FAIL — cargo build failed:")
        print(exc.stderr.decode())
        sys.exit(1)
    shutil.copy2(built, target)


def main():
    ensure_module()
    sys.path.insert(0, str(HERE))
    import sfq_control as m

    # Circuit formula: delta_theta = Cc * Phi0 * sqrt(2 w01 / (hbar Cq)).
    cc, cq, f01 = 1.0e-16, 8.0e-14, 5.0e9
    expected = cc * PHI0 * math.sqrt(2.0 * (2.0 * math.pi * f01) / (HBAR * cq))
    got = m.delta_theta_from_circuit(cc, cq, f01)
    check(
        "circuit tip angle matches the closed formula",
        close(got, expected, rel=1e-12),
        f"{got:.12e}",
    )
    params_circuit = m.QubitParams.from_circuit(f01, 4.0e8, cc, cq)
    check(
        "from_circuit agrees with delta_theta_from_circuit",
        close(params_circuit.delta_theta_rad, got, rel=1e-15),
    )

    p1 = m.QubitParams.parameter_set_i()
    check(
        "parameter set I",
        close(p1.omega01_hz, 5.0e9, rel=1e-12)
        and close(p1.alpha_hz, 4.0e8, rel=1e-12)
        and close(p1.delta_theta_rad, math.pi / 30.0, rel=1e-12)
        and close(p1.clock_period_s, 2.0e-10, rel=1e-12),
        repr(p1),
    )

    # Dual pair geometry: one cycle at phi = pi/2 puts pulses at
    # +- phi / omega01 around the cycle center.
    times, areas, pols = m.dual_train(1, math.pi / 2.0, 0.0, p1)
    t_off = (math.pi / 2.0) / (2.0 * math.pi * f01)
    check(
        "dual pair sits symmetrically about the cycle center",
        len(times) == 2
        and close(times[0], -t_off, rel=1e-12)
        and close(times[1], t_off, rel=1e-12)
        and pols == [1, 1]
        and all(close(a, m.PHI0_WB, rel=1e-15) for a in areas),
        f"times = ({times[0]:.3e}, {times[1]:.3e}) s",
    )

    # Tuning law at phi = pi/3: dual/single amplitude ratio = 2 cos(phi) = 1.
    two_phi, ratio = m.tuning_curve([math.pi / 3.0], p1, 30)
    check(
        "tuning ratio equals 2 cos(phi)",
        close(ratio[0], 1.0, rel=0, abs_tol=1e-9),
        f"{ratio[0]:.12f}",
    )

    # Three-level leakage of a resonant 30-pulse pi train (frozen value).
    t, a, pol = m.single_train(30, p1)
    final = m.evolve_ground(t, a, pol, p1)
    check(
        "30-pulse pi train leakage",
        close(final["leakage"], 0.02104706110560702, rel=1e-9),
        f"{final['leakage']:.12f}",
    )
    check(
        "state norm preserved",
        close(sum(final["populations"]), 1.0, rel=0, abs_tol=1e-12),
    )

    # Spectral ratio consistency between the two bindings.
    lr = m.leakage_ratio(t, a, pol, p1)
    a01 = m.spectral_amplitude(t, a, pol, p1, 2.0 * math.pi * f01)
    a12 = m.spectral_amplitude(t, a, pol, p1, 2.0 * math.pi * (f01 - 4.0e8))
    check(
        "leakage ratio equals a12/a01",
        close(lr, a12 / a01, rel=1e-12),
        f"{lr:.12f}",
    )

    # Exact cycle operator (frozen entries at delta_theta = pi/30,
    # phi = pi/4).
    u = m.cycle_unitary(math.pi / 30.0, math.pi / 4.0)
    check(
        "cycle operator entries",
        close(u[0][0].real, -0.9972609476841365, rel=1e-12)
        and close(u[0][0].imag, -0.0027390523158633312, rel=1e-9)
        and close(u[0][1].real, 0.07391278520356671, rel=1e-12),
        f"u00 = {u[0][0]:.6f}",
    )

    # Envelope normalization.
    env = m.gaussian_envelope(30, math.pi, 4.0, math.pi / 30.0)
    check(
        "gaussian envelope sums to the target angle",
        len(env) == 30 and close(sum(env), math.pi, rel=1e-9),
        f"sum = {sum(env):.12f}",
    )

    # Calibration of the six primitives at the default cycle budget.
    gates = m.calibrate(p1)
    names = sorted(gates)
    fid_min = min(g["fidelity"] for g in gates.values())
    check(
        "calibration returns six fine-tuned gates",
        len(gates) == 6
        and all(g["fine_tuned"] for g in gates.values())
        and fid_min > 0.99
        and close(gates["X90"]["psi_rad"], math.pi / 2.0, rel=1e-12)
        and close(gates["Y180"]["psi_rad"], 0.0, rel=0, abs_tol=1e-15),
        f"{names}, min fidelity {fid_min:.5f}",
    )

    # A small benchmarking run: decaying, bounded, and deterministic.
    rb = m.run_rb(p1, mode="dual-fine", lengths=[2, 4, 8], n_random=4, seed=11)
    rb2 = m.run_rb(p1, mode="dual-fine", lengths=[2, 4, 8], n_random=4, seed=11)
    check(
        "benchmarking decays and stays bounded",
        rb["mean_visibility"][0] > rb["mean_visibility"][-1]
        and 0.0 < rb["epc"] < 0.5
        and rb["n_cycles_per_primitive"] == 150,
        f"epc = {rb['epc']:.3e}",
    )
    check(
        "benchmarking is deterministic",
        rb["raw"] == rb2["raw"] and rb["p"] == rb2["p"],
    )

    print(f"all {checks_run} smoke tests passed")


if __name__ == "__main__":
    main()
