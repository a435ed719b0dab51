#!/usr/bin/env python3
"""Regenerate every dataset the package is built to produce, as CSV files
under data/ (degree-of-polarization sweeps, Q surfaces, amplitude grids,
Stokes-variance sweeps, concurrence surfaces and post-device curves)."""

import pathlib
import sys

from catpol.cli import main

OUT = pathlib.Path(__file__).resolve().parent.parent / "data"

PI_8 = "0.39269908169872414"
PI_4 = "0.7853981633974483"
PI_2 = "1.5707963267948966"

COHERENT_PANELS = {
    "h": "2,0",
    "v": "0,2",
    "diag": "2,2",
    "antidiag": "2,-2",
    "rcirc": "2,0,0,2",
    "lcirc": "2,0,0,-2",
}

JOBS = []

# Degree of polarization of the basic coherent families.
for family in ("hv", "diag"):
    JOBS.append(
        (
            f"dop_coherent_{family}.csv",
            ["dop", "--coherent-sweep", family, "--alpha2-range", "0:6:0.1"],
        )
    )

# Q surfaces of the six reference polarizations.
for name, spec in COHERENT_PANELS.items():
    JOBS.append((f"qfunc_coherent_{name}.csv", ["qfunc", "--coherent", spec]))

# Amplitude distributions for the same six states.
for name, spec in COHERENT_PANELS.items():
    JOBS.append((f"amplitude_{name}.csv", ["amplitude", "--coherent", spec]))

# Stokes variance sweep of the swap family at fixed beta2 = 4.
JOBS.append(
    (
        "stokes_psi1_variances_beta2_4.csv",
        ["stokes", "--named", "psi1", "--alpha2-range", "0:10:0.1", "--beta2", "4"],
    )
)

# Q surfaces of the three named superpositions at alpha2 = beta2 = 4.
JOBS.append(
    (
        "qfunc_psi1_a2_4.csv",
        ["qfunc", "--named", "psi1", "--alpha2", "4", "--beta2", "4"],
    )
)
JOBS.append(("qfunc_psi2_a2_4.csv", ["qfunc", "--named", "psi2", "--alpha2", "4"]))
JOBS.append(("qfunc_psi3_a2_4.csv", ["qfunc", "--named", "psi3", "--alpha2", "4"]))

# Degree-of-polarization sweeps of the named families.
for beta2 in ("0.5", "1", "2", "4"):
    JOBS.append(
        (
            f"dop_psi1_beta2_{beta2.replace('.', 'p')}.csv",
            [
                "dop",
                "--named",
                "psi1",
                "--alpha2-range",
                "0:8:0.25",
                "--beta2",
                beta2,
            ],
        )
    )
for family in ("psi2", "psi3"):
    JOBS.append(
        (
            f"dop_{family}.csv",
            ["dop", "--named", family, "--alpha2-range", "0:8:0.25"],
        )
    )

# Concurrence surface of the swap family.
JOBS.append(
    (
        "concurrence_psi1_surface.csv",
        [
            "concurrence",
            "--named",
            "psi1",
            "--alpha2-range",
            "0:5:0.1",
            "--beta2-range",
            "0:5:0.1",
        ],
    )
)

# Concurrence after the compensator-rotator-compensator device.
JOBS.append(
    (
        "concurrence_crc_dist2_4.csv",
        [
            "concurrence",
            "--crc",
            "--dist2",
            "4",
            "--phi1",
            f"0,{PI_8},{PI_4}",
            "--theta-range",
            f"0:{PI_2}:0.01",
        ],
    )
)


def run() -> int:
    OUT.mkdir(exist_ok=True)
    for filename, argv in JOBS:
        target = OUT / filename
        code = main([*argv, "--output", str(target)])
        if code != 0:
            print(f"FAILED ({code}): {filename}", file=sys.stderr)
            return code
        print(f"wrote {target}")
    return 0


if __name__ == "__main__":
    sys.exit(run())
