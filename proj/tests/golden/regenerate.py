#!/usr/bin/env python3
"""Rebuild cases.json by running the CLI on each argument vector below.

Usage: regenerate.py path/to/padicrot
Review the diff before committing; the test compares stdout byte for byte.
"""
import json
import pathlib
import subprocess
import sys

CASES = [
    ("so2_mass_kappa1", ["so2", "mass", "--prime", "7", "--kappa", "1"]),
    ("so2_mass_kappa7", ["so2", "mass", "--prime", "7", "--kappa", "7"]),
    ("so2_density", ["so2", "density", "--prime", "7", "--kappa", "1", "--alpha", "1/7"]),
    ("so2_compose", ["so2", "compose", "--prime", "7", "--kappa", "1", "--a", "1", "--b", "2"]),
    ("so2_isotropic_kappa", ["so2", "compose", "--prime", "5", "--kappa", "1", "--a", "1", "--b", "2"]),
    ("quat_nrd", ["quat", "nrd", "--prime", "7", "--q", "1,1,0,0"]),
    ("quat_mul", ["quat", "mul", "--prime", "3", "--q", "1,2,0,1", "--r", "0,1,1,0"]),
    ("padic_sqrt", ["--precision", "8", "padic", "sqrt", "--prime", "7", "--x", "2"]),
    ("padic_class", ["padic", "class", "--prime", "2", "--x", "12"]),
    ("padic_measure", ["padic", "measure", "--prime", "5", "--k", "2"]),
    ("quadform_list", ["quadform", "list", "--prime", "7", "--dim", "2"]),
    ("rot3_from_quat", ["rot3", "from-quat", "--prime", "2", "--q", "1,1,0,0"]),
    ("rot4_from_pair", ["rot4", "from-pair", "--prime", "7", "--xi", "1,1,0,0", "--rho", "1,-1,0,0"]),
    ("haar_mass_so3", ["haar", "mass", "--group", "so3", "--prime", "7"]),
    ("haar_mass_so4", ["haar", "mass", "--group", "so4", "--prime", "3"]),
    ("integrate_so3_exact", ["haar", "integrate-so3", "--prime", "5", "--cylinder", "{\"constraints\":[[0,0,1]]}"]),
    ("integrate_so3_mc", ["--seed", "11", "--threads", "1", "haar", "integrate-so3", "--prime", "3", "--mode", "mc",
                          "--samples", "2000", "--cylinder", "{\"constraints\":[[0,0,1]]}"]),
    ("domain_error", ["quat", "inv", "--prime", "5", "--q", "0,0,0,0"]),
    ("so4_p2_unsupported", ["haar", "mass", "--group", "so4", "--prime", "2"]),
    ("usage_error", ["so2", "mass", "--prime", "7", "--frobnicate"]),
]


def main():
    binary = sys.argv[1]
    out = []
    for name, argv in CASES:
        r = subprocess.run([binary, *argv], capture_output=True, text=True)
        out.append({"name": name, "argv": argv, "exit": r.returncode, "stdout": r.stdout})
    path = pathlib.Path(__file__).with_name("cases.json")
    path.write_text(json.dumps(out, indent=2) + "\n")


if __name__ == "__main__":
    main()
