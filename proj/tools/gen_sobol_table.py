#!/usr/bin/env python3
"""Regenerate src/sobol_table.cpp from the Joe-Kuo (new-joe-kuo-6.21201) direction numbers.

The numbers are read from the copy SciPy ships, so no download is needed.
"""
import os
import sys

import numpy as np


def main(out_path):
    import scipy.stats

    npz = os.path.join(os.path.dirname(scipy.stats.__file__), "_sobol_direction_numbers.npz")
    data = np.load(npz)
    poly = data["poly"].astype(np.uint64)
    vinit = data["vinit"].astype(np.uint64)
    lines = [
        "// Generated by tools/gen_sobol_table.py. Do not edit.",
        "// Joe-Kuo direction numbers (new-joe-kuo-6.21201).",
        "",
        '#include "sobol_table.hpp"',
        "",
        "namespace spherebo::detail {",
        "",
        f"const std::uint32_t kSobolPoly[kSobolMaxDim] = {{",
    ]
    for i in range(0, len(poly), 16):
        lines.append("    " + ", ".join(str(int(p)) for p in poly[i:i + 16]) + ",")
    lines.append("};")
    lines.append("")
    flat = []
    for d in range(len(poly)):
        degree = max(int(poly[d]).bit_length() - 1, 1)
        flat.extend(int(v) for v in vinit[d, :degree])
    lines.append(f"const std::uint32_t kSobolInit[{len(flat)}] = {{")
    for i in range(0, len(flat), 24):
        lines.append("    " + ",".join(str(v) for v in flat[i:i + 24]) + ",")
    lines.append("};")
    lines.append("")
    lines.append("}  // namespace spherebo::detail")
    with open(out_path, "w") as f:
        f.write("\n".join(lines) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "src/sobol_table.cpp")
