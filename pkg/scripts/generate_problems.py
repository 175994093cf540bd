#!/usr/bin/env python3
"""
Generate reference problem files for demo and regression purposes.
Creates one JSON problem per catalog entry:
  1. planar_face    -> 2-dim bad face, non-isolated critical locus, value -2
  2. ray_face       -> 1-dim bad face on the ray (2,2,1), values -2 and 2
  3. root_family    -> product family at roots (1,2), multiplicities (3,1), value -2
  4. five_variable  -> 1-dim bad face that is not relatively simple, values -2 and 2
"""

import argparse
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from app.catalog import CATALOG, CHARTS, root_family_polynomial, to_spec
from app.parsers.problem_parser import dump_problem


def generate(output_dir: str, roots=None, multiplicities=None) -> list:
    """Write every catalog problem; a custom root family is added when roots are given."""
    written = []
    for name, build in CATALOG.items():
        extra = {"nondegenerate_at_infinity": True} if name == "five_variable" else {}
        spec = to_spec(build(), charts=[CHARTS[name]], seed=0, **extra)
        path = os.path.join(output_dir, f"{name}.json")
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(dump_problem(spec) + "\n")
        written.append(path)

    if roots:
        multiplicities = multiplicities or [1] * len(roots)
        spec = to_spec(root_family_polynomial(roots, multiplicities), charts=[CHARTS["root_family"]], seed=0)
        tag = "_".join(f"{z}^{m}" for z, m in zip(roots, multiplicities))
        path = os.path.join(output_dir, f"root_family_{tag}.json")
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(dump_problem(spec) + "\n")
        written.append(path)
    return written


def main():
    parser = argparse.ArgumentParser(description="Generate reference problem files")
    parser.add_argument("--out", default=None, help="Output directory (default: problems/)")
    parser.add_argument("--roots", type=int, nargs="*", help="Roots z_j of a custom product family")
    parser.add_argument("--multiplicities", type=int, nargs="*", help="Multiplicities m_j of the roots")
    args = parser.parse_args()

    output_dir = args.out or os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "problems")
    os.makedirs(output_dir, exist_ok=True)

    print("Generating reference problems...")
    print(f"Output directory: {output_dir}")
    files = generate(output_dir, args.roots, args.multiplicities)

    print(f"\nGenerated {len(files)} problem file(s):")
    for path in files:
        print(f"  {os.path.basename(path)}")


if __name__ == "__main__":
    main()
