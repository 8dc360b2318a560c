"""Tour: exact structure-constant checks on small commutative algebras.

Run with:  python3 demos/weil_checks.py
"""

from __future__ import annotations

from cohesion_lab.algfin import algebra_from_dict, algebra_report
from cohesion_lab.cli import load_fixture


def main() -> None:
    algebras = {
        "dual numbers (x² = 0)": load_fixture("weil_dual"),
        "two copies of ℚ": load_fixture("prod_qq"),
        "ℚ adjoined √2": algebra_from_dict(
            {
                "dim": 2,
                "basis": ["one", "r"],
                "unit": ["1", "0"],
                "mult": [[["1", "0"], ["0", "1"]], [["0", "1"], ["2", "0"]]],
            }
        ),
        "x, y with x² = xy = y² = 0": load_fixture("weil_3dim"),
    }
    header = (
        f"{'algebra':28s} {'dim':>3s} {'radical':>7s} {'local':>5s} "
        f"{'reduced':>7s} {'idem':>4s} {'points':>6s} {'nil':>3s} {'Weil':>4s}"
    )
    print(header)
    print("-" * len(header))
    for label, a in algebras.items():
        r = algebra_report(a)
        print(
            f"{label:28s} {r.dim:3d} {r.radical_dim:7d} {str(r.is_local):>5s} "
            f"{str(r.is_reduced):>7s} {r.idempotent_count:4d} "
            f"{len(r.rational_points):6d} {r.nil_index:3d} {str(r.is_weil):>4s}"
        )

    print("\nA Weil algebra is local with a one-dimensional residue field;")
    print("the report certifies the radical with exact rational arithmetic.")


if __name__ == "__main__":
    main()
