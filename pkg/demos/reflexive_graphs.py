"""Tour: presheaves on the arrow site are reflexive directed graphs.

Run with:  python3 demos/reflexive_graphs.py
"""

from __future__ import annotations

from cohesion_lab.cli import load_fixture
from cohesion_lab.fincat import unique_point_objects
from cohesion_lab.levels import level_epsilon
from cohesion_lab.presheaf import (
    codiscrete,
    constant_presheaf,
    global_sections,
    is_level_sheaf,
    is_skeletal,
    make_presheaf,
    phi,
    pi0,
    sheaf_check,
    sheafify_rigid,
    validate_presheaf,
)


def two_loops(d1):
    """Two vertices, each carrying only its degenerate self-loop."""
    zero, one = d1.object_index("[0]"), d1.object_index("[1]")
    x = make_presheaf(
        d1,
        {zero: ("u", "v"), one: ("lu", "lv")},
        {
            d1.morphism_index("id_0"): {"u": "u", "v": "v"},
            d1.morphism_index("id_1"): {"lu": "lu", "lv": "lv"},
            d1.morphism_index("d0"): {"lu": "u", "lv": "v"},
            d1.morphism_index("d1"): {"lu": "u", "lv": "v"},
            d1.morphism_index("s"): {"u": "lu", "v": "lv"},
            d1.morphism_index("e0"): {"lu": "lu", "lv": "lv"},
            d1.morphism_index("e1"): {"lu": "lu", "lv": "lv"},
        },
    )
    assert validate_presheaf(x).ok
    return x


def main() -> None:
    d1 = load_fixture("delta1")
    print("Site objects:", ", ".join(d1.object_names),
          "— a graph has vertices at [0] and edges at [1].")

    x = two_loops(d1)
    print(f"\nExample graph: {len(x.set_at(0))} vertices, "
          f"{len(x.set_at(1))} edges (the two degenerate loops).")
    print("Connected components:", pi0(x).count)
    print("Global sections (vertices picked naturally):",
          len(global_sections(x)))

    const = constant_presheaf(d1, 2)
    codisc = codiscrete(d1, 2)
    print("\nConstant graph on two values: edge fiber",
          len(const.set_at(1)),
          "| codiscrete graph: edge fiber", len(codisc.set_at(1)))
    nt = phi(d1, 2)
    print("Canonical map constants → point-functions is injective:",
          nt.is_componentwise_injective(),
          "and iso:", nt.is_iso())

    eps = level_epsilon(d1)
    print(f"\nε here equals the centre ({len(eps.ideal)} of"
          f" {d1.n_morphisms} morphisms).")
    sub = unique_point_objects(d1)
    print("Two-loop graph is skeletal at that level:", is_skeletal(sub, x))
    print("...but not a sheaf:", is_level_sheaf(sub, x))

    topology = eps.level().topology
    assert sheaf_check(topology, x) == is_level_sheaf(sub, x)
    shv = sheafify_rigid(topology, x)
    print("Sheafifying fixes it:", sheaf_check(topology, shv),
          "with fibers", [len(shv.set_at(o)) for o in d1.objects()])


if __name__ == "__main__":
    main()
