"""Tour: from a four-element monoid to its split-idempotent category and ε.

Run with:  python3 demos/graphic_monoid_tour.py
"""

from __future__ import annotations

from cohesion_lab.cli import load_fixture
from cohesion_lab.fincat import (
    idempotents,
    karoubi_envelope,
    pseudo_constants,
    unique_point_objects,
)
from cohesion_lab.levels import (
    enumerate_levels,
    is_above_centre,
    is_quality_type_level,
    is_subquality_level,
    level_epsilon,
)
from cohesion_lab.presheaf import level_four_functors


def main() -> None:
    m = load_fixture("graphic_m")
    print("One object, four morphisms:", ", ".join(m.morphism_names))
    idem = [m.morphism_names[f] for f in idempotents(m)]
    print("Every morphism is idempotent:", ", ".join(idem))

    env, _ = karoubi_envelope(m, skeletal=True)
    print(f"\nSplitting them yields {env.n_objects} objects "
          f"and {env.n_morphisms} morphisms:")
    print(" ", ", ".join(env.object_names))

    little = unique_point_objects(env)
    print("Objects with exactly one point:", ", ".join(little.object_names()))
    pc = pseudo_constants(env)
    print(f"Pseudo-constants: {len(pc)} of {env.n_morphisms} "
          "(everything except the identity of the big object)")

    print("\nLevels (idempotent ideals), smallest to largest:")
    for level in enumerate_levels(env):
        above = is_above_centre(level)
        tags = []
        if above:
            tags.append("above centre")
            if is_subquality_level(level):
                tags.append("subquality")
            if is_quality_type_level(level):
                tags.append("quality type")
        print(f"  size {len(level.ideal):2d}  {', '.join(tags) or '-'}")

    report = level_epsilon(env)
    print(f"\nε has {len(report.ideal)} morphisms and is "
          f"{'equal to' if report.equals_centre else 'strictly above'} the centre.")

    four = level_four_functors(report.level())
    print("Composite functor checks at ε:",
          "round-trip on constants", four.direct_image_identity,
          "| adjunction chain", four.adjunction_chain_ok,
          "| quality type", four.quality_type)


if __name__ == "__main__":
    main()
