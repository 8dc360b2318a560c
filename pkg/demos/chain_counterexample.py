"""Tour: a three-object chain whose lower objects have no points at all.

Run with:  python3 demos/chain_counterexample.py
"""

from __future__ import annotations

from itertools import combinations

from cohesion_lab.cli import load_fixture
from cohesion_lab.fincat import (
    NotPreCohesiveSite,
    has_enough_little_figures,
    points,
    terminal_object,
)
from cohesion_lab.levels import (
    enumerate_levels,
    ideal_generated_by,
    is_above_centre,
    level_epsilon,
    level_of_ideal,
)


def main() -> None:
    chain = load_fixture("chain3")
    terminal = terminal_object(chain).object
    print("Objects:", ", ".join(chain.object_names),
          f"(terminal: {chain.object_names[terminal]})")
    for x in chain.objects():
        print(f"  points of {chain.object_names[x]!r}:",
              len(points(chain, x)))

    ok, uncovered = has_enough_little_figures(chain)
    print("\nEnough one-point figures?", ok,
          "| uncovered:", [chain.morphism_names[f] for f in uncovered])
    try:
        level_epsilon(chain)
    except NotPreCohesiveSite as err:
        print("ε is not defined here:", err)

    print(f"\nAll {len(enumerate_levels(chain))} levels, "
          "via ideals generated by object subsets:")
    objs = list(chain.objects())
    for size in range(len(objs) + 1):
        for subset in combinations(objs, size):
            seed = {chain.identity[x] for x in subset}
            level = level_of_ideal(ideal_generated_by(chain, seed))
            names = "{" + ", ".join(chain.object_names[x] for x in subset) + "}"
            print(f"  {names:18s} ideal size {len(level.ideal)} "
                  f"above centre: {is_above_centre(level)}")
    print("\nOnly subsets containing the terminal sit above the centre.")


if __name__ == "__main__":
    main()
