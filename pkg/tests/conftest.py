"""Shared fixtures and generators for the test suite."""

from __future__ import annotations

import random

import pytest

from cohesion_lab.cli import load_fixture
from cohesion_lab.fincat import FinCategory
from cohesion_lab.presheaf import Presheaf, make_presheaf, representable, validate_presheaf

CATEGORY_FIXTURES = ("delta1", "chain3", "graphic_m", "karoubi_m")
ALGEBRA_FIXTURES = ("weil_dual", "prod_qq", "weil_3dim")


@pytest.fixture(scope="session")
def delta1() -> FinCategory:
    return load_fixture("delta1")


@pytest.fixture(scope="session")
def chain3() -> FinCategory:
    return load_fixture("chain3")


@pytest.fixture(scope="session")
def graphic_m() -> FinCategory:
    return load_fixture("graphic_m")


@pytest.fixture(scope="session")
def karoubi_m() -> FinCategory:
    return load_fixture("karoubi_m")


@pytest.fixture(scope="session")
def weil_dual():
    return load_fixture("weil_dual")


@pytest.fixture(scope="session")
def prod_qq():
    return load_fixture("prod_qq")


@pytest.fixture(scope="session")
def weil_3dim():
    return load_fixture("weil_3dim")


def coproduct_of_representables(c: FinCategory, objs: list[int]) -> Presheaf:
    """Disjoint union of representables, elements tagged by summand index."""
    summands = [representable(c, a) for a in objs]
    sets: dict[int, list[str]] = {o: [] for o in c.objects()}
    actions: dict[int, dict[str, str]] = {f: {} for f in c.morphisms()}
    for i, y in enumerate(summands):
        for o in c.objects():
            for t in y.set_at(o):
                sets[o].append(f"{i}:{t}")
        for f in c.morphisms():
            for t, u in y.actions[f].items():
                actions[f][f"{i}:{t}"] = f"{i}:{u}"
    return make_presheaf(c, {o: tuple(sets[o]) for o in c.objects()}, actions)


def congruence_quotient(x: Presheaf, pairs: list[tuple[int, str, str]]) -> Presheaf:
    """Quotient by the smallest functorial equivalence merging the pairs."""
    c = x.category
    parent: dict[tuple[int, str], tuple[int, str]] = {}

    def find(k: tuple[int, str]) -> tuple[int, str]:
        root = k
        while parent.get(root, root) != root:
            root = parent[root]
        while parent.get(k, k) != k:
            parent[k], k = root, parent[k]
        return root

    queue = list(pairs)
    while queue:
        o, a, b = queue.pop()
        ra, rb = find((o, a)), find((o, b))
        if ra == rb:
            continue
        if rb < ra:
            ra, rb = rb, ra
        parent[rb] = ra
        for f in c.morphisms():
            if c.cod[f] != o:
                continue
            queue.append((c.dom[f], x.action(f)[a], x.action(f)[b]))

    def rep(o: int, t: str) -> str:
        root = find((o, t))
        return min(u for u in x.set_at(o) if find((o, u)) == root)

    sets = {
        o: tuple(sorted({rep(o, t) for t in x.set_at(o)})) for o in c.objects()
    }
    actions = {
        f: {
            t: rep(c.dom[f], x.action(f)[t])
            for t in sets[c.cod[f]]
        }
        for f in c.morphisms()
    }
    return make_presheaf(c, sets, actions)


def random_presheaf(c: FinCategory, seed: int, max_fiber: int = 3) -> Presheaf:
    """Deterministic random presheaf with every fiber of size <= max_fiber.

    Starts from a coproduct of representables and merges random element
    pairs (closing up under the actions) until the bound holds.
    """
    rng = random.Random(seed)
    n = c.n_objects
    objs = [rng.randrange(n) for _ in range(rng.randint(1, 3))]
    x = coproduct_of_representables(c, objs)
    for _ in range(rng.randint(0, 2)):
        o = rng.randrange(n)
        fiber = x.set_at(o)
        if len(fiber) >= 2:
            a, b = rng.sample(list(fiber), 2)
            x = congruence_quotient(x, [(o, a, b)])
    while x.max_fiber() > max_fiber:
        o = max(c.objects(), key=lambda k: len(x.set_at(k)))
        a, b = rng.sample(list(x.set_at(o)), 2)
        x = congruence_quotient(x, [(o, a, b)])
    report = validate_presheaf(x)
    assert report.ok, report.summary()
    return x
