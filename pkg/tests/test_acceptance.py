"""End-to-end acceptance checks, one per headline behaviour, each timed."""

from __future__ import annotations

import time

from cohesion_lab.algfin import algebra_from_dict, algebra_report
from cohesion_lab.cli import load_fixture
from cohesion_lab.fincat import (
    FullSubcategory,
    has_enough_little_figures,
    karoubi_envelope,
    pseudo_constants,
    unique_point_objects,
)
from cohesion_lab.levels import (
    aufhebung_search,
    enumerate_idempotent_ideals,
    enumerate_levels,
    ideal_generated_by,
    irreducible_objects,
    level_epsilon,
    level_of_ideal,
)
from cohesion_lab.presheaf import (
    adjunction_constant_sections,
    adjunction_left_kan_restrict,
    adjunction_pi0_constant,
    adjunction_restrict_right_kan,
    adjunction_sections_codiscrete,
    check_way_above,
    codiscrete,
    constant_presheaf,
    count_natural_transformations,
    is_isomorphic,
    is_level_sheaf,
    is_nullstellensatz,
    omega,
    phi,
    pi0_omega,
    representable,
    sheaf_check,
    sheafify_rigid,
    subpresheaves,
)

from conftest import random_presheaf
from oracles import (
    brute_idempotent_ideals,
    brute_pseudo_constants,
    nilpotent_subspace_dim,
)


def small_presheaf_pool(c, max_fiber: int = 4):
    pool = [representable(c, a) for a in c.objects()]
    pool += [constant_presheaf(c, n) for n in (0, 1, 2)]
    pool += [codiscrete(c, n) for n in (0, 1, 2)]
    pool.append(omega(c))
    return [x for x in pool if x.max_fiber() <= max_fiber]


def test_criterion_01_idempotent_splitting_pipeline():
    start = time.perf_counter()
    m = load_fixture("graphic_m")
    env, emb = karoubi_envelope(m, skeletal=True)
    assert env.n_objects == 3
    assert emb.check().ok and emb.is_fully_faithful()
    little = unique_point_objects(env)
    assert len(little.objects) == 2
    pc = frozenset(pseudo_constants(env))
    assert len(pc) == env.n_morphisms - 1
    missing = set(env.morphisms()) - pc
    assert missing == {env.identity[env.object_index("split(id)")]}
    assert pc == brute_pseudo_constants(env)
    report = level_epsilon(env)
    assert report.found
    assert report.ideal.members == pc
    assert report.equals_centre is False
    assert time.perf_counter() - start < 1.0


def test_criterion_02_arrow_site_quality():
    start = time.perf_counter()
    d1 = load_fixture("delta1")
    pc = pseudo_constants(d1)
    assert len(pc) == d1.n_morphisms - 1
    assert {d1.morphism_names[f] for f in set(d1.morphisms()) - set(pc)} == {"id_1"}
    ok, uncovered = has_enough_little_figures(d1)
    assert ok and uncovered == ()
    report = level_epsilon(d1)
    assert report.found
    assert report.equals_centre is True
    assert report.little_figure_objects == ("[0]",)
    assert time.perf_counter() - start < 1.0


def test_criterion_03_levels_from_object_subsets():
    start = time.perf_counter()
    chain = load_fixture("chain3")
    from itertools import combinations

    from cohesion_lab.levels import is_above_centre

    all_objects = list(chain.objects())
    terminal_name = "1"
    for size in range(len(all_objects) + 1):
        for subset in combinations(all_objects, size):
            seed = {chain.identity[x] for x in subset}
            level = level_of_ideal(ideal_generated_by(chain, seed))
            names = {chain.object_names[x] for x in subset}
            assert is_above_centre(level) == (terminal_name in names)
    lower = level_of_ideal(
        ideal_generated_by(
            chain,
            {chain.identity[chain.object_index("0")],
             chain.identity[chain.object_index("half")]},
        )
    )
    assert not is_above_centre(lower)
    assert time.perf_counter() - start < 1.0


def test_criterion_04_enumeration_matches_exhaustive_search():
    start = time.perf_counter()
    d1 = load_fixture("delta1")
    env, _ = karoubi_envelope(load_fixture("graphic_m"), skeletal=True)
    for c in (d1, env):
        lib = {i.members for i in enumerate_idempotent_ideals(c, max_morphisms=24)}
        assert lib == brute_idempotent_ideals(c)
    assert env.n_morphisms == 17
    assert time.perf_counter() - start < 30.0


def test_criterion_05_topologies_satisfy_the_axioms_and_reverse_order():
    start = time.perf_counter()
    for name in ("delta1", "karoubi_m"):
        c = load_fixture(name)
        levels = enumerate_levels(c)
        for level in levels:
            assert level.topology.axiom_violations() == ()
        for a in levels:
            for b in levels:
                included = a.ideal.members <= b.ideal.members
                reverse = all(
                    b.topology.covers[x] <= a.topology.covers[x]
                    for x in c.objects()
                )
                assert included == reverse
    assert time.perf_counter() - start < 30.0


def test_criterion_06_adjunction_witnesses():
    start = time.perf_counter()
    for name in ("delta1", "karoubi_m"):
        c = load_fixture(name)
        sub = unique_point_objects(c)
        cat, _, _ = sub.as_category()
        on_parent = small_presheaf_pool(c)
        on_sub = [representable(cat, a) for a in cat.objects()]
        on_sub += [constant_presheaf(cat, n) for n in (0, 1, 2)]
        on_sub = [y for y in on_sub if y.max_fiber() <= 4]
        assert adjunction_left_kan_restrict(sub, on_sub, on_parent).ok
        assert adjunction_restrict_right_kan(sub, on_parent, on_sub).ok
        assert adjunction_pi0_constant(c, on_parent, sizes=(0, 1, 2)).ok
        assert adjunction_constant_sections(c, (0, 1, 2), on_parent).ok
        assert adjunction_sections_codiscrete(c, on_parent, (0, 1, 2)).ok
    assert time.perf_counter() - start < 30.0


def test_criterion_07_nullstellensatz_and_restricted_phi():
    start = time.perf_counter()
    for name in ("delta1", "karoubi_m"):
        assert is_nullstellensatz(load_fixture(name))
    km = load_fixture("karoubi_m")
    eps = level_epsilon(km).level()
    sub = FullSubcategory(
        parent=km, objects=frozenset(irreducible_objects(eps.topology))
    )
    cat, _, _ = sub.as_category()
    for size in (0, 1, 2, 3):
        assert phi(cat, size).is_iso()
    assert time.perf_counter() - start < 30.0


def test_criterion_08_connected_classifier_and_way_above():
    start = time.perf_counter()
    for name in ("delta1", "karoubi_m"):
        c = load_fixture(name)
        assert pi0_omega(c) == 1
        w = omega(c)
        for x in small_presheaf_pool(c):
            assert len(subpresheaves(x)) == count_natural_transformations(x, w)
    km = load_fixture("karoubi_m")
    eps = level_epsilon(km).level()
    y_g = representable(km, km.object_index("G"))
    assert check_way_above(eps, y_g) is False
    assert time.perf_counter() - start < 30.0


def test_criterion_09_sheaf_condition_on_random_presheaves():
    start = time.perf_counter()
    km = load_fixture("karoubi_m")
    eps = level_epsilon(km).level()
    sub = FullSubcategory(
        parent=km, objects=frozenset(irreducible_objects(eps.topology))
    )
    for seed in range(50):
        x = random_presheaf(km, seed, max_fiber=3)
        assert sheaf_check(eps.topology, x) == is_level_sheaf(sub, x)
        shv = sheafify_rigid(eps.topology, x)
        assert sheaf_check(eps.topology, shv)
        assert is_isomorphic(sheafify_rigid(eps.topology, shv), shv)
    assert time.perf_counter() - start < 10.0


def test_criterion_10_bounded_search_above_epsilon():
    start = time.perf_counter()
    km = load_fixture("karoubi_m")
    eps = level_epsilon(km).level()
    report = aufhebung_search(eps)
    assert len(report.minimal) == 1
    assert len(report.minimal[0]) == km.n_morphisms
    assert report.witness_count == 5
    assert time.perf_counter() - start < 10.0


def test_criterion_11_algebra_reports():
    start = time.perf_counter()
    dual = load_fixture("weil_dual")
    r = algebra_report(dual)
    assert (r.is_weil, r.nil_index, r.idempotent_count) == (True, 2, 2)
    assert r.rational_points == (("1", "0"),)
    qq = load_fixture("prod_qq")
    r = algebra_report(qq)
    assert (r.is_local, r.idempotent_count, len(r.rational_points)) == (False, 4, 2)
    sqrt2 = algebra_from_dict(
        {
            "dim": 2,
            "basis": ["one", "r"],
            "unit": ["1", "0"],
            "mult": [[["1", "0"], ["0", "1"]], [["0", "1"], ["2", "0"]]],
        }
    )
    r = algebra_report(sqrt2)
    assert r.is_local and not r.is_weil and r.rational_points == ()
    three = load_fixture("weil_3dim")
    r = algebra_report(three)
    assert r.dim == 3 and r.is_weil
    for a in (dual, qq, sqrt2, three):
        assert algebra_report(a).radical_dim == nilpotent_subspace_dim(a)
    assert time.perf_counter() - start < 1.0
