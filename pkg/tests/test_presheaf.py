"""Presheaves: Kan extensions, adjunctions, the classifier, and sheaf checks."""

from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cohesion_lab.cli import load_fixture
from cohesion_lab.fincat import FullSubcategory, unique_point_objects
from cohesion_lab.levels import (
    NotAboveCentre,
    enumerate_levels,
    level_epsilon,
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
    coskeleton,
    count_natural_transformations,
    global_sections,
    is_isomorphic,
    is_level_sheaf,
    is_nullstellensatz,
    is_skeletal,
    left_kan,
    left_kan_unit,
    level_four_functors,
    make_presheaf,
    omega,
    phi,
    pi0,
    pi0_nt,
    pi0_omega,
    presheaf_from_dict,
    representable,
    restrict,
    right_kan,
    right_kan_counit,
    sheaf_check,
    sheafify_rigid,
    skeleton,
    subpresheaves,
    validate_presheaf,
)

from conftest import congruence_quotient, coproduct_of_representables, random_presheaf


@pytest.fixture(scope="module")
def km():
    return load_fixture("karoubi_m")


@pytest.fixture(scope="module")
def d1():
    return load_fixture("delta1")


def two_loops(d1):
    zero, one = d1.object_index("[0]"), d1.object_index("[1]")
    sets = {zero: ("u", "v"), one: ("lu", "lv")}
    actions = {
        d1.morphism_index("id_0"): {"u": "u", "v": "v"},
        d1.morphism_index("id_1"): {"lu": "lu", "lv": "lv"},
        d1.morphism_index("d0"): {"lu": "u", "lv": "v"},
        d1.morphism_index("d1"): {"lu": "u", "lv": "v"},
        d1.morphism_index("s"): {"u": "lu", "v": "lv"},
        d1.morphism_index("e0"): {"lu": "lu", "lv": "lv"},
        d1.morphism_index("e1"): {"lu": "lu", "lv": "lv"},
    }
    x = make_presheaf(d1, sets, actions)
    assert validate_presheaf(x).ok
    return x


def test_representables_validate_and_are_connected(km, d1):
    for c in (km, d1):
        for a in c.objects():
            y = representable(c, a)
            assert validate_presheaf(y).ok
            assert pi0(y).count == 1


def test_yoneda_counting(km, d1):
    for c in (km, d1):
        tests = [omega(c), codiscrete(c, 2), constant_presheaf(c, 3)]
        tests += [representable(c, b) for b in c.objects()]
        for a in c.objects():
            y = representable(c, a)
            for x in tests:
                assert count_natural_transformations(y, x) == len(x.set_at(a))


def test_pi0_counts_connected_components(d1):
    x = two_loops(d1)
    assert pi0(x).count == 2
    assert pi0(constant_presheaf(d1, 3)).count == 3
    assert pi0(constant_presheaf(d1, 0)).count == 0


def test_sections_match_the_limit_formula(km, d1):
    for c in (km, d1):
        tests = [omega(c), codiscrete(c, 3), constant_presheaf(c, 2)]
        tests += [representable(c, b) for b in c.objects()]
        one = constant_presheaf(c, 1)
        for x in tests:
            assert len(global_sections(x)) == count_natural_transformations(one, x)


def test_codiscrete_fibers_count_point_tuples(km):
    sizes = [len(codiscrete(km, 2).set_at(o)) for o in km.objects()]
    assert sizes == [2, 2, 4]


def test_phi_is_natural_and_injective(km, d1):
    for c in (km, d1):
        for size in (0, 1, 2, 3):
            nt = phi(c, size)
            assert nt.is_natural()
            assert nt.is_componentwise_injective()
    assert not phi(d1, 2).is_iso()


def test_nullstellensatz_at_size_three(km, d1):
    assert is_nullstellensatz(km, test_sizes=(3,))
    assert is_nullstellensatz(d1, test_sizes=(3,))


def test_kan_extensions_are_fully_faithful(km, d1):
    for c in (km, d1):
        sub = unique_point_objects(c)
        cat, _, _ = sub.as_category()
        tests = [representable(cat, b) for b in cat.objects()]
        tests.append(constant_presheaf(cat, 2))
        for y in tests:
            unit = left_kan_unit(sub, y)
            assert unit.is_natural() and unit.is_iso()
            counit = right_kan_counit(sub, y)
            assert counit.is_natural() and counit.is_iso()


def test_restriction_recovers_kan_extensions(km):
    sub = unique_point_objects(km)
    cat, _, _ = sub.as_category()
    y = constant_presheaf(cat, 2)
    assert is_isomorphic(restrict(sub, left_kan(sub, y)), y)
    assert is_isomorphic(restrict(sub, right_kan(sub, y)), y)


def test_skeleton_and_sheaf_predicates_agree_with_unit_counit(d1):
    sub = unique_point_objects(d1)
    x = two_loops(d1)
    _, counit = skeleton(sub, x)
    assert is_skeletal(sub, x) == counit.is_iso()
    assert is_skeletal(sub, x)
    _, unit = coskeleton(sub, x)
    assert is_level_sheaf(sub, x) == unit.is_iso()
    assert not is_level_sheaf(sub, x)


def test_omega_shape_and_connectedness(km, d1):
    for c, sizes in ((d1, [2, 5]), (km, [2, 3, 7])):
        w = omega(c)
        assert validate_presheaf(w).ok
        assert [len(w.set_at(o)) for o in c.objects()] == sizes
        assert pi0_omega(c) == 1


def test_omega_classifies_subpresheaves(km, d1):
    for c in (km, d1):
        w = omega(c)
        tests = [representable(c, b) for b in c.objects()]
        tests.append(constant_presheaf(c, 2))
        for x in tests:
            assert len(subpresheaves(x)) == count_natural_transformations(x, w)


def test_sub_of_terminal_presheaf(d1):
    assert len(subpresheaves(constant_presheaf(d1, 1))) == 2


def test_sheaf_check_against_epsilon_topology(km):
    eps = level_epsilon(km).level()
    assert not sheaf_check(eps.topology, constant_presheaf(km, 2))
    assert sheaf_check(eps.topology, codiscrete(km, 2))
    top = next(l for l in enumerate_levels(km) if len(l.ideal) == 17)
    for x in (constant_presheaf(km, 2), codiscrete(km, 2), representable(km, 2)):
        assert sheaf_check(top.topology, x)


def test_sheafify_is_idempotent_and_lands_in_sheaves(km):
    eps = level_epsilon(km).level()
    x = constant_presheaf(km, 2)
    shv = sheafify_rigid(eps.topology, x)
    assert [len(shv.set_at(o)) for o in km.objects()] == [2, 2, 4]
    assert sheaf_check(eps.topology, shv)
    assert is_isomorphic(sheafify_rigid(eps.topology, shv), shv)


@given(seed=st.integers(0, 10_000))
@settings(max_examples=20, deadline=None)
def test_random_congruence_quotients_are_presheaves(seed):
    km = load_fixture("karoubi_m")
    x = random_presheaf(km, seed)
    assert validate_presheaf(x).ok
    assert 1 <= pi0(x).count <= x.total_size()


def test_quotient_collapses_components(d1):
    x = coproduct_of_representables(d1, [0, 0])
    assert pi0(x).count == 2
    zero = d1.object_index("[0]")
    a, b = x.set_at(zero)
    merged = congruence_quotient(x, [(zero, a, b)])
    assert validate_presheaf(merged).ok
    assert pi0(merged).count == 1


def test_check_way_above_variants(km):
    eps = level_epsilon(km).level()
    y_g = representable(km, km.object_index("G"))
    assert not check_way_above(eps, y_g)
    whole = FullSubcategory(parent=km, objects=frozenset(km.objects()))
    assert check_way_above(whole, y_g)
    no_terminal = FullSubcategory(
        parent=km, objects=frozenset({km.object_index("D")})
    )
    with pytest.raises(NotAboveCentre):
        check_way_above(no_terminal, y_g)


def test_adjunction_witnesses_on_the_arrow_site(d1):
    sub = unique_point_objects(d1)
    cat, _, _ = sub.as_category()
    on_sub = [representable(cat, 0), constant_presheaf(cat, 2)]
    on_parent = [representable(d1, b) for b in d1.objects()]
    on_parent.append(two_loops(d1))
    assert adjunction_left_kan_restrict(sub, on_sub, on_parent).ok
    assert adjunction_restrict_right_kan(sub, on_parent, on_sub).ok
    assert adjunction_pi0_constant(d1, on_parent, sizes=(0, 1, 2)).ok
    assert adjunction_constant_sections(d1, (0, 1, 2), on_parent).ok
    assert adjunction_sections_codiscrete(d1, on_parent, (0, 1, 2)).ok


def test_four_functor_reports(km):
    from cohesion_lab.levels import is_quality_type_level

    by_size = {len(l.ideal): l for l in enumerate_levels(km)}
    for size, quality in ((12, True), (16, True), (17, False)):
        level = by_size[size]
        report = level_four_functors(level)
        assert report.direct_image_identity
        assert report.adjunction_chain_ok
        assert report.quality_type == quality
        # functor-side and ideal-side quality criteria agree
        assert report.quality_type == is_quality_type_level(level)


def test_pi0_nt_is_induced_on_components(d1):
    x = two_loops(d1)
    one = constant_presheaf(d1, 1)
    collapse = {
        o: {t: one.set_at(o)[0] for t in x.set_at(o)} for o in d1.objects()
    }
    from cohesion_lab.presheaf import NaturalTransformation

    nt = NaturalTransformation(source=x, target=one, components=collapse)
    assert nt.is_natural()
    induced = pi0_nt(nt)
    assert len(induced) == 2 and set(induced.values()) == {0}


def test_presheaf_round_trip(d1):
    x = two_loops(d1)
    data = x.to_dict("delta1")
    again = presheaf_from_dict(data, d1)
    assert again.sets == x.sets and again.actions == x.actions
