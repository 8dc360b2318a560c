"""Morphism ideals, their Grothendieck topologies, and the lattice of levels.

A level of the presheaf topos over a finite category is keyed by an
idempotent two-sided morphism ideal; larger ideal means higher level.
The induced topology lets a sieve cover an object exactly when it
contains every ideal member into that object.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .fincat import (
    CohesionError,
    FinCategory,
    FullSubcategory,
    NoTerminal,
    NotPreCohesiveSite,
    TooLarge,
    all_points,
    points,
    pseudo_constants,
    terminal_object,
)

DEFAULT_MAX_MORPHISMS = 24


class NotAnIdeal(CohesionError):
    """The morphism set is not closed under pre/post-composition."""


class NotIdempotent(CohesionError):
    """The ideal has a member with no factorization inside the ideal."""


class NotAboveCentre(CohesionError):
    """The level does not contain all points."""


class BaseMismatch(CohesionError):
    """The two levels live over different base categories."""


class NotRigid(CohesionError):
    """The topology is not rigid, so irreducibles do not present the sheaves."""


@dataclass(frozen=True)
class MorphismIdeal:
    """A set of morphisms closed under composition with arbitrary maps."""

    category: FinCategory
    members: frozenset[int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "members", frozenset(self.members))

    def __contains__(self, f: int) -> bool:
        return f in self.members

    def __len__(self) -> int:
        return len(self.members)

    def as_sorted_tuple(self) -> tuple[int, ...]:
        return tuple(sorted(self.members))

    def member_names(self) -> tuple[str, ...]:
        return tuple(self.category.morphism_names[f] for f in self.as_sorted_tuple())

    def ideal_violations(self) -> tuple[str, ...]:
        c = self.category
        out: list[str] = []
        for f in self.members:
            for g in c.morphisms_out_of(c.cod[f]):
                if c.table[g][f] not in self.members:
                    out.append(
                        f"post-composition escapes: {c.morphism_names[g]!r} after "
                        f"{c.morphism_names[f]!r}"
                    )
            for h in c.morphisms_into(c.dom[f]):
                if c.table[f][h] not in self.members:
                    out.append(
                        f"pre-composition escapes: {c.morphism_names[f]!r} after "
                        f"{c.morphism_names[h]!r}"
                    )
        return tuple(out)

    def is_ideal(self) -> bool:
        return not self.ideal_violations()


def ideal_generated_by(c: FinCategory, seed: set[int] | frozenset[int]) -> MorphismIdeal:
    """Least two-sided ideal containing ``seed``."""
    members = set(seed)
    frontier = list(members)
    while frontier:
        f = frontier.pop()
        for g in c.morphisms_out_of(c.cod[f]):
            gf = c.table[g][f]
            if gf not in members:
                members.add(gf)
                frontier.append(gf)
        for h in c.morphisms_into(c.dom[f]):
            fh = c.table[f][h]
            if fh not in members:
                members.add(fh)
                frontier.append(fh)
    return MorphismIdeal(category=c, members=frozenset(members))


def is_idempotent_ideal(i: MorphismIdeal) -> bool:
    """True iff every member factors as a composite of two members."""
    violations = i.ideal_violations()
    if violations:
        raise NotAnIdeal(violations[0])
    c = i.category
    for f in i.members:
        if not any(
            c.composable(g, h) and c.table[g][h] == f
            for g in i.members
            for h in i.members
        ):
            return False
    return True


def pseudo_constant_ideal(c: FinCategory) -> MorphismIdeal:
    """The ideal of all pseudo-constants (requires a terminal object)."""
    ideal = MorphismIdeal(category=c, members=frozenset(pseudo_constants(c)))
    violations = ideal.ideal_violations()
    if violations:  # cannot happen: pseudo-constants are two-sided closed
        raise NotAnIdeal(violations[0])
    return ideal


def enumerate_idempotent_ideals(
    c: FinCategory, max_morphisms: int = DEFAULT_MAX_MORPHISMS
) -> list[MorphismIdeal]:
    """All idempotent ideals, sorted by cardinality then lexicographically.

    Ideals are unions of principal-closure classes, so enumeration walks
    the down-sets of the factorization preorder instead of all subsets.
    """
    n = c.n_morphisms
    if n > max_morphisms:
        raise TooLarge(
            f"category has {n} morphisms, exceeding the bound {max_morphisms}"
        )
    closure = [frozenset(ideal_generated_by(c, {f}).members) for f in c.morphisms()]

    # Group morphisms generating the same principal ideal.
    class_of: dict[frozenset[int], list[int]] = {}
    for f in c.morphisms():
        class_of.setdefault(closure[f], []).append(f)
    classes = list(class_of.keys())
    k = len(classes)

    ideals: set[frozenset[int]] = set()
    for picks in itertools.product((False, True), repeat=k):
        union: set[int] = set()
        for cls, picked in zip(classes, picks):
            if picked:
                union |= cls
        ideals.add(frozenset(union))

    out = [MorphismIdeal(category=c, members=s) for s in ideals]
    out = [i for i in out if is_idempotent_ideal(i)]
    out.sort(key=lambda i: (len(i.members), i.as_sorted_tuple()))
    return out


@dataclass(frozen=True)
class Sieve:
    """A right-closed set of morphisms with a common codomain."""

    category: FinCategory
    target: int
    members: frozenset[int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "members", frozenset(self.members))
        c = self.category
        for f in self.members:
            if c.cod[f] != self.target:
                raise ValueError(
                    f"sieve member {c.morphism_names[f]!r} has wrong codomain"
                )

    def is_right_closed(self) -> bool:
        c = self.category
        return all(
            c.table[f][h] in self.members
            for f in self.members
            for h in c.morphisms_into(c.dom[f])
        )

    def member_names(self) -> tuple[str, ...]:
        return tuple(
            self.category.morphism_names[f] for f in sorted(self.members)
        )

    def pullback(self, h: int) -> Sieve:
        """The sieve h*S on dom(h): all g with h∘g in S."""
        c = self.category
        if c.cod[h] != self.target:
            raise ValueError("pullback morphism must land in the sieve's target")
        x = c.dom[h]
        return Sieve(
            category=c,
            target=x,
            members=frozenset(
                g for g in c.morphisms_into(x) if c.table[h][g] in self.members
            ),
        )


def maximal_sieve(c: FinCategory, target: int) -> Sieve:
    return Sieve(category=c, target=target, members=frozenset(c.morphisms_into(target)))


def sieve_generated_by(c: FinCategory, target: int, seed: set[int]) -> Sieve:
    """Least sieve on ``target`` containing the seed morphisms."""
    members = set()
    for f in seed:
        if c.cod[f] != target:
            raise ValueError("seed morphism does not land in the target")
        members.add(f)
        for h in c.morphisms_into(c.dom[f]):
            members.add(c.table[f][h])
    # one pass suffices: f∘h∘h' = f∘(h∘h') is again a single precomposition
    return Sieve(category=c, target=target, members=frozenset(members))


def enumerate_sieves(c: FinCategory, target: int) -> list[Sieve]:
    """All sieves on ``target`` (exponential in the incoming hom count)."""
    incoming = c.morphisms_into(target)
    out: list[Sieve] = []
    for r in range(len(incoming) + 1):
        for combo in itertools.combinations(incoming, r):
            s = Sieve(category=c, target=target, members=frozenset(combo))
            if s.is_right_closed():
                out.append(s)
    return out


@dataclass(frozen=True)
class GrothendieckTopology:
    """Covering sieves per object, stored explicitly."""

    category: FinCategory
    covers: tuple[frozenset[Sieve], ...]

    def is_cover(self, s: Sieve) -> bool:
        return s in self.covers[s.target]

    def axiom_violations(self) -> tuple[str, ...]:
        """Exhaustively check the maximality, stability, and transitivity axioms."""
        c = self.category
        v: list[str] = []
        for x in c.objects():
            if maximal_sieve(c, x) not in self.covers[x]:
                v.append(f"maximal sieve on {c.object_names[x]!r} does not cover")
        for x in c.objects():
            for s in self.covers[x]:
                for h in c.morphisms_into(x):
                    if s.pullback(h) not in self.covers[c.dom[h]]:
                        v.append(
                            f"stability fails for a cover of {c.object_names[x]!r} "
                            f"along {c.morphism_names[h]!r}"
                        )
        for x in c.objects():
            for s in enumerate_sieves(c, x):
                if s in self.covers[x]:
                    continue
                for r in self.covers[x]:
                    if all(
                        s.pullback(h) in self.covers[c.dom[h]] for h in r.members
                    ):
                        v.append(
                            f"transitivity fails on {c.object_names[x]!r}: a sieve "
                            "locally covering along a cover is not itself a cover"
                        )
                        break
        return tuple(v)


def topology_of_ideal(i: MorphismIdeal) -> GrothendieckTopology:
    """Sieves containing every ideal map into the object cover it."""
    if not is_idempotent_ideal(i):
        raise NotIdempotent("the ideal is not idempotent")
    c = i.category
    covers = []
    for x in c.objects():
        least = frozenset(f for f in c.morphisms_into(x) if f in i.members)
        covers.append(
            frozenset(s for s in enumerate_sieves(c, x) if least <= s.members)
        )
    return GrothendieckTopology(category=c, covers=tuple(covers))


@dataclass(frozen=True)
class Level:
    """An essential subtopos, keyed by its idempotent ideal."""

    ideal: MorphismIdeal
    topology: GrothendieckTopology

    @property
    def category(self) -> FinCategory:
        return self.ideal.category

    def member_names(self) -> tuple[str, ...]:
        return self.ideal.member_names()


def level_of_ideal(i: MorphismIdeal) -> Level:
    return Level(ideal=i, topology=topology_of_ideal(i))


def centre_level(c: FinCategory) -> Level:
    """The level generated by all points: maps factoring through the terminal."""
    return level_of_ideal(ideal_generated_by(c, set(all_points(c))))


def enumerate_levels(
    c: FinCategory, max_morphisms: int = DEFAULT_MAX_MORPHISMS
) -> list[Level]:
    return [level_of_ideal(i) for i in enumerate_idempotent_ideals(c, max_morphisms)]


def is_above(a: Level, b: Level) -> bool:
    """Larger ideal means higher level; cross-checked on the topologies."""
    if a.category != b.category:
        raise BaseMismatch("levels live over different base categories")
    by_ideal = b.ideal.members <= a.ideal.members
    by_covers = all(
        a.topology.covers[x] <= b.topology.covers[x]
        for x in a.category.objects()
    )
    assert by_ideal == by_covers, "ideal order and cover order disagree"
    return by_ideal


def is_above_centre(l: Level) -> bool:
    """Does every covering sieve contain all points (equivalently, ideal ⊇ points)?"""
    c = l.category
    pts = set(all_points(c))  # raises NoTerminal when there is no terminal
    by_ideal = pts <= l.ideal.members
    by_sieves = all(
        {p for p in pts if c.cod[p] == x} <= s.members
        for x in c.objects()
        for s in l.topology.covers[x]
    )
    assert by_ideal == by_sieves
    return by_ideal


def is_subquality_level(l: Level) -> bool:
    """Is the level below the pseudo-constants (given it sits above the centre)?"""
    if not is_above_centre(l):
        raise NotAboveCentre("level is not above the centre")
    c = l.category
    pc = set(pseudo_constants(c))
    by_ideal = l.ideal.members <= pc
    by_sieves = all(
        Sieve(
            category=c,
            target=x,
            members=frozenset(f for f in c.morphisms_into(x) if f in pc),
        )
        in l.topology.covers[x]
        for x in c.objects()
    )
    assert by_ideal == by_sieves
    return by_ideal


def irreducible_objects(t: GrothendieckTopology) -> tuple[int, ...]:
    """Objects whose only covering sieve is the maximal one."""
    c = t.category
    return tuple(
        x for x in c.objects()
        if t.covers[x] == frozenset({maximal_sieve(c, x)})
    )


def is_rigid(t: GrothendieckTopology) -> bool:
    """Is every object covered by its maps from irreducible objects?"""
    c = t.category
    irr = set(irreducible_objects(t))
    for x in c.objects():
        # maps factoring through an irreducible object form the generated sieve
        members = frozenset(
            f for f in c.morphisms_into(x)
            if any(
                c.table[m][e] == f
                for z in irr
                for m in c.hom(z, x)
                for e in c.hom(c.dom[f], z)
            )
        )
        if Sieve(category=c, target=x, members=members) not in t.covers[x]:
            return False
    return True


def is_quality_type_level(l: Level) -> bool:
    """Do all irreducibles of the level have exactly one point?

    For a rigid level above the centre this matches the restricted-φ
    isomorphism test performed in the presheaf layer.
    """
    if not is_rigid(l.topology):
        raise NotRigid("quality-type test needs a rigid topology")
    if not is_above_centre(l):
        raise NotAboveCentre("quality-type test needs a level above the centre")
    c = l.category
    return all(
        len(points(c, x)) == 1 for x in irreducible_objects(l.topology)
    )


def _require_precohesive(c: FinCategory) -> None:
    if terminal_object(c) is None:
        raise NoTerminal("category has no terminal object")
    pointless = [
        c.object_names[x] for x in c.objects() if not points(c, x)
    ]
    if pointless:
        raise NotPreCohesiveSite(
            f"objects without a point: {', '.join(pointless)}"
        )


@dataclass(frozen=True)
class EpsilonReport:
    """Outcome of the level-ε search."""

    found: bool
    ideal: MorphismIdeal | None
    equals_centre: bool | None
    enough_little_figures: bool
    little_figure_objects: tuple[str, ...]
    irreducibles: tuple[str, ...] | None
    maximal_candidates: tuple[MorphismIdeal, ...]
    note: str

    def level(self) -> Level:
        if self.ideal is None:
            raise CohesionError("no level ε was found")
        return level_of_ideal(self.ideal)

    def to_dict(self) -> dict:
        return {
            "found": self.found,
            "ideal": None if self.ideal is None else list(self.ideal.member_names()),
            "ideal_size": None if self.ideal is None else len(self.ideal),
            "equals_centre": self.equals_centre,
            "enough_little_figures": self.enough_little_figures,
            "little_figure_objects": list(self.little_figure_objects),
            "irreducibles": None if self.irreducibles is None else list(self.irreducibles),
            "maximal_candidates": [
                list(i.member_names()) for i in self.maximal_candidates
            ],
            "note": self.note,
        }


def level_epsilon(
    c: FinCategory, max_morphisms: int = DEFAULT_MAX_MORPHISMS
) -> EpsilonReport:
    """The largest level between the centre and the pseudo-constants.

    When the pseudo-constant ideal is idempotent it is ε itself;
    otherwise the enumerated idempotent ideals between the points and
    the pseudo-constants are searched for a unique largest element.
    """
    from .fincat import has_enough_little_figures, unique_point_objects

    _require_precohesive(c)
    pc = pseudo_constant_ideal(c)
    centre = centre_level(c)
    elf, _ = has_enough_little_figures(c)
    lf_objects = unique_point_objects(c).object_names()

    if is_idempotent_ideal(pc):
        level = level_of_ideal(pc)
        return EpsilonReport(
            found=True,
            ideal=pc,
            equals_centre=pc.members == centre.ideal.members,
            enough_little_figures=elf,
            little_figure_objects=lf_objects,
            irreducibles=tuple(
                c.object_names[o] for o in irreducible_objects(level.topology)
            ),
            maximal_candidates=(pc,),
            note="pseudo-constant ideal is idempotent",
        )

    candidates = [
        i for i in enumerate_idempotent_ideals(c, max_morphisms)
        if centre.ideal.members <= i.members <= pc.members
    ]
    maximal = [
        i for i in candidates
        if not any(
            i.members < j.members for j in candidates
        )
    ]
    if len(maximal) == 1:
        ideal = maximal[0]
        level = level_of_ideal(ideal)
        return EpsilonReport(
            found=True,
            ideal=ideal,
            equals_centre=ideal.members == centre.ideal.members,
            enough_little_figures=elf,
            little_figure_objects=lf_objects,
            irreducibles=tuple(
                c.object_names[o] for o in irreducible_objects(level.topology)
            ),
            maximal_candidates=tuple(maximal),
            note="largest idempotent ideal between points and pseudo-constants",
        )
    return EpsilonReport(
        found=False,
        ideal=None,
        equals_centre=None,
        enough_little_figures=elf,
        little_figure_objects=lf_objects,
        irreducibles=None,
        maximal_candidates=tuple(maximal),
        note="no unique largest subquality ideal; maximal candidates reported",
    )


def check_way_above(l: Level, j: Level, witnesses: list) -> bool:
    """Witness-bounded test that j is way-above l.

    For each witness presheaf the l-skeleton must be a j-sheaf.  Needs l
    to be rigid so its skeleton is computable from the irreducibles.
    """
    from . import presheaf as psh

    if not is_above(j, l):
        return False
    if not is_rigid(l.topology):
        raise NotRigid("way-above test needs the lower level to be rigid")
    sub = FullSubcategory(parent=l.category, objects=irreducible_objects(l.topology))
    for x in witnesses:
        sk, _counit = psh.skeleton(sub, x)
        if not psh.sheaf_check(j.topology, sk):
            return False
    return True


@dataclass(frozen=True)
class SearchReport:
    """Result of the bounded Aufhebung search."""

    base: MorphismIdeal
    minimal: tuple[MorphismIdeal, ...]
    passing: tuple[MorphismIdeal, ...]
    witness_count: int
    note: str

    def to_dict(self) -> dict:
        return {
            "base": list(self.base.member_names()),
            "minimal": [list(i.member_names()) for i in self.minimal],
            "passing": [list(i.member_names()) for i in self.passing],
            "witness_count": self.witness_count,
            "note": self.note,
        }


def default_witnesses(c: FinCategory) -> list:
    """Representables, the subobject classifier, and (if possible) codiscrete 2."""
    from . import presheaf as psh

    out = [psh.representable(c, x) for x in c.objects()]
    out.append(psh.omega(c))
    if terminal_object(c) is not None:
        out.append(psh.codiscrete(c, 2))
    return out


def aufhebung_search(
    l: Level,
    witnesses: list | None = None,
    bound: int = DEFAULT_MAX_MORPHISMS,
) -> SearchReport:
    """Minimal enumerated levels above ``l`` whose sheaves absorb l-skeleta.

    This is a necessary-condition filter over the supplied witnesses,
    not a proof: way-above quantifies over all presheaves.
    """
    c = l.category
    if witnesses is None:
        witnesses = default_witnesses(c)
    passing = [
        j for j in enumerate_levels(c, bound)
        if is_above(j, l) and check_way_above(l, j, witnesses)
    ]
    minimal = [
        j for j in passing
        if not any(
            k.ideal.members < j.ideal.members for k in passing
        )
    ]
    return SearchReport(
        base=l.ideal,
        minimal=tuple(sorted((j.ideal for j in minimal), key=lambda i: i.as_sorted_tuple())),
        passing=tuple(sorted((j.ideal for j in passing), key=lambda i: i.as_sorted_tuple())),
        witness_count=len(witnesses),
        note="witness-bounded: necessary-condition filter, not a proof",
    )


def restrict_ideal(i: MorphismIdeal, sub: FullSubcategory) -> MorphismIdeal:
    """The ideal's trace on a full subcategory, over the reindexed category."""
    if sub.parent != i.category:
        raise BaseMismatch("subcategory belongs to a different base category")
    cat, _omap, mmap = sub.as_category()
    members = frozenset(mmap[f] for f in sub.morphisms() if f in i.members)
    return MorphismIdeal(category=cat, members=members)
