"""Finite categories given by explicit composition tables.

Objects and morphisms carry dense 0-based integer ids, so subsets of
morphisms can be treated as bitsets by callers.  Everything is validated
by direct enumeration; all values are immutable after construction.
"""
from __future__ import annotations

from dataclasses import dataclass, field


class CohesionError(Exception):
    """Base class for domain errors raised by this package."""


class MalformedInput(CohesionError):
    """Input data does not describe a well-formed object."""


class TooLarge(CohesionError):
    """Requested enumeration exceeds the configured size bound."""


class NotPreCohesiveSite(CohesionError):
    """The category lacks the terminal-and-points structure required here."""


class NoTerminal(NotPreCohesiveSite):
    """The category has no terminal object."""


@dataclass(frozen=True)
class ValidationReport:
    """List of violated invariants; empty means the input is valid."""

    violations: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def summary(self) -> str:
        if self.ok:
            return "valid"
        return "invalid: " + "; ".join(self.violations)


@dataclass(frozen=True)
class FinCategory:
    """A finite category: named objects/morphisms plus a total composition table.

    ``table[g][f]`` is the id of ``g after f`` when ``dom(g) == cod(f)``
    and ``-1`` otherwise.  ``identity[x]`` is the identity morphism of
    object ``x``.
    """

    object_names: tuple[str, ...]
    morphism_names: tuple[str, ...]
    dom: tuple[int, ...]
    cod: tuple[int, ...]
    identity: tuple[int, ...]
    table: tuple[tuple[int, ...], ...]

    @property
    def n_objects(self) -> int:
        return len(self.object_names)

    @property
    def n_morphisms(self) -> int:
        return len(self.morphism_names)

    def objects(self) -> range:
        return range(self.n_objects)

    def morphisms(self) -> range:
        return range(self.n_morphisms)

    def compose(self, g: int, f: int) -> int:
        """Return g∘f, raising if the pair is not composable."""
        gf = self.table[g][f]
        if gf < 0:
            raise ValueError(
                f"morphisms {self.morphism_names[g]!r} and "
                f"{self.morphism_names[f]!r} are not composable"
            )
        return gf

    def composable(self, g: int, f: int) -> bool:
        return self.dom[g] == self.cod[f]

    def is_identity(self, f: int) -> bool:
        return self.identity[self.dom[f]] == f and self.dom[f] == self.cod[f]

    def hom(self, x: int, y: int) -> tuple[int, ...]:
        return tuple(
            f for f in self.morphisms() if self.dom[f] == x and self.cod[f] == y
        )

    def morphisms_into(self, y: int) -> tuple[int, ...]:
        return tuple(f for f in self.morphisms() if self.cod[f] == y)

    def morphisms_out_of(self, x: int) -> tuple[int, ...]:
        return tuple(f for f in self.morphisms() if self.dom[f] == x)

    def object_index(self, name: str) -> int:
        try:
            return self.object_names.index(name)
        except ValueError:
            raise MalformedInput(f"unknown object name {name!r}") from None

    def morphism_index(self, name: str) -> int:
        try:
            return self.morphism_names.index(name)
        except ValueError:
            raise MalformedInput(f"unknown morphism name {name!r}") from None

    def to_dict(self) -> dict:
        """Serialize in the interchange format accepted by :func:`category_from_dict`."""
        mn = self.morphism_names
        triples = []
        for g in self.morphisms():
            for f in self.morphisms():
                if self.composable(g, f):
                    triples.append([mn[g], mn[f], mn[self.table[g][f]]])
        return {
            "objects": list(self.object_names),
            "morphisms": [
                {"name": mn[f], "dom": self.object_names[self.dom[f]],
                 "cod": self.object_names[self.cod[f]]}
                for f in self.morphisms()
            ],
            "identities": {
                self.object_names[x]: mn[self.identity[x]] for x in self.objects()
            },
            "compose": triples,
        }


def category_from_dict(data: dict) -> FinCategory:
    """Build a :class:`FinCategory` from its JSON interchange form.

    Names map to dense ids in file order.  Partial or over-complete
    composition tables are rejected.
    """
    if not isinstance(data, dict):
        raise MalformedInput("category data must be a JSON object")
    missing = {"objects", "morphisms", "identities", "compose"} - set(data)
    if missing:
        raise MalformedInput(f"category data missing keys: {sorted(missing)}")

    object_names = tuple(data["objects"])
    if len(set(object_names)) != len(object_names):
        raise MalformedInput("duplicate object names")
    obj_id = {name: i for i, name in enumerate(object_names)}

    morphism_names: list[str] = []
    dom: list[int] = []
    cod: list[int] = []
    for entry in data["morphisms"]:
        try:
            name, d, c = entry["name"], entry["dom"], entry["cod"]
        except (TypeError, KeyError):
            raise MalformedInput(f"bad morphism entry: {entry!r}") from None
        if name in morphism_names:
            raise MalformedInput(f"duplicate morphism name {name!r}")
        if d not in obj_id or c not in obj_id:
            raise MalformedInput(f"morphism {name!r} references unknown object")
        morphism_names.append(name)
        dom.append(obj_id[d])
        cod.append(obj_id[c])
    mor_id = {name: i for i, name in enumerate(morphism_names)}
    n = len(morphism_names)

    identity = [-1] * len(object_names)
    for obj, mor in data["identities"].items():
        if obj not in obj_id:
            raise MalformedInput(f"identity for unknown object {obj!r}")
        if mor not in mor_id:
            raise MalformedInput(f"unknown identity morphism {mor!r}")
        identity[obj_id[obj]] = mor_id[mor]
    if any(i < 0 for i in identity):
        raise MalformedInput("every object needs an identity morphism")

    table = [[-1] * n for _ in range(n)]
    for triple in data["compose"]:
        if not (isinstance(triple, (list, tuple)) and len(triple) == 3):
            raise MalformedInput(f"bad compose entry: {triple!r}")
        gname, fname, gfname = triple
        for nm in (gname, fname, gfname):
            if nm not in mor_id:
                raise MalformedInput(f"compose entry uses unknown morphism {nm!r}")
        g, f, gf = mor_id[gname], mor_id[fname], mor_id[gfname]
        if dom[g] != cod[f]:
            raise MalformedInput(
                f"compose entry ({gname!r}, {fname!r}) is not a composable pair"
            )
        if table[g][f] != -1:
            raise MalformedInput(f"duplicate compose entry for ({gname!r}, {fname!r})")
        table[g][f] = gf
    for g in range(n):
        for f in range(n):
            if (dom[g] == cod[f]) != (table[g][f] != -1):
                raise MalformedInput(
                    "composition table must cover exactly the composable pairs "
                    f"(missing or spurious at ({morphism_names[g]!r}, "
                    f"{morphism_names[f]!r}))"
                )

    return FinCategory(
        object_names=object_names,
        morphism_names=tuple(morphism_names),
        dom=tuple(dom),
        cod=tuple(cod),
        identity=tuple(identity),
        table=tuple(tuple(row) for row in table),
    )


def validate_category(c: FinCategory) -> ValidationReport:
    """Check dom/cod coherence, identity laws, and associativity exhaustively."""
    v: list[str] = []
    mn = c.morphism_names
    for x in c.objects():
        i = c.identity[x]
        if c.dom[i] != x or c.cod[i] != x:
            v.append(f"identity {mn[i]!r} of {c.object_names[x]!r} is not an endomorphism")
    for g in c.morphisms():
        for f in c.morphisms():
            gf = c.table[g][f]
            if gf < 0:
                continue
            if c.dom[gf] != c.dom[f] or c.cod[gf] != c.cod[g]:
                v.append(f"compose({mn[g]!r}, {mn[f]!r}) has wrong dom/cod")
    for f in c.morphisms():
        if c.table[c.identity[c.cod[f]]][f] != f:
            v.append(f"left identity law fails at {mn[f]!r}")
        if c.table[f][c.identity[c.dom[f]]] != f:
            v.append(f"right identity law fails at {mn[f]!r}")
    for h in c.morphisms():
        for g in c.morphisms():
            if not c.composable(h, g):
                continue
            hg = c.table[h][g]
            for f in c.morphisms():
                if not c.composable(g, f):
                    continue
                if c.table[h][c.table[g][f]] != c.table[hg][f]:
                    v.append(
                        f"associativity fails at ({mn[h]!r}, {mn[g]!r}, {mn[f]!r})"
                    )
    return ValidationReport(tuple(v))


@dataclass(frozen=True)
class TerminalInfo:
    """The chosen terminal object together with its isomorphism class."""

    object: int
    iso_class: tuple[int, ...]


def terminal_object(c: FinCategory) -> TerminalInfo | None:
    """Find the terminal object (least id among the iso class), or ``None``."""
    terminals = tuple(
        t for t in c.objects()
        if all(len(c.hom(x, t)) == 1 for x in c.objects())
    )
    if not terminals:
        return None
    return TerminalInfo(object=terminals[0], iso_class=terminals)


def _require_terminal(c: FinCategory) -> int:
    info = terminal_object(c)
    if info is None:
        raise NoTerminal("category has no terminal object")
    return info.object


def points(c: FinCategory, x: int) -> tuple[int, ...]:
    """All morphisms terminal → x."""
    t = _require_terminal(c)
    return c.hom(t, x)


def all_points(c: FinCategory) -> tuple[int, ...]:
    """Points of every object, as one sorted tuple of morphism ids."""
    t = _require_terminal(c)
    return tuple(f for f in c.morphisms() if c.dom[f] == t)


def is_pseudo_constant(c: FinCategory, f: int) -> bool:
    """True iff f∘a = f∘b for all points a, b of dom(f).

    Vacuously true when the domain has at most one point.
    """
    pts = points(c, c.dom[f])
    images = {c.table[f][a] for a in pts}
    return len(images) <= 1


def pseudo_constants(c: FinCategory) -> tuple[int, ...]:
    """All pseudo-constant morphisms, ascending."""
    _require_terminal(c)
    return tuple(f for f in c.morphisms() if is_pseudo_constant(c, f))


@dataclass(frozen=True)
class FullSubcategory:
    """A full subcategory of ``parent`` on a subset of objects."""

    parent: FinCategory
    objects: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "objects", tuple(sorted(set(self.objects))))
        for x in self.objects:
            if not 0 <= x < self.parent.n_objects:
                raise MalformedInput(f"object id {x} not in parent category")

    def morphisms(self) -> tuple[int, ...]:
        obj = set(self.objects)
        return tuple(
            f for f in self.parent.morphisms()
            if self.parent.dom[f] in obj and self.parent.cod[f] in obj
        )

    def object_names(self) -> tuple[str, ...]:
        return tuple(self.parent.object_names[x] for x in self.objects)

    def as_category(self) -> tuple[FinCategory, dict[int, int], dict[int, int]]:
        """Reindex as a standalone category.

        Returns the category plus the parent→sub object and morphism id maps.
        """
        p = self.parent
        omap = {x: i for i, x in enumerate(self.objects)}
        mors = self.morphisms()
        mmap = {f: i for i, f in enumerate(mors)}
        table = tuple(
            tuple(
                mmap[p.table[g][f]] if p.composable(g, f) else -1
                for f in mors
            )
            for g in mors
        )
        cat = FinCategory(
            object_names=self.object_names(),
            morphism_names=tuple(p.morphism_names[f] for f in mors),
            dom=tuple(omap[p.dom[f]] for f in mors),
            cod=tuple(omap[p.cod[f]] for f in mors),
            identity=tuple(mmap[p.identity[x]] for x in self.objects),
            table=table,
        )
        return cat, omap, mmap


def unique_point_objects(c: FinCategory) -> FullSubcategory:
    """The full subcategory on objects with exactly one point."""
    _require_terminal(c)
    keep = tuple(x for x in c.objects() if len(points(c, x)) == 1)
    return FullSubcategory(parent=c, objects=keep)


@dataclass(frozen=True)
class FunctorWitness:
    """An explicit functor: object and morphism id maps between two categories."""

    source: FinCategory
    target: FinCategory
    object_map: tuple[int, ...]
    morphism_map: tuple[int, ...]

    def check(self) -> ValidationReport:
        """Verify dom/cod compatibility, identities, and composition."""
        v: list[str] = []
        s, t = self.source, self.target
        for f in s.morphisms():
            ff = self.morphism_map[f]
            if t.dom[ff] != self.object_map[s.dom[f]]:
                v.append(f"dom mismatch at {s.morphism_names[f]!r}")
            if t.cod[ff] != self.object_map[s.cod[f]]:
                v.append(f"cod mismatch at {s.morphism_names[f]!r}")
        for x in s.objects():
            if self.morphism_map[s.identity[x]] != t.identity[self.object_map[x]]:
                v.append(f"identity not preserved at {s.object_names[x]!r}")
        for g in s.morphisms():
            for f in s.morphisms():
                if not s.composable(g, f):
                    continue
                lhs = self.morphism_map[s.table[g][f]]
                rhs = t.table[self.morphism_map[g]][self.morphism_map[f]]
                if lhs != rhs:
                    v.append(
                        f"composition not preserved at ({s.morphism_names[g]!r}, "
                        f"{s.morphism_names[f]!r})"
                    )
        return ValidationReport(tuple(v))

    def is_fully_faithful(self) -> bool:
        """Hom-set bijectivity between every pair of source objects."""
        s, t = self.source, self.target
        for x in s.objects():
            for y in s.objects():
                image = {self.morphism_map[f] for f in s.hom(x, y)}
                target_hom = set(t.hom(self.object_map[x], self.object_map[y]))
                if len(image) != len(s.hom(x, y)) or image != target_hom:
                    return False
        return True


def idempotents(c: FinCategory) -> tuple[int, ...]:
    """All morphisms e with e∘e = e (endomorphisms included identities)."""
    return tuple(
        e for e in c.morphisms()
        if c.dom[e] == c.cod[e] and c.table[e][e] == e
    )


def karoubi_envelope(
    c: FinCategory, skeletal: bool = True
) -> tuple[FinCategory, FunctorWitness]:
    """Split all idempotents of ``c``.

    Objects of the envelope are the idempotent morphisms of ``c``; the
    hom-set from e to e' is {f | e'∘f∘e = f}.  With ``skeletal=True``,
    isomorphic objects are merged, keeping the least morphism id as the
    representative.  Returns the envelope and the embedding functor.
    """
    idems = list(idempotents(c))

    def env_hom(e: int, e2: int) -> list[int]:
        out: list[int] = []
        for f in c.morphisms():
            if c.dom[f] != c.dom[e] or c.cod[f] != c.dom[e2]:
                continue
            if c.table[c.table[e2][f]][e] == f:
                out.append(f)
        return out

    # Isomorphism classes of idempotents: e ≅ e2 iff there are u: e→e2,
    # v: e2→e with v∘u = e and u∘v = e2.
    def isomorphic(e: int, e2: int) -> bool:
        for u in env_hom(e, e2):
            for v in env_hom(e2, e):
                if c.table[v][u] == e and c.table[u][v] == e2:
                    return True
        return False

    if skeletal:
        kept: list[int] = []
        rep: dict[int, int] = {}
        for e in idems:
            for k in kept:
                if isomorphic(k, e):
                    rep[e] = k
                    break
            else:
                kept.append(e)
                rep[e] = e
        objs = kept
    else:
        objs = idems
        rep = {e: e for e in idems}

    obj_of = {e: i for i, e in enumerate(objs)}
    object_names = tuple(f"split({c.morphism_names[e]})" for e in objs)

    morphs: list[tuple[int, int, int]] = []  # (source obj idx, target obj idx, f)
    for i, e in enumerate(objs):
        for j, e2 in enumerate(objs):
            for f in env_hom(e, e2):
                morphs.append((i, j, f))
    mor_of = {m: k for k, m in enumerate(morphs)}
    morphism_names = tuple(
        f"{c.morphism_names[f]}[{object_names[i]}->{object_names[j]}]"
        for (i, j, f) in morphs
    )
    dom = tuple(i for (i, _, _) in morphs)
    cod = tuple(j for (_, j, _) in morphs)
    identity = tuple(mor_of[(i, i, e)] for i, e in enumerate(objs))
    table = tuple(
        tuple(
            mor_of[(i1, j2, c.table[g][f])] if j1 == i2 else -1
            for (i1, j1, f) in morphs
        )
        for (i2, j2, g) in morphs
    )
    env = FinCategory(
        object_names=object_names,
        morphism_names=morphism_names,
        dom=dom,
        cod=cod,
        identity=identity,
        table=table,
    )

    # Embedding: X goes to the class representative of id_X; a morphism f
    # is conjugated by the chosen isos when its endpoint identities merged.
    iso_pair: dict[int, tuple[int, int]] = {}  # e -> (u: e→rep, v: rep→e)
    for e in idems:
        r = rep[e]
        if r == e:
            iso_pair[e] = (e, e)
            continue
        found = None
        for u in env_hom(e, r):
            for v in env_hom(r, e):
                if c.table[v][u] == e and c.table[u][v] == r:
                    found = (u, v)
                    break
            if found:
                break
        assert found is not None
        iso_pair[e] = found

    object_map = tuple(obj_of[rep[c.identity[x]]] for x in c.objects())
    morphism_map = []
    for f in c.morphisms():
        e_dom, e_cod = c.identity[c.dom[f]], c.identity[c.cod[f]]
        u_cod, _ = iso_pair[e_cod]
        _, v_dom = iso_pair[e_dom]
        g = c.table[c.table[u_cod][f]][v_dom]
        morphism_map.append(mor_of[(obj_of[rep[e_dom]], obj_of[rep[e_cod]], g)])
    witness = FunctorWitness(
        source=c,
        target=env,
        object_map=object_map,
        morphism_map=tuple(morphism_map),
    )
    return env, witness


def has_enough_little_figures(c: FinCategory) -> tuple[bool, tuple[int, ...]]:
    """Does every pseudo-constant factor through a one-point object?

    Returns the verdict and, when false, the pseudo-constants with no
    such factorization.
    """
    _require_terminal(c)
    one_point = [x for x in c.objects() if len(points(c, x)) == 1]
    uncovered: list[int] = []
    for f in pseudo_constants(c):
        ok = False
        for z in one_point:
            for e in c.hom(c.dom[f], z):
                for m in c.hom(z, c.cod[f]):
                    if c.table[m][e] == f:
                        ok = True
                        break
                if ok:
                    break
            if ok:
                break
        if not ok:
            uncovered.append(f)
    return (not uncovered, tuple(uncovered))
