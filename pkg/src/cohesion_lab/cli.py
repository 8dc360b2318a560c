"""Command-line front door for the category, level, presheaf, and algebra tools.

Exit codes: 0 success, 1 domain error (a mathematical precondition
failed), 2 malformed input (unreadable file, bad JSON, unknown name).
Machine output is deterministic: keys sorted, schema versioned.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from importlib import resources

from .fincat import (
    CohesionError,
    FinCategory,
    FullSubcategory,
    MalformedInput,
    category_from_dict,
    has_enough_little_figures,
    karoubi_envelope,
    points,
    pseudo_constants,
    terminal_object,
    validate_category,
)
from .levels import (
    DEFAULT_MAX_MORPHISMS,
    MorphismIdeal,
    NotAboveCentre,
    NotRigid,
    aufhebung_search,
    enumerate_idempotent_ideals,
    irreducible_objects,
    is_above_centre,
    is_rigid,
    is_subquality_level,
    level_epsilon,
    level_of_ideal,
)
from . import presheaf as psh

SCHEMA_VERSION = "1"
FIXTURE_NAMES = (
    "delta1",
    "chain3",
    "graphic_m",
    "karoubi_m",
    "weil_dual",
    "prod_qq",
    "weil_3dim",
)
_CATEGORY_FIXTURES = frozenset({"delta1", "chain3", "graphic_m", "karoubi_m"})
_ALGEBRA_FIXTURES = frozenset({"weil_dual", "prod_qq", "weil_3dim"})


class UnknownFixture(MalformedInput):
    """The requested name is not in the shipped fixture set."""


def _fixture_data(name: str) -> dict:
    path = resources.files("cohesion_lab").joinpath("fixtures").joinpath(f"{name}.json")
    return json.loads(path.read_text())


def load_fixture(name: str):
    """Load and validate a shipped fixture by name."""
    if name not in FIXTURE_NAMES:
        raise UnknownFixture(
            f"unknown fixture {name!r}; shipped fixtures: {', '.join(FIXTURE_NAMES)}"
        )
    data = _fixture_data(name)
    if name in _ALGEBRA_FIXTURES:
        from . import algfin

        a = algfin.algebra_from_dict(data)
        report = algfin.validate_algebra(a)
        if not report.ok:
            raise CohesionError(report.summary())
        return a
    c = category_from_dict(data)
    report = validate_category(c)
    if not report.ok:
        raise CohesionError(report.summary())
    return c


def _read_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _resolve_data(ref: str, base_dir: str | None = None) -> dict:
    """Fixture name or file path → parsed JSON data."""
    if ref in FIXTURE_NAMES:
        return _fixture_data(ref)
    candidates = [ref]
    if base_dir is not None and not os.path.isabs(ref):
        candidates.append(os.path.join(base_dir, ref))
    for path in candidates:
        if os.path.exists(path):
            return _read_json(path)
    raise MalformedInput(f"no fixture or file named {ref!r}")


def _load_category(ref: str, base_dir: str | None = None) -> FinCategory:
    data = _resolve_data(ref, base_dir)
    if "objects" not in data:
        raise MalformedInput(f"{ref!r} is not a category file")
    return category_from_dict(data)


def _load_presheaf(ref: str) -> tuple[psh.Presheaf, str]:
    """Load a presheaf file; returns the presheaf and its category reference."""
    data = _resolve_data(ref)
    if "sets" not in data or "actions" not in data:
        raise MalformedInput(f"{ref!r} is not a presheaf file")
    cat_ref = data.get("category")
    if not isinstance(cat_ref, str):
        raise MalformedInput("presheaf file needs a 'category' reference")
    base_dir = os.path.dirname(os.path.abspath(ref)) if os.path.exists(ref) else None
    c = _load_category(cat_ref, base_dir)
    return psh.presheaf_from_dict(data, c), cat_ref


def _load_ideal(path: str, c: FinCategory) -> MorphismIdeal:
    data = _resolve_data(path)
    if not isinstance(data, list):
        raise MalformedInput("ideal file must be a JSON list of morphism names")
    members = frozenset(c.morphism_index(str(name)) for name in data)
    return MorphismIdeal(category=c, members=members)


def _max_morphisms(args) -> int:
    if args.max_morphisms is not None:
        return args.max_morphisms
    env = os.environ.get("COHESION_LAB_MAX_MORPHISMS")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise MalformedInput(
                f"COHESION_LAB_MAX_MORPHISMS must be an integer, got {env!r}"
            ) from None
    return DEFAULT_MAX_MORPHISMS


def _emit(args, command: str, payload: dict, status: str = "ok") -> None:
    if args.format == "json":
        body = {"schema_version": SCHEMA_VERSION, "command": command,
                "status": status, **payload}
        sys.stdout.write(json.dumps(body, sort_keys=True, indent=2) + "\n")
    else:
        _emit_text(command, payload, status)


def _emit_text(command: str, payload: dict, status: str) -> None:
    lines = [f"{command}: {status}"]

    def walk(path: str, value) -> None:
        if isinstance(value, dict):
            for k in sorted(value):
                walk(f"{path}.{k}" if path else str(k), value[k])
        elif isinstance(value, list):
            lines.append(f"  {path} = {json.dumps(value)}")
        else:
            lines.append(f"  {path} = {value}")

    walk("", payload)
    sys.stdout.write("\n".join(lines) + "\n")


# ---------------------------------------------------------------- commands


def _cmd_cat_validate(args) -> int:
    c = _load_category(args.category)
    report = validate_category(c)
    info = terminal_object(c)
    payload = {
        "input": args.category,
        "valid": report.ok,
        "violations": list(report.violations),
        "objects": c.n_objects,
        "morphisms": c.n_morphisms,
        "terminal": None if info is None else c.object_names[info.object],
        "normalized": c.to_dict(),
    }
    if info is not None:
        payload["points"] = {
            c.object_names[o]: len(points(c, o)) for o in c.objects()
        }
        payload["pseudo_constants"] = sorted(
            c.morphism_names[f] for f in pseudo_constants(c)
        )
        elf, uncovered = has_enough_little_figures(c)
        payload["enough_little_figures"] = elf
        payload["uncovered_pseudo_constants"] = sorted(
            c.morphism_names[f] for f in uncovered
        )
    _emit(args, "cat validate", payload, "ok" if report.ok else "invalid")
    return 0 if report.ok else 1


def _cmd_cat_karoubi(args) -> int:
    c = _load_category(args.category)
    env, witness = karoubi_envelope(c, skeletal=args.skeletal)
    check = witness.check()
    payload = {
        "input": args.category,
        "skeletal": args.skeletal,
        "objects": env.n_objects,
        "morphisms": env.n_morphisms,
        "embedding_is_functor": check.ok,
        "embedding_fully_faithful": witness.is_fully_faithful(),
        "envelope": env.to_dict(),
    }
    _emit(args, "cat karoubi", payload)
    return 0


def _cmd_levels_enumerate(args) -> int:
    c = _load_category(args.category)
    ideals = enumerate_idempotent_ideals(c, _max_morphisms(args))
    has_terminal = terminal_object(c) is not None
    rows = []
    for ideal in ideals:
        row: dict = {
            "size": len(ideal),
            "members": list(ideal.member_names()),
        }
        if has_terminal:
            level = level_of_ideal(ideal)
            above = is_above_centre(level)
            row["above_centre"] = above
            row["subquality"] = is_subquality_level(level) if above else None
        else:
            row["above_centre"] = None
            row["subquality"] = None
        rows.append(row)
    payload = {
        "input": args.category,
        "count": len(rows),
        "levels": rows,
    }
    _emit(args, "levels enumerate", payload)
    return 0


def _cmd_levels_epsilon(args) -> int:
    c = _load_category(args.category)
    report = level_epsilon(c, _max_morphisms(args))
    _emit(args, "levels epsilon", {"input": args.category, **report.to_dict()})
    return 0


def _cmd_levels_aufhebung(args) -> int:
    c = _load_category(args.category)
    if args.level is not None:
        base = level_of_ideal(_load_ideal(args.level, c))
    else:
        eps = level_epsilon(c, _max_morphisms(args))
        if not eps.found:
            raise NotAboveCentre("no level ε found to use as the default base")
        base = eps.level()
    witnesses = None
    if args.witness:
        witnesses = []
        for ref in args.witness:
            x, _ = _load_presheaf(ref)
            if x.category != c:
                raise MalformedInput(
                    f"witness {ref!r} is not a presheaf over {args.category!r}"
                )
            witnesses.append(x)
    report = aufhebung_search(base, witnesses=witnesses, bound=_max_morphisms(args))
    _emit(args, "levels aufhebung", {"input": args.category, **report.to_dict()})
    return 0


def _sub_for_level(args, c: FinCategory) -> FullSubcategory:
    if args.level is None:
        level = level_epsilon(c, _max_morphisms(args)).level()
    else:
        level = level_of_ideal(_load_ideal(args.level, c))
    if not is_rigid(level.topology):
        raise NotRigid("the level's topology is not rigid")
    return FullSubcategory(
        parent=c, objects=irreducible_objects(level.topology)
    )


def _cmd_presheaf_pi0(args) -> int:
    x, cat_ref = _load_presheaf(args.presheaf)
    result = psh.pi0(x)
    payload = {
        "input": args.presheaf,
        "category": cat_ref,
        "count": result.count,
        "components": [
            [[x.category.object_names[o], tag] for (o, tag) in group]
            for group in result.components
        ],
    }
    _emit(args, "presheaf pi0", payload)
    return 0


def _cmd_presheaf_skeleton(args) -> int:
    x, cat_ref = _load_presheaf(args.presheaf)
    sub = _sub_for_level(args, x.category)
    sk, counit = psh.skeleton(sub, x)
    payload = {
        "input": args.presheaf,
        "category": cat_ref,
        "irreducibles": list(sub.object_names()),
        "is_skeletal": counit.is_iso(),
        "skeleton": sk.to_dict(cat_ref),
    }
    _emit(args, "presheaf skeleton", payload)
    return 0


def _cmd_presheaf_coskeleton(args) -> int:
    x, cat_ref = _load_presheaf(args.presheaf)
    sub = _sub_for_level(args, x.category)
    cosk, unit = psh.coskeleton(sub, x)
    payload = {
        "input": args.presheaf,
        "category": cat_ref,
        "irreducibles": list(sub.object_names()),
        "is_sheaf": unit.is_iso(),
        "coskeleton": cosk.to_dict(cat_ref),
    }
    _emit(args, "presheaf coskeleton", payload)
    return 0


def _cmd_presheaf_sheaf_check(args) -> int:
    x, cat_ref = _load_presheaf(args.presheaf)
    if args.level is None:
        level = level_epsilon(x.category, _max_morphisms(args)).level()
    else:
        level = level_of_ideal(_load_ideal(args.level, x.category))
    verdict = psh.sheaf_check(level.topology, x)
    payload = {
        "input": args.presheaf,
        "category": cat_ref,
        "level": list(level.ideal.member_names()),
        "is_sheaf": verdict,
    }
    _emit(args, "presheaf sheaf-check", payload)
    return 0


def _cmd_presheaf_phi_check(args) -> int:
    c = _load_category(args.category)
    sizes = tuple(args.size) if args.size else (0, 1, 2)
    verdict = psh.is_nullstellensatz(c, sizes)
    payload = {
        "input": args.category,
        "sizes": list(sizes),
        "injective": {
            str(n): psh.phi(c, n).is_componentwise_injective() for n in sizes
        },
        "nullstellensatz": verdict,
    }
    _emit(args, "presheaf phi-check", payload)
    return 0


def _cmd_cohesion_check(args) -> int:
    from .fincat import NotPreCohesiveSite

    c = _load_category(args.category)
    try:
        eps = level_epsilon(c, _max_morphisms(args))
    except NotPreCohesiveSite as exc:
        payload = {
            "input": args.category,
            "precohesive": False,
            "reason": str(exc),
        }
        _emit(args, "cohesion check", payload, status="domain-error")
        return 1
    payload = {
        "input": args.category,
        "precohesive": True,
        "nullstellensatz": psh.is_nullstellensatz(c),
        "pi0_omega": psh.pi0_omega(c),
        "epsilon": eps.to_dict(),
    }
    _emit(args, "cohesion check", payload)
    return 0


def _cmd_alg_check(args) -> int:
    from . import algfin

    data = _resolve_data(args.algebra)
    if "mult" not in data:
        raise MalformedInput(f"{args.algebra!r} is not an algebra file")
    a = algfin.algebra_from_dict(data)
    report = algfin.algebra_report(a)
    payload = {"input": args.algebra, **report.to_dict()}
    _emit(args, "alg check", payload, "ok" if report.valid else "invalid")
    return 0 if report.valid else 1


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cohesion-lab",
        description="Finite categories, levels of cohesion, and exact algebra checks.",
    )
    parser.set_defaults(format="json", max_morphisms=None)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format", choices=("json", "text"), default=argparse.SUPPRESS,
        help="output format (default: json)",
    )
    common.add_argument(
        "--max-morphisms", type=int, default=argparse.SUPPRESS,
        help="bound for ideal enumeration "
             "(default: COHESION_LAB_MAX_MORPHISMS or 24)",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    cat = sub.add_parser("cat", help="category operations")
    cat_sub = cat.add_subparsers(dest="subverb", required=True)
    v = cat_sub.add_parser("validate", parents=[common],
                           help="check the category axioms")
    v.add_argument("category", help="fixture name or category JSON file")
    v.set_defaults(func=_cmd_cat_validate)
    k = cat_sub.add_parser("karoubi", parents=[common],
                           help="split the idempotents")
    k.add_argument("category")
    k.add_argument(
        "--skeletal", action=argparse.BooleanOptionalAction, default=True,
        help="merge isomorphic splittings (default: true)",
    )
    k.set_defaults(func=_cmd_cat_karoubi)

    levels = sub.add_parser("levels", help="the lattice of levels")
    levels_sub = levels.add_subparsers(dest="subverb", required=True)
    e = levels_sub.add_parser("enumerate", parents=[common],
                              help="all idempotent ideals")
    e.add_argument("category")
    e.set_defaults(func=_cmd_levels_enumerate)
    p = levels_sub.add_parser("epsilon", parents=[common],
                              help="largest subquality level")
    p.add_argument("category")
    p.set_defaults(func=_cmd_levels_epsilon)
    a = levels_sub.add_parser("aufhebung", parents=[common],
                              help="witness-bounded search upward")
    a.add_argument("category")
    a.add_argument("--level", default=None,
                   help="ideal file (JSON list of morphism names); default: ε")
    a.add_argument("--witness", action="append", default=[],
                   help="presheaf file used as a witness (repeatable)")
    a.set_defaults(func=_cmd_levels_aufhebung)

    pre = sub.add_parser("presheaf", help="presheaf operations")
    pre_sub = pre.add_subparsers(dest="subverb", required=True)
    pi = pre_sub.add_parser("pi0", parents=[common], help="connected components")
    pi.add_argument("presheaf", help="presheaf JSON file")
    pi.set_defaults(func=_cmd_presheaf_pi0)
    sk = pre_sub.add_parser("skeleton", parents=[common],
                            help="left Kan from a level's irreducibles")
    sk.add_argument("presheaf")
    sk.add_argument("--level", default=None, help="ideal file defining the level (default: \u03b5)")
    sk.set_defaults(func=_cmd_presheaf_skeleton)
    co = pre_sub.add_parser("coskeleton", parents=[common],
                            help="right Kan from a level's irreducibles")
    co.add_argument("presheaf")
    co.add_argument("--level", default=None, help="ideal file defining the level (default: \u03b5)")
    co.set_defaults(func=_cmd_presheaf_coskeleton)
    sc = pre_sub.add_parser("sheaf-check", parents=[common],
                            help="covering-sieve bijection test")
    sc.add_argument("presheaf")
    sc.add_argument("--level", default=None, help="ideal file defining the level")
    sc.set_defaults(func=_cmd_presheaf_sheaf_check)
    ph = pre_sub.add_parser("phi-check", parents=[common],
                            help="constants-into-functions injectivity")
    ph.add_argument("category")
    ph.add_argument("--size", action="append", type=int, default=[],
                    help="test size (repeatable; default 0 1 2)")
    ph.set_defaults(func=_cmd_presheaf_phi_check)

    coh = sub.add_parser("cohesion", help="bundled cohesion report")
    coh_sub = coh.add_subparsers(dest="subverb", required=True)
    cc = coh_sub.add_parser("check", parents=[common],
                            help="pre-cohesion, φ, components of Ω, ε")
    cc.add_argument("category")
    cc.set_defaults(func=_cmd_cohesion_check)

    alg = sub.add_parser("alg", help="algebra checks")
    alg_sub = alg.add_subparsers(dest="subverb", required=True)
    ac = alg_sub.add_parser("check", parents=[common],
                            help="radical, locality, idempotents, points")
    ac.add_argument("algebra", help="fixture name or algebra JSON file")
    ac.set_defaults(func=_cmd_alg_check)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except MalformedInput as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except (OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except CohesionError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
