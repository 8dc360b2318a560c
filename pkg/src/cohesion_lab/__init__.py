"""Finite categories, their levels of cohesion, and exact algebra checks.

The package is organized as four layers:

- :mod:`cohesion_lab.fincat` — finite categories as composition tables,
  validation, terminal objects and points, Karoubi envelopes.
- :mod:`cohesion_lab.levels` — idempotent morphism ideals, the induced
  Grothendieck topologies, the lattice of levels, the centre, and the
  largest sub-quality level.
- :mod:`cohesion_lab.presheaf` — finite presheaves, components/sections/
  codiscrete adjoints, Kan extensions along a level, sheaf checks.
- :mod:`cohesion_lab.algfin` — certified invariants of finite-dimensional
  commutative ℚ-algebras given by structure constants (imported lazily so
  the category layers do not pay for the computer-algebra dependency).
"""
from __future__ import annotations

from .fincat import (
    CohesionError,
    FinCategory,
    FullSubcategory,
    FunctorWitness,
    MalformedInput,
    NoTerminal,
    NotPreCohesiveSite,
    TerminalInfo,
    TooLarge,
    ValidationReport,
    all_points,
    category_from_dict,
    has_enough_little_figures,
    idempotents,
    is_pseudo_constant,
    karoubi_envelope,
    points,
    pseudo_constants,
    terminal_object,
    unique_point_objects,
    validate_category,
)
from .levels import (
    DEFAULT_MAX_MORPHISMS,
    BaseMismatch,
    EpsilonReport,
    GrothendieckTopology,
    Level,
    MorphismIdeal,
    NotAboveCentre,
    NotAnIdeal,
    NotIdempotent,
    NotRigid,
    SearchReport,
    Sieve,
    aufhebung_search,
    centre_level,
    default_witnesses,
    enumerate_idempotent_ideals,
    enumerate_levels,
    enumerate_sieves,
    ideal_generated_by,
    irreducible_objects,
    is_above,
    is_above_centre,
    is_idempotent_ideal,
    is_quality_type_level,
    is_rigid,
    is_subquality_level,
    level_epsilon,
    level_of_ideal,
    pseudo_constant_ideal,
    restrict_ideal,
    sieve_generated_by,
    topology_of_ideal,
)
from .presheaf import (
    AdjunctionWitness,
    FourFunctorsReport,
    NaturalTransformation,
    Pi0Result,
    Presheaf,
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
    enumerate_natural_transformations,
    global_sections,
    is_isomorphic,
    is_level_sheaf,
    is_nullstellensatz,
    is_skeletal,
    left_kan,
    level_four_functors,
    make_presheaf,
    omega,
    phi,
    pi0,
    pi0_omega,
    presheaf_from_dict,
    representable,
    restrict,
    right_kan,
    sheaf_check,
    sheafify_rigid,
    skeleton,
    subpresheaves,
    validate_presheaf,
)

_ALGFIN_NAMES = {
    "AlgebraReport",
    "StructAlgebra",
    "algebra_from_dict",
    "algebra_report",
    "count_idempotents",
    "is_local",
    "is_reduced",
    "is_weil",
    "nil_index",
    "radical",
    "rational_points",
    "semisimple_quotient",
    "validate_algebra",
}


def __getattr__(name: str):
    if name in _ALGFIN_NAMES:
        from . import algfin

        return getattr(algfin, name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")


__all__ = sorted(
    {
        "CohesionError", "FinCategory", "FullSubcategory", "FunctorWitness",
        "MalformedInput", "NoTerminal", "NotPreCohesiveSite", "TerminalInfo",
        "TooLarge", "ValidationReport", "all_points", "category_from_dict",
        "has_enough_little_figures", "idempotents", "is_pseudo_constant",
        "karoubi_envelope", "points", "pseudo_constants", "terminal_object",
        "unique_point_objects", "validate_category",
        "DEFAULT_MAX_MORPHISMS", "BaseMismatch", "EpsilonReport",
        "GrothendieckTopology", "Level", "MorphismIdeal", "NotAboveCentre",
        "NotAnIdeal", "NotIdempotent", "NotRigid", "SearchReport", "Sieve",
        "aufhebung_search", "centre_level", "default_witnesses",
        "enumerate_idempotent_ideals", "enumerate_levels", "enumerate_sieves",
        "ideal_generated_by", "irreducible_objects", "is_above",
        "is_above_centre", "is_idempotent_ideal", "is_quality_type_level",
        "is_rigid", "is_subquality_level", "level_epsilon", "level_of_ideal",
        "pseudo_constant_ideal", "restrict_ideal", "sieve_generated_by",
        "topology_of_ideal",
        "AdjunctionWitness", "FourFunctorsReport", "NaturalTransformation",
        "Pi0Result", "Presheaf", "adjunction_constant_sections",
        "adjunction_left_kan_restrict", "adjunction_pi0_constant",
        "adjunction_restrict_right_kan", "adjunction_sections_codiscrete",
        "check_way_above", "codiscrete", "constant_presheaf", "coskeleton",
        "count_natural_transformations", "enumerate_natural_transformations",
        "global_sections", "is_isomorphic", "is_level_sheaf",
        "is_nullstellensatz", "is_skeletal", "left_kan", "level_four_functors",
        "make_presheaf", "omega", "phi", "pi0", "pi0_omega",
        "presheaf_from_dict", "representable", "restrict", "right_kan",
        "sheaf_check", "sheafify_rigid", "skeleton", "subpresheaves",
        "validate_presheaf",
    }
    | _ALGFIN_NAMES
)
