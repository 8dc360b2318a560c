"""Command-line interface: loaders, output envelope, determinism, exit codes."""

from __future__ import annotations

import json
from importlib import resources

import pytest

from cohesion_lab.algfin import StructAlgebra
from cohesion_lab.cli import FIXTURE_NAMES, UnknownFixture, load_fixture, main
from cohesion_lab.fincat import FinCategory

from conftest import ALGEBRA_FIXTURES, CATEGORY_FIXTURES


def run_cli(capsys, *args: str) -> tuple[int, str]:
    code = main(list(args))
    return code, capsys.readouterr().out


def fixture_bytes(name: str) -> str:
    root = resources.files("cohesion_lab").joinpath("fixtures")
    return root.joinpath(f"{name}.json").read_text(encoding="utf-8")


def test_load_fixture_names_and_types():
    assert set(FIXTURE_NAMES) == set(CATEGORY_FIXTURES) | set(ALGEBRA_FIXTURES)
    for name in CATEGORY_FIXTURES:
        assert isinstance(load_fixture(name), FinCategory)
    for name in ALGEBRA_FIXTURES:
        assert isinstance(load_fixture(name), StructAlgebra)
    with pytest.raises(UnknownFixture):
        load_fixture("nope")


@pytest.mark.parametrize("name", CATEGORY_FIXTURES)
def test_category_round_trip_is_exact(name):
    raw = json.loads(fixture_bytes(name))
    assert load_fixture(name).to_dict() == raw


@pytest.mark.parametrize("name", ALGEBRA_FIXTURES)
def test_algebra_round_trip_is_exact(name):
    raw = json.loads(fixture_bytes(name))
    assert load_fixture(name).to_dict() == raw


def test_output_is_byte_identical_across_runs(capsys):
    first = run_cli(capsys, "levels", "epsilon", "karoubi_m")
    second = run_cli(capsys, "levels", "epsilon", "karoubi_m")
    assert first == second
    assert first[0] == 0


def test_json_envelope(capsys):
    code, out = run_cli(capsys, "cat", "validate", "delta1")
    assert code == 0
    payload = json.loads(out)
    assert payload["schema_version"] == "1"
    assert payload["command"] == "cat validate"
    assert payload["status"] == "ok"
    assert payload["valid"] is True
    assert payload["terminal"] == "[0]"
    assert payload["enough_little_figures"] is True


def test_exit_codes(capsys, tmp_path):
    assert run_cli(capsys, "cat", "validate", "delta1")[0] == 0
    assert run_cli(capsys, "cohesion", "check", "chain3")[0] == 1
    assert run_cli(capsys, "cat", "validate", str(tmp_path / "missing.json"))[0] == 2
    broken = tmp_path / "broken.json"
    broken.write_text("{not json", encoding="utf-8")
    assert run_cli(capsys, "cat", "validate", str(broken))[0] == 2
    assert run_cli(capsys, "cat", "validate", "not_a_fixture")[0] == 2


def test_cohesion_check_payloads(capsys):
    code, out = run_cli(capsys, "cohesion", "check", "karoubi_m")
    assert code == 0
    payload = json.loads(out)
    assert payload["precohesive"] is True
    assert payload["nullstellensatz"] is True
    assert payload["pi0_omega"] == 1
    assert payload["epsilon"]["equals_centre"] is False
    code, out = run_cli(capsys, "cohesion", "check", "chain3")
    assert code == 1
    payload = json.loads(out)
    assert payload["precohesive"] is False
    assert payload["status"] == "domain-error"


def test_karoubi_command(capsys):
    code, out = run_cli(capsys, "cat", "karoubi", "graphic_m")
    assert code == 0
    payload = json.loads(out)
    assert payload["envelope"]["objects"] == ["split(id)", "split(alpha)", "split(b)"]
    assert len(payload["envelope"]["morphisms"]) == 17
    code, out = run_cli(capsys, "cat", "karoubi", "graphic_m", "--no-skeletal")
    assert len(json.loads(out)["envelope"]["morphisms"]) == 25


def test_levels_enumerate_rows(capsys):
    code, out = run_cli(capsys, "levels", "enumerate", "karoubi_m")
    assert code == 0
    rows = json.loads(out)["levels"]
    assert [row["size"] for row in rows] == [0, 12, 16, 17]
    assert [row["above_centre"] for row in rows] == [False, True, True, True]
    assert [row["subquality"] for row in rows] == [None, True, True, False]


def test_levels_epsilon_payload(capsys):
    code, out = run_cli(capsys, "levels", "epsilon", "karoubi_m")
    payload = json.loads(out)
    assert code == 0
    assert payload["found"] is True
    assert payload["equals_centre"] is False
    assert payload["ideal_size"] == 16
    assert sorted(payload["little_figure_objects"]) == ["1", "D"]


def test_presheaf_commands(capsys, tmp_path):
    psh = tmp_path / "two_loops.json"
    psh.write_text(
        json.dumps(
            {
                "category": "delta1",
                "sets": {"[0]": ["u", "v"], "[1]": ["lu", "lv"]},
                "actions": {
                    "d0": {"lu": "u", "lv": "v"},
                    "d1": {"lu": "u", "lv": "v"},
                    "s": {"u": "lu", "v": "lv"},
                    "e0": {"lu": "lu", "lv": "lv"},
                    "e1": {"lu": "lu", "lv": "lv"},
                },
            }
        ),
        encoding="utf-8",
    )
    code, out = run_cli(capsys, "presheaf", "pi0", str(psh))
    assert code == 0
    assert json.loads(out)["count"] == 2
    code, out = run_cli(capsys, "presheaf", "skeleton", str(psh))
    assert code == 0
    assert json.loads(out)["is_skeletal"] is True
    ideal = tmp_path / "centre.json"
    ideal.write_text(
        json.dumps(["id_0", "d0", "d1", "s", "e0", "e1"]), encoding="utf-8"
    )
    code, out = run_cli(
        capsys, "presheaf", "sheaf-check", str(psh), "--level", str(ideal)
    )
    assert code == 0
    assert json.loads(out)["is_sheaf"] is False
    code, out = run_cli(capsys, "presheaf", "sheaf-check", str(psh))
    assert code == 0
    assert json.loads(out)["is_sheaf"] is False


def test_aufhebung_command(capsys):
    code, out = run_cli(capsys, "levels", "aufhebung", "karoubi_m")
    assert code == 0
    payload = json.loads(out)
    minimal = payload["minimal"]
    assert len(minimal) == 1 and len(minimal[0]) == 17


def test_alg_check(capsys):
    code, out = run_cli(capsys, "alg", "check", "weil_dual")
    assert code == 0
    payload = json.loads(out)
    assert payload["is_weil"] is True
    assert payload["nil_index"] == 2
    assert payload["rational_points"] == [["1", "0"]]


def test_size_bounds_are_enforced(capsys, monkeypatch):
    code, _ = run_cli(
        capsys, "levels", "enumerate", "karoubi_m", "--max-morphisms", "2"
    )
    assert code == 1
    monkeypatch.setenv("COHESION_LAB_MAX_MORPHISMS", "2")
    assert run_cli(capsys, "levels", "enumerate", "karoubi_m")[0] == 1
    monkeypatch.setenv("COHESION_LAB_MAX_MORPHISMS", "many")
    assert run_cli(capsys, "levels", "enumerate", "karoubi_m")[0] == 2


def test_text_format_mirrors_vocabulary(capsys):
    _, out = run_cli(capsys, "levels", "enumerate", "karoubi_m", "--format", "text")
    assert "subquality" in out and "above_centre" in out
    _, out = run_cli(capsys, "cohesion", "check", "karoubi_m", "--format", "text")
    assert "epsilon" in out and "nullstellensatz" in out
    _, out = run_cli(capsys, "levels", "epsilon", "delta1", "--format", "text")
    assert "equals_centre" in out
