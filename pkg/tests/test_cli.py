"""
Testes para a linha de comando (códigos de saída e relatórios).
"""

import json

import pytest

from gpdkit import __version__
from gpdkit.cli import build_parser, run_command
from tests.conftest import FIXTURES_DIR

CORPUS = ["triv1.json", "z2.json", "rigid2.json", "tors2.json"]


def fx(name: str) -> str:
    return str(FIXTURES_DIR / name)


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch):
    monkeypatch.delenv("GPDKIT_BOUND", raising=False)
    monkeypatch.delenv("GPDKIT_LOG_LEVEL", raising=False)


def run_json(capsys, *argv: str) -> tuple[int, dict]:
    code = run_command([*argv, "--format", "json"])
    out = capsys.readouterr().out
    return code, json.loads(out)


class TestParser:
    """Parser e opções globais."""

    def test_unknown_command(self, capsys):
        assert run_command(["frobnicate"]) == 2
        assert capsys.readouterr().out == ""

    def test_missing_argument(self):
        assert run_command(["aut", fx("z2.json")]) == 2

    def test_version(self, capsys):
        assert run_command(["--version"]) == 0
        assert __version__ in capsys.readouterr().out

    def test_global_options_before_and_after_command(self):
        parser = build_parser()
        before = parser.parse_args(["--format", "json", "validate", "x.json"])
        after = parser.parse_args(["validate", "x.json", "--format", "json"])
        default = parser.parse_args(["validate", "x.json"])
        assert before.format == after.format == "json"
        assert default.format == "text"
        assert default.bound is None


class TestExitCodes:
    """0 sucesso, 1 verificação falsa, 2 erro estrutural, 3 limite."""

    def test_validate_ok(self, capsys):
        assert run_command(["validate", fx("z2.json")]) == 0
        assert capsys.readouterr().out.startswith("validate: ok")

    def test_validate_broken(self, capsys):
        code, report = run_json(capsys, "validate", fx("broken.json"))
        assert code == 1
        assert report["ok"] is False
        assert report["violations"][0]["invariant"] == "bijection"
        assert report["violations"][0]["subjects"] == ["m1"]

    def test_unreadable_file(self, capsys, tmp_path):
        assert run_command(["validate", str(tmp_path / "nada.json")]) == 2
        captured = capsys.readouterr()
        assert captured.out == ""
        assert "gpdkit: erro:" in captured.err

    @pytest.mark.parametrize("value", [None, 5])
    def test_malformed_morphisms_field_is_exit_2(self, capsys, tmp_path, value):
        body = json.loads((FIXTURES_DIR / "z2.json").read_text(encoding="utf-8"))
        body["morphisms"] = value
        path = tmp_path / "z2.json"
        path.write_text(json.dumps(body), encoding="utf-8")
        assert run_command(["validate", str(path)]) == 2
        captured = capsys.readouterr()
        assert captured.out == ""
        assert "morphisms" in captured.err

    def test_syntax_error_goes_to_stderr(self, capsys, tmp_path):
        path = tmp_path / "ruim.json"
        path.write_text("{\n  ,\n}", encoding="utf-8")
        assert run_command(["validate", str(path)]) == 2
        captured = capsys.readouterr()
        assert captured.out == ""
        assert "linha 2" in captured.err

    def test_wrong_document_kind(self, capsys):
        assert run_command(["aut", fx("z2_cover.json"), "o"]) == 2

    def test_bound_exceeded(self, capsys):
        assert run_command(["enumerate", "--bound", "4", fx("z2.json"), fx("tors2.json")]) == 3
        captured = capsys.readouterr()
        assert captured.out == ""
        assert "6 > 4" in captured.err

    def test_bound_from_env(self, monkeypatch):
        monkeypatch.setenv("GPDKIT_BOUND", "4")
        assert run_command(["enumerate", fx("z2.json"), fx("tors2.json")]) == 3

    def test_semantic_error_is_a_report(self, capsys):
        code, report = run_json(capsys, "aut", fx("broken.json"), "o")
        assert code == 1
        assert report["error"]
        assert report["violations"][0]["invariant"] == "bijection"


class TestGroupoidCommands:
    """Comandos sobre grupoides e morfismos."""

    def test_components(self, capsys):
        code, report = run_json(capsys, "components", fx("rigid2.json"))
        assert code == 0
        assert report["components"] == [["i", "j"]]
        assert report["connected"] is True

    def test_aut(self, capsys):
        code, report = run_json(capsys, "aut", fx("tors2.json"), "j")
        assert code == 0
        assert report["order"] == 2

    def test_base(self, capsys):
        code, report = run_json(capsys, "base", fx("tors2.json"), "j")
        assert report["base"] == ["c"]

    def test_extend_counts(self, capsys):
        code, report = run_json(capsys, "extend", fx("tors2.json"), "i")
        assert code == 0
        assert report["star_morphisms"] == report["expected_star_morphisms"] == 10
        assert report["cover"]["star"]["object"] == "star"

    def test_saturate(self, capsys):
        code, report = run_json(
            capsys, "saturate", fx("z2.json"), fx("rigid2.json"), "--seed", "o:i:a=x,b=x"
        )
        assert code == 0
        assert len(report["morphism"]["functions"]) == 2

    def test_saturate_without_morphism(self, capsys):
        code, report = run_json(
            capsys, "saturate", fx("z2.json"), fx("rigid2.json"), "--seed", "o:i:a=x,b=y"
        )
        assert code == 1
        assert report["violation"]["invariant"] == "condition-A"

    def test_malformed_seed(self, capsys):
        assert run_command(["saturate", fx("z2.json"), fx("rigid2.json"), "--seed", "oi"]) == 2

    def test_morphism_check_bad(self, capsys):
        code, report = run_json(capsys, "morphism-check", fx("z2_to_rigid2_bad.json"))
        assert code == 1
        assert "condition-A" in {v["invariant"] for v in report["violations"]}

    def test_iso(self, capsys):
        code, report = run_json(capsys, "iso", fx("z2_to_rigid2.json"))
        assert code == 1
        assert report["isomorphism"] is False
        assert report["inverse"] is None

    def test_equiv(self, capsys):
        code, report = run_json(capsys, "equiv", fx("z2.json"), fx("tors2.json"))
        assert code == 0
        assert report["equivalent"] is True
        assert set(report["witness"]) == {"common", "left", "right"}

    def test_not_equiv(self, capsys):
        assert run_command(["equiv", fx("z2.json"), fx("rigid2.json")]) == 1
        assert "no conjugating bijection" in capsys.readouterr().out

    def test_enumerate(self, capsys):
        code, report = run_json(capsys, "enumerate", fx("z2.json"), fx("rigid2.json"))
        assert code == 0
        assert report["count"] == 2

    def test_enumerate_covers(self, capsys):
        code, report = run_json(capsys, "enumerate", "--covers", fx("z2.json"), fx("rigid2.json"))
        assert report["count"] == 2
        assert len(report["cover_morphisms"]) == 2


class TestCoverCommands:
    """Coberturas, functores e leis."""

    def test_cover_iso(self, capsys):
        code, report = run_json(capsys, "cover-iso", fx("z2_to_tors2_cover.json"))
        assert code == 0
        assert report["inverse"]["kind"] == "cover-morphism"

    def test_functor_g(self, capsys):
        code, report = run_json(capsys, "functor-g", fx("z2_to_tors2_cover.json"))
        assert code == 0
        assert report["morphism"]["kind"] == "morphism"

    def test_determinacy(self, capsys):
        assert run_command(["determinacy", fx("z2_cover.json")]) == 0
        code, report = run_json(capsys, "determinacy", fx("determinacy_adversarial.json"))
        assert code == 1
        assert report["violations"][0]["invariant"] == "star-determinacy"

    def test_epsilon(self, capsys):
        code, report = run_json(capsys, "epsilon", fx("tors2.json"), "--object", "j")
        assert code == 0
        assert report["object"] == "j"

    def test_laws(self, capsys):
        code, report = run_json(capsys, "laws", *map(fx, CORPUS))
        assert code == 0
        assert report["complete"] is True
        assert report["subject"] == ["triv1", "z2", "rigid2", "tors2"]
        assert len(report["checks"]) == 12

    def test_laws_bounded(self, capsys):
        code, report = run_json(capsys, "laws", "--bound", "3", *map(fx, CORPUS))
        assert code == 0
        assert report["complete"] is False
        assert "z2->z2" in report["skipped"]


class TestFamilyCommands:
    """Famílias, independência e censo."""

    def test_census(self, capsys):
        code, report = run_json(capsys, "census", fx("z2_rigid2_family_cover.json"))
        assert code == 0
        assert report["flagged"] == ["a1"]
        assert report["count"] == 1

    def test_independence(self, capsys):
        assert run_command(["independence", fx("z2_rigid2_family_cover.json")]) == 0
        code, report = run_json(capsys, "independence", fx("independence_adversarial.json"))
        assert code == 1
        assert "assembly" in {v["invariant"] for v in report["violations"]}

    def test_family_extend_with_section(self, capsys):
        code, report = run_json(
            capsys, "family-extend", fx("z2_rigid2_family.json"),
            "--section", "a1=e", "--section", "a2=j",
        )
        assert code == 0
        assert report["family_cover"]["section"] == {"a1": "e", "a2": "j"}

    def test_family_extend_incomplete_section(self, capsys):
        code, report = run_json(
            capsys, "family-extend", fx("z2_rigid2_family.json"), "--section", "a1=e"
        )
        assert code == 1
        assert "a2" in report["subjects"]

    def test_family_split(self, capsys):
        code, report = run_json(capsys, "family-split", fx("tors2.json"))
        assert report["family"]["base"] == ["a1"]

    def test_fibre_crossing(self, capsys):
        code, report = run_json(capsys, "family-morphism-check", fx("fibre_crossing.json"))
        assert code == 1
        assert "fibre-crossing" in report["error"]
