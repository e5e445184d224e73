import json
from pathlib import Path

import pytest

from tamefill import cli
from tamefill.cli import build_parser, config_from_args, main, run
from tamefill.config import RunConfig
from tamefill.error import Panic, panic

Z2_FILE = """\
# Z^2 by its shortlex rules
generators: a A b B
inverses: a A, b B
rule: a A ->
rule: A a ->
rule: b B ->
rule: B b ->
rule: b a -> a b
rule: b A -> A b
rule: B a -> a B
rule: B A -> A B
"""


def z2(command: str, **args: object) -> RunConfig:
    return {"command": command, "args": dict(args), "preset": "Z2"}


def error_report(err: str) -> dict[str, object]:
    return json.loads(err)


class TestRewritingCommands:
    def test_nf(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert run(z2("nf", word="b a b A")) == 0
        assert capsys.readouterr().out == "b b\n"

    def test_nf_of_identity(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert run(z2("nf", word="a b A B")) == 0
        assert capsys.readouterr().out == "ε\n"

    def test_gamma(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert run(z2("gamma", n=4)) == 0
        assert capsys.readouterr().out == "4\n"

    def test_gamma_prefix(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert run(z2("gamma", n=3, prefix=True)) == 0
        assert int(capsys.readouterr().out) <= 3

    def test_exhausted_step_budget(self, capsys: pytest.CaptureFixture[str]) -> None:
        config = z2("nf", word="b b a a")
        config["budgets"] = {"step_budget": 1, "node_budget": 100}
        assert run(config) == 3
        assert error_report(capsys.readouterr().err)["tag"] == "BudgetExceeded"


class TestBallCommands:
    def test_ball(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert run(z2("ball", n=2)) == 0
        assert capsys.readouterr().out.splitlines() == [
            "B(2): 13 vertices",
            "  S(0) 1",
            "  S(1) 4",
            "  S(2) 8",
        ]

    def test_single_vertex(self, capsys: pytest.CaptureFixture[str]) -> None:
        config: RunConfig = {"command": "ball", "args": {"n": 0}, "preset": "F2"}
        assert run(config) == 0
        assert capsys.readouterr().out.splitlines()[0] == "B(0): 1 vertex"

    def test_ball_artifacts(self, tmp_path: Path) -> None:
        config = z2("ball", n=1)
        config["out_dir"] = str(tmp_path)
        config["formats"] = ["json", "dot"]
        assert run(config) == 0
        assert json.loads((tmp_path / "ball.json").read_text(encoding="utf-8"))["radius"] == 1
        assert (tmp_path / "ball.dot").read_text(encoding="utf-8").startswith("digraph ball_1")

    def test_ac_check_passes(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert run(z2("ac-check", n=2, k=2)) == 0
        lines = capsys.readouterr().out.splitlines()
        assert len(lines) == 2
        assert lines[0].startswith("n=1 PASS")

    def test_ac_check_fails(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert run(z2("ac-check", n=2, k=1)) == 1
        assert "FAIL" in capsys.readouterr().out


class TestFlowCommand:
    def test_verify(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert run(z2("flow", action="verify", kind="rewriting", radius=4, k=None)) == 0
        out = capsys.readouterr().out
        assert out.startswith("rewriting flow, ")
        assert "  F1 failures 0\n" in out
        assert "descent relation acyclic, verified to radius 4" in out

    def test_build(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert run(z2("flow", action="build", kind="rewriting", radius=3, k=None)) == 0
        assert "N-diagrams over B(2)" in capsys.readouterr().out

    def test_ac_kind_needs_constant(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert run(z2("flow", action="verify", kind="ac", radius=3, k=None)) == 2
        assert error_report(capsys.readouterr().err)["tag"] == "ConfigError"

    def test_triples_artifact(self, tmp_path: Path) -> None:
        config = z2("flow", action="verify", kind="rewriting", radius=2, k=None)
        config["out_dir"] = str(tmp_path)
        config["formats"] = ["txt"]
        run(config)
        rows = (tmp_path / "flow.txt").read_text(encoding="utf-8").splitlines()
        assert "b\ta\tB a b" in rows


class TestDiagramCommand:
    def test_word(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert run(z2("diagram", target="b a B A", method="auto", k=None)) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "boundary b a B A (flow)"
        assert lines[-1] == "  valid"

    def test_edge(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert run(z2("diagram", target="b:a", method="flow", k=None)) == 0
        assert capsys.readouterr().out.startswith("boundary b a B A (flow)")

    def test_thin_needs_constant(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert run(z2("diagram", target="b a B A", method="thin", k=None)) == 2
        assert "needs --k" in capsys.readouterr().err

    def test_artifacts(self, tmp_path: Path) -> None:
        config = z2("diagram", target="b a B A", method="flow", k=None)
        config["out_dir"] = str(tmp_path)
        config["formats"] = ["json", "svg"]
        assert run(config) == 0
        assert sorted(p.name for p in tmp_path.iterdir()) == [
            "combing.json",
            "diagram.json",
            "diagram.svg",
        ]
        payload = json.loads((tmp_path / "diagram.json").read_text(encoding="utf-8"))
        assert payload["word"] == "b a B A"

    def test_not_identity(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert run(z2("diagram", target="a b", method="flow", k=None)) == 1
        assert error_report(capsys.readouterr().err)["tag"] == "NotIdentity"


class TestTamenessCommand:
    def test_all_identity_words(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        config = z2("tameness", kind="intrinsic", length=4, method="auto", k=None, bound=True)
        config["out_dir"] = str(tmp_path)
        config["formats"] = ["csv"]
        assert run(config) == 0
        out = capsys.readouterr().out
        assert out.startswith("intrinsic tameness over ")
        assert "  bound holds" in out
        csv = (tmp_path / "tameness_intrinsic.csv").read_text(encoding="utf-8")
        assert csv.startswith("x_quarters,f_quarters,bound_quarters\n")

    def test_words_file(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        words = tmp_path / "words.txt"
        words.write_text("b a B A\n# skipped\n\na b A B\n", encoding="utf-8")
        config = z2("tameness", kind="extrinsic", words=str(words), method="flow", k=None)
        assert run(config) == 0
        assert capsys.readouterr().out.startswith("extrinsic tameness over 2 diagrams")

    def test_words_that_are_not_identities(
        self, tmp_path: Path, capsys: pytest.CaptureFixture[str]
    ) -> None:
        words = tmp_path / "words.txt"
        words.write_text("b a B A\na b\n", encoding="utf-8")
        config = z2("tameness", kind="intrinsic", words=str(words), method="flow", k=None)
        assert run(config) == 1
        captured = capsys.readouterr()
        assert "over 1 diagrams" in captured.out
        assert error_report(captured.err)["tag"] == "NotIdentity"

    def test_per_word_records(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        words = tmp_path / "words.txt"
        words.write_text("b a B A\na b\n", encoding="utf-8")
        config = z2("tameness", kind="intrinsic", words=str(words), method="flow", k=None)
        config["out_dir"] = str(tmp_path)
        config["formats"] = ["json"]
        assert run(config) == 1
        capsys.readouterr()
        records = json.loads((tmp_path / "tameness_intrinsic.json").read_text(encoding="utf-8"))
        assert [r["word"] for r in records] == ["b a B A", "a b"]
        assert records[0]["status"] == "ok"
        assert set(records[0]["value"]) == {"faces", "idiam", "ediam"}
        assert records[0]["value"]["faces"] >= 1
        assert records[1]["status"] == "err"
        assert records[1]["tag"] == "NotIdentity"

    def test_bad_word_reports_its_line(
        self, tmp_path: Path, capsys: pytest.CaptureFixture[str]
    ) -> None:
        words = tmp_path / "words.txt"
        words.write_text("b a B A\na c\n", encoding="utf-8")
        config = z2("tameness", kind="intrinsic", words=str(words), method="flow", k=None)
        assert run(config) == 2
        assert error_report(capsys.readouterr().err)["message"] == "line 2: unknown letter 'c'"

    def test_needs_one_word_source(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert run(z2("tameness", kind="intrinsic", method="flow", k=None)) == 2
        assert error_report(capsys.readouterr().err)["tag"] == "ConfigError"


class TestGroupSources:
    def test_input_file(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        path = tmp_path / "z2.txt"
        path.write_text(Z2_FILE, encoding="utf-8")
        config: RunConfig = {"command": "nf", "args": {"word": "B A b a"}, "input": str(path)}
        assert run(config) == 0
        assert capsys.readouterr().out == "ε\n"

    def test_missing_input_file(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        config: RunConfig = {
            "command": "nf",
            "args": {"word": "a"},
            "input": str(tmp_path / "missing.txt"),
        }
        assert run(config) == 2
        assert error_report(capsys.readouterr().err)["tag"] == "ConfigError"

    def test_relators_only_cannot_rewrite(
        self, tmp_path: Path, capsys: pytest.CaptureFixture[str]
    ) -> None:
        path = tmp_path / "torus.txt"
        path.write_text("generators: a A b B\ninverses: a A, b B\nrelator: a b A B\n")
        config: RunConfig = {"command": "nf", "args": {"word": "a"}, "input": str(path)}
        assert run(config) == 2
        assert "rewriting system" in capsys.readouterr().err

    def test_unknown_preset(self, capsys: pytest.CaptureFixture[str]) -> None:
        config: RunConfig = {"command": "nf", "args": {"word": "a"}, "preset": "Z9"}
        assert run(config) == 2
        report = error_report(capsys.readouterr().err)
        assert report["tag"] == "UnknownPreset"
        assert report["status"] == "err"
        assert report["exit_code"] == 2

    def test_show(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert run(z2("show")) == 0
        assert "rule: b a -> a b\n" in capsys.readouterr().out

    def test_presets(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert run({"command": "presets", "args": {}}) == 0
        lines = capsys.readouterr().out.splitlines()
        assert [line.split("\t")[0] for line in lines] == [
            "F1",
            "F2",
            "Z2",
            "Z3",
            "Z5",
            "S3",
            "BS12",
        ]
        assert lines[5].startswith("S3\torder 6\t")
        assert lines[6].startswith("BS12\torder ∞ (experimental)\t")

    def test_check_all_takes_no_source(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert run({"command": "check-all", "args": {}, "preset": "Z2"}) == 2
        assert error_report(capsys.readouterr().err)["tag"] == "ConfigError"


class TestArguments:
    def test_config_from_args(self) -> None:
        ns = build_parser().parse_args(["--preset", "Z2", "--format", "json, svg", "ball", "2"])
        config = config_from_args(ns, {"TAMEFILL_BUDGET": "7"})
        assert config["command"] == "ball"
        assert config["args"] == {"n": 2}
        assert config["preset"] == "Z2"
        assert "input" not in config
        assert config["formats"] == ["json", "svg"]
        assert config["budgets"] == {"step_budget": 7, "node_budget": 7}

    def test_budget_flag_overrides_environment(self) -> None:
        ns = build_parser().parse_args(["--budget", "9", "--preset", "Z2", "gamma", "3"])
        config = config_from_args(ns, {"TAMEFILL_BUDGET": "7"})
        assert config["budgets"] == {"step_budget": 9, "node_budget": 9}
        assert config["args"] == {"n": 3, "prefix": False}

    def test_main(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["--preset", "Z2", "gamma", "4"]) == 0
        assert capsys.readouterr().out == "4\n"

    def test_main_unknown_format(self) -> None:
        assert main(["--preset", "Z2", "--format", "png", "ball", "1"]) == 2

    def test_main_malformed_budget(self, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setenv("TAMEFILL_BUDGET", "lots")
        assert main(["--preset", "Z2", "gamma", "2"]) == 2

    def test_one_source_at_a_time(self) -> None:
        with pytest.raises(SystemExit):
            main(["--preset", "Z2", "--input", "z2.txt", "gamma", "2"])


class TestFailurePaths:
    def test_invalid_config_never_dispatches(
        self, monkeypatch: pytest.MonkeyPatch, capsys: pytest.CaptureFixture[str]
    ) -> None:
        def unreachable(config: RunConfig) -> int:
            raise AssertionError("dispatched")

        monkeypatch.setattr(cli, "_dispatch", unreachable)
        assert run({"command": "nf", "args": {}}) == 2
        assert error_report(capsys.readouterr().err)["message"] == (
            "Exactly one of --preset and --input is required"
        )

    def test_command_panic_keeps_its_message(self, monkeypatch: pytest.MonkeyPatch) -> None:
        def broken(config: RunConfig, group: cli.Group) -> int:
            panic("diagram lost a face")

        monkeypatch.setitem(cli.COMMANDS, "nf", broken)
        with pytest.raises(Panic) as exc_info:
            run(z2("nf", word="a"))

        assert exc_info.value.message == "diagram lost a face"

    def test_main_reports_a_panic(
        self, monkeypatch: pytest.MonkeyPatch, capsys: pytest.CaptureFixture[str]
    ) -> None:
        def broken(config: RunConfig, group: cli.Group) -> int:
            panic("diagram lost a face")

        monkeypatch.setitem(cli.COMMANDS, "nf", broken)
        assert main(["--preset", "Z2", "nf", "a"]) == 70
        report = error_report(capsys.readouterr().err)
        assert report["tag"] == "Panic"
        assert report["message"] == "diagram lost a face"
