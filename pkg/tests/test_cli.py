import json

import pytest

from conftest import COMMITS
from refann.cli import main
from refann.ingest import load_fixture
from refann.storage import Store, canonical_json, export_dataset


@pytest.fixture()
def data_dir(tmp_path):
    return str(tmp_path / "data")


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestFixtureLoad:
    def test_load_prints_commit_id(self, data_dir, capsys):
        code, out, _ = run(capsys, "--data-dir", data_dir, "fixture", "load",
                           str(COMMITS / "move_field_1"))
        assert code == 0
        assert out.strip() == "fixtures:move-field-1"
        store = Store(data_dir)
        assert store.get_commit("fixtures:move-field-1").files

    def test_missing_dir_is_data_error(self, data_dir, capsys):
        code, _, err = run(capsys, "--data-dir", data_dir, "fixture", "load",
                           "/no/such/dir")
        assert code == 1
        assert err.startswith("error:")


class TestImport:
    def hints_file(self, tmp_path, records):
        path = tmp_path / "hints.json"
        path.write_text(json.dumps({"hints": records}))
        return str(path)

    def test_import_creates_drafts(self, data_dir, tmp_path, capsys):
        run(capsys, "--data-dir", data_dir, "fixture", "load",
            str(COMMITS / "move_field_1"))
        hints = self.hints_file(tmp_path, [
            {"commit": {"repository": "fixtures", "sha": "move-field-1"},
             "type": "MoveField"},
        ])
        code, out, err = run(capsys, "--data-dir", data_dir, "import", hints,
                             "--annotator", "detector")
        assert code == 0
        assert "1 annotations created" in out
        [ann] = Store(data_dir).list_annotations()
        assert ann.annotator == "detector"
        assert ann.type_name == "MoveField"

    def test_import_warns_on_bad_prefill(self, data_dir, tmp_path, capsys):
        run(capsys, "--data-dir", data_dir, "fixture", "load",
            str(COMMITS / "move_field_1"))
        hints = self.hints_file(tmp_path, [
            {"commit": {"repository": "fixtures", "sha": "move-field-1"},
             "type": "MoveField",
             "prefill": {"before": {"moved field": [
                 {"path": "Account.java", "startLine": 1, "startColumn": 1,
                  "endLine": 1, "endColumn": 4}]}}},
        ])
        code, _, err = run(capsys, "--data-dir", data_dir, "import", hints)
        assert code == 0
        assert "warning:" in err

    def test_unresolvable_commit_fails(self, data_dir, tmp_path, capsys):
        hints = self.hints_file(tmp_path, [
            {"commit": {"repository": "r", "sha": "nope"},
             "type": "MoveField"},
        ])
        code, _, err = run(capsys, "--data-dir", data_dir, "import", hints)
        assert code == 1
        assert "UnresolvableCommit" in err

    def test_missing_file_is_io_error(self, data_dir, capsys):
        code, _, err = run(capsys, "--data-dir", data_dir, "import",
                           "/no/hints.json")
        assert code == 1
        assert err.startswith("error: IO:")


class TestValidateExportAgreement:
    def seed(self, data_dir, tmp_path, capsys, annotators=("alice",)):
        run(capsys, "--data-dir", data_dir, "fixture", "load",
            str(COMMITS / "move_field_1"))
        records = [
            {"commit": {"repository": "fixtures", "sha": "move-field-1"},
             "type": "MoveField"}
            for _ in annotators
        ]
        for name, record in zip(annotators, records):
            path = tmp_path / f"h-{name}.json"
            path.write_text(json.dumps({"hints": [record]}))
            run(capsys, "--data-dir", data_dir, "import", str(path),
                "--annotator", name)

    def test_validate_clean(self, data_dir, tmp_path, capsys):
        self.seed(data_dir, tmp_path, capsys)
        code, out, _ = run(capsys, "--data-dir", data_dir, "validate")
        assert code == 0 and out.strip() == "ok"

    def test_validate_reports_problems(self, data_dir, tmp_path, capsys):
        run(capsys, "--data-dir", data_dir, "fixture", "load",
            str(COMMITS / "move_field_1"))
        snapshot = load_fixture(COMMITS / "move_field_1")
        from refann.storage import new_annotation
        store = Store(data_dir)
        store.put_annotation(new_annotation(snapshot.commit, "Ghost", "x"))
        code, out, _ = run(capsys, "--data-dir", data_dir, "validate")
        assert code == 1
        assert "unknown type" in out and "1 violations" in out

    def test_export_to_file_is_canonical(self, data_dir, tmp_path, capsys):
        self.seed(data_dir, tmp_path, capsys)
        out_file = tmp_path / "dataset.json"
        code, _, _ = run(capsys, "--data-dir", data_dir, "export",
                         "-o", str(out_file))
        assert code == 0
        assert out_file.read_text() == canonical_json(
            export_dataset(Store(data_dir)))

    def test_export_status_filter(self, data_dir, tmp_path, capsys):
        self.seed(data_dir, tmp_path, capsys)
        code, out, _ = run(capsys, "--data-dir", data_dir, "export",
                           "--status", "verified")
        assert code == 0
        assert json.loads(out) == {"annotations": []}

    def test_agreement_needs_two_annotators(self, data_dir, tmp_path, capsys):
        self.seed(data_dir, tmp_path, capsys)
        code, _, err = run(capsys, "--data-dir", data_dir, "agreement")
        assert code == 1
        assert "InsufficientAnnotators" in err

    def test_agreement_report(self, data_dir, tmp_path, capsys):
        self.seed(data_dir, tmp_path, capsys, annotators=("alice", "bob"))
        code, out, _ = run(capsys, "--data-dir", data_dir, "agreement")
        assert code == 0
        report = json.loads(out)
        assert report["overall"] == 1.0  # both drafts are identically empty


class TestTypes:
    def test_list_shows_builtins(self, data_dir, capsys):
        code, out, _ = run(capsys, "--data-dir", data_dir, "types", "list")
        assert code == 0
        lines = out.strip().split("\n")
        assert "ExtractMethod\tbuiltin" in lines
        assert "RenameVariable\tbuiltin" in lines

    def test_add_then_list(self, data_dir, tmp_path, capsys):
        defn = {
            "name": "InlineTemp",
            "before": {"temp": {"type": "VariableDeclaration",
                                "multiple": False, "required": True}},
            "after": {},
        }
        path = tmp_path / "type.json"
        path.write_text(json.dumps(defn))
        code, out, _ = run(capsys, "--data-dir", data_dir, "types", "add",
                           str(path))
        assert code == 0 and "registered InlineTemp" in out
        _, out, _ = run(capsys, "--data-dir", data_dir, "types", "list")
        assert "InlineTemp\tcustom" in out

    def test_add_builtin_rejected(self, data_dir, tmp_path, capsys):
        defn = {"name": "MoveField",
                "before": {"x": {"type": "Identifier", "multiple": False,
                                 "required": True}},
                "after": {}}
        path = tmp_path / "type.json"
        path.write_text(json.dumps(defn))
        code, _, err = run(capsys, "--data-dir", data_dir, "types", "add",
                           str(path))
        assert code == 1
        assert "BuiltinOverwrite" in err


class TestUsageErrors:
    def test_unknown_subcommand_exits_2(self, data_dir):
        with pytest.raises(SystemExit) as exc:
            main(["--data-dir", data_dir, "frobnicate"])
        assert exc.value.code == 2

    def test_no_subcommand_exits_2(self):
        with pytest.raises(SystemExit) as exc:
            main([])
        assert exc.value.code == 2


class TestEnvDataDir:
    def test_env_variable_used(self, tmp_path, monkeypatch, capsys):
        monkeypatch.setenv("REFANN_DATA_DIR", str(tmp_path / "envdata"))
        code, out, _ = run(capsys, "fixture", "load",
                           str(COMMITS / "move_field_1"))
        assert code == 0
        assert (tmp_path / "envdata" / "commits").exists()
