import json
import pathlib
import shutil

import pytest

from fullfield.cli import main
from fullfield.fixtures import fixture_bytes


@pytest.fixture()
def fixture_dir(tmp_path):
    for name in ("trivial", "z2k1", "ising", "mut_fusing", "mut_validate"):
        (tmp_path / f"{name}.json").write_bytes(fixture_bytes(name))
    return tmp_path


class TestValidate:
    def test_valid_bundle(self, fixture_dir, capsys):
        assert main(["validate", str(fixture_dir / "ising.json")]) == 0
        assert "valid" in capsys.readouterr().out

    def test_invalid_bundle(self, fixture_dir, capsys):
        assert main(["validate", str(fixture_dir / "mut_validate.json")]) == 1
        assert "unit-duality" in capsys.readouterr().out

    def test_missing_file_is_usage_error(self, tmp_path):
        assert main(["validate", str(tmp_path / "nope.json")]) == 2


class TestVerify:
    def test_paper_suite_set_passes(self, fixture_dir, capsys):
        code = main(["verify", str(fixture_dir / "ising.json"),
                     "--suite", "pentagon,pairing,fusing,s3,ffa-assoc,skew,invariance"])
        assert code == 0
        assert "overall: PASS" in capsys.readouterr().out

    def test_mutated_bundle_fails_with_nonzero_exit(self, fixture_dir, capsys):
        code = main(["verify", str(fixture_dir / "mut_fusing.json"),
                     "--suite", "fusing"])
        assert code == 1
        assert "overall: FAIL" in capsys.readouterr().out

    def test_unknown_suite_is_usage_error(self, fixture_dir, capsys):
        assert main(["verify", str(fixture_dir / "ising.json"),
                     "--suite", "nonsense"]) == 2

    def test_report_reproducible(self, fixture_dir, tmp_path):
        r1 = tmp_path / "r1.json"
        r2 = tmp_path / "r2.json"
        for path in (r1, r2):
            assert main(["verify", str(fixture_dir / "z2k1.json"),
                         "--suite", "pentagon,fusing",
                         "--report", str(path), "--format", "json"]) == 0
        assert r1.read_bytes() == r2.read_bytes()

    def test_json_and_text_verdicts_agree(self, fixture_dir, capsys):
        main(["verify", str(fixture_dir / "mut_fusing.json"), "--suite", "fusing",
              "--format", "json"])
        obj = json.loads(capsys.readouterr().out)
        assert obj["verdict"] == "fail"
        main(["verify", str(fixture_dir / "mut_fusing.json"), "--suite", "fusing"])
        assert "overall: FAIL" in capsys.readouterr().out

    def test_every_suite_names_an_identity(self, fixture_dir, capsys):
        main(["verify", str(fixture_dir / "trivial.json"), "--format", "json"])
        obj = json.loads(capsys.readouterr().out)
        assert all(rep["identity"] for rep in obj["reports"])


class TestInspection:
    def test_pairing_triple(self, fixture_dir, capsys):
        assert main(["pairing", str(fixture_dir / "ising.json"),
                     "--triple", "sigma,sigma,eps"]) == 0
        assert "pairing" in capsys.readouterr().out

    def test_dual(self, fixture_dir, capsys):
        assert main(["dual", str(fixture_dir / "trivial.json")]) == 0
        assert "dual coefficients" in capsys.readouterr().out

    def test_construct_writes_output(self, fixture_dir, tmp_path, capsys):
        out = tmp_path / "out.json"
        assert main(["construct", str(fixture_dir / "z2k1.json"),
                     "-o", str(out)]) == 0
        obj = json.loads(out.read_text())
        assert "ffa" in obj
        assert obj["ffa"]["sectors"] == [["0", "0"], ["1", "1"]]


class TestLattice:
    def test_exact_checks_and_emit(self, tmp_path, capsys):
        out = tmp_path / "z2.json"
        code = main(["lattice", "--k", "1", "--truncate", "6", "--samples", "2",
                     "--seed", "1", "--tol", "1e-6",
                     "--check", "grading,residue", "--emit-bundle", str(out)])
        assert code == 0
        assert out.exists()
        assert main(["verify", str(out), "--suite", "pentagon,dual"]) == 0

    def test_unknown_check_is_usage_error(self):
        assert main(["lattice", "--k", "1", "--check", "bogus"]) == 2


class TestReportCommand:
    def test_roundtrip(self, fixture_dir, tmp_path, capsys):
        path = tmp_path / "rep.json"
        main(["verify", str(fixture_dir / "trivial.json"), "--report", str(path)])
        capsys.readouterr()
        assert main(["report", str(path)]) == 0
        text = capsys.readouterr().out
        assert "overall: PASS" in text
        assert main(["report", str(path), "--format", "json"]) == 0
        obj = json.loads(capsys.readouterr().out)
        assert obj["verdict"] == "pass"
