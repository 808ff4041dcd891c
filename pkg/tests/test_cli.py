import json
import subprocess
import sys

import pytest

from clitools import moebius_mesh, run, split_mesh, square_mesh

from plvolume import parse_mesh


@pytest.fixture
def sq(tmp_path):
    return square_mesh(tmp_path / "square.json")


@pytest.fixture
def chain_file(sq, tmp_path):
    out = tmp_path / "chain.json"
    code, _ = run("equalize", "--mesh", sq, "--from", "omega2", "--to", "omega1", "--out", out)
    assert code == 0
    return out


class TestEqualizeVerify:
    def test_square(self, sq, tmp_path):
        out = tmp_path / "chain.json"
        code, payload = run("equalize", "--mesh", sq, "--from", "omega2", "--to", "omega1", "--out", out)
        assert code == 0 and payload["ok"] and payload["steps"] == 1
        assert json.loads(out.read_text())["format"] == "plvolume-chain"

    def test_verify(self, chain_file, sq):
        assert run("verify", "--chain", chain_file)[0] == 0
        code, payload = run("verify", "--chain", chain_file, "--mesh", sq, "--from", "omega2", "--to", "omega1")
        assert code == 0 and payload["failures"] == []

    def test_verify_wrong_endpoint(self, chain_file, sq):
        code, payload = run("verify", "--chain", chain_file, "--mesh", sq, "--from", "omega1", "--to", "omega1")
        assert code == 1 and payload["failures"]

    def test_tampered(self, chain_file):
        obj = json.loads(chain_file.read_text())
        obj["steps"][0]["amount"] = "1/3"
        chain_file.write_text(json.dumps(obj))
        code, payload = run("verify", "--chain", chain_file)
        assert code == 1 and not payload["ok"]
        assert run("eval", "--chain", chain_file, "--point", "1/3,1/3")[0] == 1

    def test_fresh_process_agrees(self, chain_file):
        proc = subprocess.run([sys.executable, "-m", "plvolume.cli", "verify", "--chain", str(chain_file)],
                              capture_output=True, text=True)
        assert proc.returncode == 0
        assert json.loads(proc.stdout)["iterations"] == 1

    def test_deterministic_output(self, sq, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        run("equalize", "--mesh", sq, "--from", "omega2", "--to", "omega1", "--out", a)
        run("equalize", "--mesh", sq, "--from", "omega2", "--to", "omega1", "--out", b)
        assert a.read_bytes() == b.read_bytes()


class TestEval:
    def test_forward_and_inverse(self, chain_file):
        code, payload = run("eval", "--chain", chain_file, "--point", "1/3,1/3")
        assert code == 0 and payload["image"] == ["2/9", "2/9"]
        code, payload = run("eval", "--chain", chain_file, "--point", "2/9,2/9", "--inverse")
        assert payload["image"] == ["1/3", "1/3"]

    def test_vertex_fixed(self, chain_file):
        assert run("eval", "--chain", chain_file, "--point", "1,1")[1]["image"] == ["1", "1"]

    @pytest.mark.parametrize("point,kind", [("a,b", "CliError"), ("5,5", "PointOutsideComplex")])
    def test_bad_point(self, chain_file, point, kind):
        code, payload = run("eval", "--chain", chain_file, "--point", point)
        assert code == 2 and payload["error"]["type"] == kind


class TestCheck:
    def test_square(self, sq):
        code, payload = run("check", "--mesh", sq)
        assert code == 0 and payload["orientable"] and payload["euler_characteristic"] == 1

    def test_closed_flag(self, sq):
        assert run("check", "--mesh", sq, "--closed")[0] == 1

    def test_moebius(self, tmp_path):
        code, payload = run("check", "--mesh", moebius_mesh(tmp_path / "m.json"))
        assert code == 1 and payload["error"]["type"] == "NonOrientable"

    def test_parse_error_position(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text(square_mesh(tmp_path / "s.json").read_text().replace('"1", "1"]', '"1/0", "1"]'))
        code, payload = run("check", "--mesh", p)
        assert code == 2 and payload["error"]["type"] == "ParseError"
        assert payload["error"]["line"] == 10

    def test_missing_file(self, tmp_path):
        assert run("check", "--mesh", tmp_path / "nope.json")[0] == 2


class TestInputErrors:
    def test_total_mismatch(self, tmp_path):
        p = square_mesh(tmp_path / "s.json", {"a": [1, 1], "b": [1, 2]})
        code, payload = run("equalize", "--mesh", p, "--from", "b", "--to", "a")
        assert code == 2 and payload["error"]["type"] == "TotalVolumeMismatch"

    def test_disconnected(self, tmp_path):
        p = split_mesh(tmp_path / "split.json")
        code, payload = run("equalize", "--mesh", p, "--from", "omega2", "--to", "omega1")
        assert code == 2 and payload["error"]["type"] == "ComponentVolumeMismatch"

    @pytest.mark.parametrize("amount", ["0", "1/2"])
    def test_transfer_out_of_range(self, tmp_path, amount):
        p = square_mesh(tmp_path / "s.json", {"a": [1, "1/2"]})
        code, payload = run("transfer", "--mesh", p, "--form", "a", "--sigma", 0, "--tau", 1, "--amount", amount)
        assert code == 2 and payload["error"]["type"] == "SpecOutOfRange"

    def test_unknown_cocycle(self, sq):
        assert run("cocycle", "--mesh", sq, "--name", "zzz")[0] == 2

    def test_usage_error(self):
        assert run("equalize")[0] == 2


class TestOtherCommands:
    def test_transfer_worked(self, tmp_path):
        p = square_mesh(tmp_path / "s.json", {"a": [1, "1/2"]})
        code, payload = run("transfer", "--mesh", p, "--form", "a", "--sigma", 0, "--tau", 1, "--amount", "1/4")
        assert code == 0
        assert payload["points"]["v"] == ["2/5", "2/5"] and payload["points"]["w"] == ["3/4", "3/4"]
        assert payload["volumes_after"] == ["5/4", "1/4"]

    def test_cocycle_diff(self, sq):
        code, payload = run("cocycle", "--mesh", sq, "--name", "omega2", "--minus", "omega1")
        assert payload["diff"] == ["1/2", "-1/2"] and payload["totals_match"]

    def test_canonical_is_fixed_point(self, sq, tmp_path):
        out = tmp_path / "c.json"
        run("canonical", "--mesh", sq, "--out", out)
        assert out.read_text() == sq.read_text()

    def test_gen_and_random_cocycle(self, tmp_path):
        t = tmp_path / "t.json"
        assert run("gen", "grid-torus", "--m", 3, "--out", t)[0] == 0
        assert run("gen", "random-cocycle", "--mesh", t, "--seed", 1, "--total", 3, "--out", t)[0] == 0
        doc = parse_mesh(t.read_text())
        assert doc.complex.n_cells == 18 and doc["random"].total == 3

    def test_gen_bad_params(self, tmp_path):
        code, payload = run("gen", "grid-torus", "--m", 1)
        assert code == 2 and payload["error"]["type"] == "BadParams"

    def test_render(self, sq, chain_file, tmp_path):
        out = tmp_path / "s.svg"
        assert run("render", "--mesh", sq, "--cocycle", "omega2", "--chain", chain_file, "--out", out)[0] == 0
        assert out.read_text().count("<polygon") == 2

    def test_lab(self, tmp_path):
        code, payload = run("lab", "mollifier", "--delta", "0.5")
        assert code == 0 and abs(payload["integral"] - 1) < 1e-8
        csv = tmp_path / "phi.csv"
        code, payload = run("lab", "interpolate", "--phi", "x2", "--csv", csv)
        assert code == 0 and payload["min_increment"] >= 0 and csv.exists()
        code, payload = run("lab", "fiber", "--F", "1+x/2", "--spacing", "0.02")
        assert code == 0 and payload["max_jacobian_error"] <= 1e-4
