import csv
import io
import json
import math
import subprocess
import sys

import pytest

from littlewood_lab import construct_extremal, serialize
from littlewood_lab.cli import CSV_HEADER, main


def run(*argv):
    buf = io.StringIO()
    code = main(list(argv), out=buf)
    return code, buf.getvalue()


@pytest.fixture
def tfile(tmp_path):
    def make(m):
        p = tmp_path / f"t{m}.json"
        p.write_bytes(serialize(construct_extremal(m)))
        return str(p)

    return make


class TestConstruct:
    def test_m3(self, tmp_path):
        p = tmp_path / "t3.json"
        code, _ = run("construct", "--m", "3", "-o", str(p))
        assert code == 0
        doc = json.loads(p.read_text(encoding="utf-8"))
        assert doc["dims"] == [4, 4, 2] and len(doc["entries"]) == 16

    def test_m2_stdout(self):
        code, out = run("construct", "--m", "2")
        assert code == 0
        assert len(json.loads(out)["entries"]) == 4

    def test_cap(self, capsys):
        code, out = run("construct", "--m", "20")
        assert code == 2 and out == ""
        assert "cap" in capsys.readouterr().err

    def test_unwritable(self, tmp_path):
        code, _ = run("construct", "--m", "2", "-o", str(tmp_path / "missing" / "t.json"))
        assert code == 2


class TestNorm:
    def test_t4_exact(self, tfile):
        code, out = run("norm", tfile(4))
        doc = json.loads(out)
        assert code == 0 and doc["value"] == 8 and doc["method"] == "exact"
        assert [len(s) for s in doc["certificate"]] == [8, 8, 4, 2]

    def test_t5_budget(self, tfile, capsys):
        code, out = run("norm", tfile(5))
        assert code == 2
        assert "budget" in capsys.readouterr().err

    def test_t5_alternating(self, tfile):
        code, out = run("norm", tfile(5), "--method", "alternating", "--restarts", "100")
        doc = json.loads(out)
        assert code == 0 and doc["value"] == 16
        assert doc["stats"]["seed"] == 0

    def test_t5_certified(self, tfile):
        code, out = run("norm", tfile(5), "--method", "certified", "--upper", "16")
        doc = json.loads(out)
        assert code == 0 and doc["method"] == "certified" and doc["gap"] == 0

    def test_certified_gap_exit(self, tmp_path):
        # a bound the form cannot meet: the result is heuristic and exit code 1
        p = tmp_path / "t.json"
        p.write_bytes(serialize(construct_extremal(3)))
        code, out = run("norm", str(p), "--method", "certified", "--upper", "5")
        assert code == 1 and json.loads(out)["method"] == "heuristic"

    def test_missing_file(self, tmp_path):
        assert run("norm", str(tmp_path / "nope.json"))[0] == 2

    def test_malformed(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text('{"m": 2}', encoding="utf-8")
        assert run("norm", str(p))[0] == 2

    def test_workers_identical(self, tfile):
        assert run("norm", tfile(4))[1] == run("norm", tfile(4), "--workers", "3")[1]


class TestMixedNorm:
    def test_t3_l1_l2(self, tfile):
        code, out = run("mixed-norm", tfile(3), "1,2,2")
        doc = json.loads(out)
        assert code == 0 and doc["value"] == pytest.approx(8.0) and doc["exact_form"] == "2^(6/2)"
        assert doc["admissible"]

    def test_t2_frobenius(self, tfile):
        doc = json.loads(run("mixed-norm", tfile(2), "2,2")[1])
        assert doc["value"] == pytest.approx(2.0)

    def test_t3_alpha_two(self, tfile):
        doc = json.loads(run("mixed-norm", tfile(3), "2,1.3333333333,1.3333333333", "--ratio")[1])
        assert doc["ratio"] == pytest.approx(math.sqrt(2), rel=1e-9)
        assert doc["value"] == pytest.approx(4 * math.sqrt(2), rel=1e-9)

    def test_fraction_syntax(self, tfile):
        doc = json.loads(run("mixed-norm", tfile(3), "2,4/3,4/3", "--ratio")[1])
        assert doc["ratio_exact_form"] == "2^(1/2)"

    def test_arity_mismatch(self, tfile):
        assert run("mixed-norm", tfile(3), "1,2")[0] == 2


class TestVerify:
    def test_exact_m4(self):
        code, out = run("verify", "--m-max", "4", "--mode", "exact")
        rows = json.loads(out)["reports"]
        assert code == 0 and [r["verdict"] for r in rows] == ["pass"] * 3
        assert [r["empirical_ratio"] for r in rows] == pytest.approx([math.sqrt(2), 2, 2 * math.sqrt(2)])

    def test_certified_m5(self):
        code, out = run("verify", "--m-max", "5", "--mode", "certified")
        rows = json.loads(out)["reports"]
        assert code == 0 and len(rows) == 4
        assert all(r["verdict"] == "pass" and r["norm_method"] == "certified" for r in rows)

    def test_alpha_two(self):
        code, out = run("verify", "--m-max", "4", "--alphas", "2")
        rows = json.loads(out)["reports"]
        assert code == 0
        assert [r["empirical_ratio"] for r in rows] == pytest.approx([math.sqrt(2)] * 3, rel=1e-9)

    def test_csv(self):
        code, out = run("verify", "--m-max", "3", "--alphas", "1,2", "--format", "csv")
        rows = list(csv.reader(io.StringIO(out)))
        assert code == 0
        assert rows[0] == CSV_HEADER == "m,alpha,q,ratio,exact_form,lower,upper,method,verdict".split(",")
        assert [(r[0], r[1]) for r in rows[1:]] == [("2", "1.0"), ("2", "2.0"), ("3", "1.0"), ("3", "2.0")]
        assert all(r[-1] == "pass" for r in rows[1:])

    def test_gap_exit(self):
        code, out = run("verify", "--m-max", "6", "--mode", "certified", "--restarts", "1", "--seed", "3")
        verdicts = [r["verdict"] for r in json.loads(out)["reports"]]
        assert code == (0 if all(v == "pass" for v in verdicts) else 1)

    def test_exact_over_budget(self):
        assert run("verify", "--m-max", "5", "--mode", "exact")[0] == 2

    def test_bad_alpha(self):
        assert run("verify", "--m-max", "3", "--alphas", "3")[0] == 2


class TestKhinchine:
    def test_p1(self):
        doc = json.loads(run("khinchine", "--p", "1")[1])
        assert doc["A"] == pytest.approx(2**-0.5, abs=1e-15) and doc["branch"] == "power"

    def test_gamma_branch_note(self):
        doc = json.loads(run("khinchine", "--p", "2")[1])
        assert doc["A"] == 1.0 and "sqrt(2)" in doc["note"]

    def test_p0(self):
        code, out = run("khinchine", "--p0", "--tol", "1e-12")
        doc = json.loads(out)
        assert code == 0 and 1.84 < doc["p0"] < 1.86 and abs(doc["residual"]) < 1e-12
        assert doc["branch_difference"] < 1e-9

    def test_p_named_p0(self):
        doc = json.loads(run("khinchine", "--p", "p0")[1])
        assert doc["p"] == doc["p0"]

    def test_sandwich(self):
        code, out = run("khinchine", "--sandwich", "--n", "10", "--trials", "100", "--p", "1")
        doc = json.loads(out)
        assert code == 0 and doc["all_hold"] and doc["failures"] == 0
        assert doc["min_lower_margin"] >= 0 and doc["min_upper_margin"] >= 0

    def test_out_of_range(self):
        assert run("khinchine", "--p", "3")[0] == 2

    def test_missing_p(self):
        assert run("khinchine")[0] == 2


class TestBoundsCmd:
    def test_alpha_two(self):
        doc = json.loads(run("bounds", "--m", "3", "--alpha", "2")[1])
        assert doc["beta"] == pytest.approx(4 / 3) and doc["growth"] == "sublinear"
        assert doc["lower_exact_form"] == "2^(1/2)" and doc["admissible"]

    def test_alpha_one(self):
        doc = json.loads(run("bounds", "--m", "5")[1])
        assert doc["lower"] == pytest.approx(doc["upper"]) == pytest.approx(4.0)


class TestProcess:
    def test_usage_error(self):
        r = subprocess.run([sys.executable, "-m", "littlewood_lab", "bogus"], capture_output=True)
        assert r.returncode == 2

    def test_byte_identical(self):
        cmd = [sys.executable, "-m", "littlewood_lab", "verify", "--m-max", "4", "--alphas", "1,1.5", "--format", "csv"]
        a = subprocess.run(cmd, capture_output=True, check=True).stdout
        b = subprocess.run(cmd, capture_output=True, check=True).stdout
        assert a == b and a.decode("utf-8").startswith("m,alpha,q,")

    def test_seeded_reproducible(self):
        cmd = [sys.executable, "-m", "littlewood_lab", "khinchine", "--sandwich", "--p", "1.5", "--seed", "9"]
        a = subprocess.run(cmd, capture_output=True, check=True).stdout
        b = subprocess.run(cmd, capture_output=True, check=True).stdout
        assert a == b
