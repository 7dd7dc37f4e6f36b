"""End-to-end CLI checks: dispatch, exit codes, output shapes, caching.

All invocations go through main() in-process; one subprocess smoke test
covers the installed entry point.  A module-wide cache directory keeps
the quartic class group from being recomputed per test.
"""

import json
import os
import subprocess
import sys

import pytest

from princheb.cli import main

QUARTIC = "[-3, 13]"
Z4_OVER_Z2 = json.dumps(
    {"kernel": [2], "group": {"cyclic": 2}, "cocycle": [[0], [0], [0], [1]]}
)
SQM15 = json.dumps(
    {
        "type": "generic",
        "min_poly": [15, 0, 1],
        "integral_basis": [[1, 1], [0, 1], [1, 2], [1, 2]],
        "index": 2,
        "frobenius": {
            "conductor": 15,
            "classes": {
                "1": 0, "2": 0, "4": 0, "8": 0,
                "7": 1, "11": 1, "13": 1, "14": 1,
            },
        },
    }
)
# Q(zeta_8): quartic with complex places, so principal orders are
# undecidable and any scan must abort
ZETA8 = json.dumps(
    {
        "type": "generic",
        "min_poly": [1, 0, 0, 0, 1],
        "integral_basis": [
            [1, 1], [0, 1], [0, 1], [0, 1],
            [0, 1], [1, 1], [0, 1], [0, 1],
            [0, 1], [0, 1], [1, 1], [0, 1],
            [0, 1], [0, 1], [0, 1], [1, 1],
        ],
        "index": 1,
        "frobenius": {
            "conductor": 8,
            "classes": {"1": 0, "3": 1, "5": 2, "7": 3},
        },
    }
)


@pytest.fixture(scope="module", autouse=True)
def cache_dir(tmp_path_factory):
    d = tmp_path_factory.mktemp("cgcache")
    old = os.environ.get("PRINCHEB_CACHE")
    os.environ["PRINCHEB_CACHE"] = str(d)
    yield d
    if old is None:
        os.environ.pop("PRINCHEB_CACHE", None)
    else:
        os.environ["PRINCHEB_CACHE"] = old


def run(argv, capsys):
    rc = main(argv)
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


class TestFieldInfo:
    def test_quadratic_text(self, capsys):
        rc, out, _ = run(["field", "info", "[-5]"], capsys)
        assert rc == 0
        assert "lenstra bound (GRH): 5" in out
        assert "class number: 2" in out
        assert "bach-sorenson bound (GRH, h = 2): 1519" in out

    def test_quartic_json(self, capsys):
        rc, out, _ = run(["field", "info", QUARTIC, "--json"], capsys)
        assert rc == 0
        report = json.loads(out)
        assert report["discriminant"] == 1521
        assert report["degree"] == 4
        assert report["class_number"] == 2
        assert report["bach_sorenson_bound"] == 6992
        assert report["grh_conditional"] is True
        assert report["certification"] == "certified-by-bound"

    def test_not_squarefree_rejected(self, capsys):
        rc, _, err = run(["field", "info", '{"ds": [4, 13]}'], capsys)
        assert rc == 2
        assert "squarefree" in err

    def test_unclassifiable_config_rejected(self, capsys):
        rc, _, err = run(["field", "info", '{"frob": 3}'], capsys)
        assert rc == 2
        assert "type" in err

    def test_empty_list_rejected(self, capsys):
        rc, _, err = run(["field", "info", "[]"], capsys)
        assert rc == 2


class TestFieldClassgroup:
    def test_cyclic_four_text(self, capsys):
        rc, out, _ = run(["field", "classgroup", "[-14]"], capsys)
        assert rc == 0
        assert "class group: 4" in out
        assert "certified-by-bound" in out

    def test_quartic_json(self, capsys):
        rc, out, _ = run(["field", "classgroup", QUARTIC, "--json"], capsys)
        assert rc == 0
        report = json.loads(out)
        assert report["invariant_factors"] == [2]
        assert len(report["factor_base"]) == 4
        assert {e["p"] for e in report["factor_base"]} == {2, 3}
        assert all(e["class"] == [1] for e in report["factor_base"])

    def test_cache_reuse_is_deterministic(self, capsys, cache_dir):
        rc1, out1, _ = run(["field", "classgroup", QUARTIC], capsys)
        files = list(cache_dir.iterdir())
        rc2, out2, _ = run(["field", "classgroup", QUARTIC], capsys)
        assert rc1 == rc2 == 0
        assert out1 == out2
        assert files and list(cache_dir.iterdir())

    def test_box_override_accepted(self, capsys):
        rc, out, _ = run(
            ["field", "classgroup", "[-5]", "--box", "40"], capsys
        )
        assert rc == 0
        assert "class group: 2" in out

    def test_bad_box_rejected(self, capsys):
        rc, _, err = run(
            ["field", "classgroup", "[-5]", "--box", "0"], capsys
        )
        assert rc == 2
        assert "box" in err


class TestScan:
    def test_minimal_scan_single_record(self, capsys):
        rc, out, _ = run(["scan", "[-5]", "--max-norm", "2"], capsys)
        assert rc == 0
        assert "p = 2: ramified" in out
        assert "primes up to 2: 1" in out

    def test_csv_stream(self, capsys):
        rc, out, _ = run(
            ["scan", "[-5]", "--max-norm", "60", "--csv"], capsys
        )
        assert rc == 0
        lines = out.splitlines()
        assert lines[0] == "p,status,frob_rep,f,principal_order,is_principal_split"
        assert "3,scanned,0,1,2,0" in lines
        assert "11,scanned,1,2,1,1" in lines
        assert any(line.startswith("# class 0") for line in lines)

    def test_json_records_and_summary(self, capsys):
        rc, out, _ = run(
            ["scan", "[-5]", "--max-norm", "150", "--json"], capsys
        )
        assert rc == 0
        report = json.loads(out)
        assert len(report["records"]) == 35
        assert report["ramified"] == [2, 5]
        assert len(report["summary"]) == 2
        for row in report["summary"]:
            assert row["denominator"] == 35

    def test_summary_at_group_exponent_is_class_mass(self, capsys):
        rc, out, _ = run(
            ["scan", "[-5]", "--max-norm", "5000", "--m", "2", "--json"],
            capsys,
        )
        assert rc == 0
        report = json.loads(out)
        for row in report["summary"]:
            assert abs(row["decimal"] - 0.5) < 0.05

    def test_threads_do_not_change_output(self, capsys):
        argv = ["scan", QUARTIC, "--max-norm", "400", "--csv"]
        rc1, out1, _ = run(argv, capsys)
        rc2, out2, _ = run(argv + ["--threads", "3"], capsys)
        assert rc1 == rc2 == 0
        assert out1 == out2

    def test_short_limit_rejected(self, capsys):
        rc, _, err = run(["scan", "[-5]", "--max-norm", "1"], capsys)
        assert rc == 2

    def test_undecidable_field_aborts_with_exit_3(self, capsys):
        rc, _, err = run(["scan", ZETA8, "--max-norm", "20"], capsys)
        assert rc == 3
        assert "p = 3" in err


class TestDensity:
    def test_nonsplit_generator_class_is_zero(self, capsys):
        rc, out, _ = run(
            ["density", Z4_OVER_Z2, "--class", "1", "--m", "1"], capsys
        )
        assert rc == 0
        assert "density: 0/1" in out
        assert "positive: no" in out

    def test_identity_class_at_exponent(self, capsys):
        rc, out, _ = run(
            ["density", Z4_OVER_Z2, "--class", "0", "--m", "2", "--json"],
            capsys,
        )
        assert rc == 0
        report = json.loads(out)
        assert report["density"]["rational"] == "1/2"
        assert report["positive"] is True
        assert report["extension_order"] == 4
        assert report["certificate"] is not None

    def test_split_config_identity_at_kernel_exponent(self, capsys):
        cfg = json.dumps({"kernel": [2, 4], "group": {"cyclic": 2}})
        rc, out, _ = run(
            ["density", cfg, "--class", "0", "--m", "4", "--json"], capsys
        )
        assert rc == 0
        assert json.loads(out)["density"]["rational"] == "1/2"

    def test_invalid_representative_rejected(self, capsys):
        rc, _, err = run(["density", Z4_OVER_Z2, "--class", "7"], capsys)
        assert rc == 2
        assert "outside the group" in err

    def test_wrong_cocycle_shape_rejected(self, capsys):
        cfg = json.dumps(
            {"kernel": [2], "group": {"cyclic": 2}, "cocycle": [[0], [1]]}
        )
        rc, _, err = run(["density", cfg], capsys)
        assert rc == 2
        assert "coordinate vectors" in err

    def test_unnormalized_cocycle_rejected(self, capsys):
        cfg = json.dumps(
            {
                "kernel": [3],
                "group": {"cyclic": 2},
                "cocycle": [[0], [1], [0], [0]],
            }
        )
        rc, _, err = run(["density", cfg], capsys)
        assert rc == 2

    def test_permutation_group_config(self, capsys):
        cfg = json.dumps(
            {"kernel": [2], "group": {"permutations": [[1, 2, 0]]}}
        )
        rc, out, _ = run(["density", cfg, "--class", "1"], capsys)
        assert rc == 0
        assert "density: 1/6" in out

    def test_dihedral_group_config(self, capsys):
        cfg = json.dumps({"kernel": [3], "group": {"dihedral": 3}})
        rc, out, _ = run(["density", cfg, "--class", "0"], capsys)
        assert rc == 0
        assert "density:" in out


class TestRecover:
    def test_two_four_kernel(self, capsys):
        cfg = json.dumps({"kernel": [2, 4], "group": {"cyclic": 2}})
        rc, out, _ = run(["recover", cfg], capsys)
        assert rc == 0
        assert out.strip() == "2,4"

    def test_trivial_kernel(self, capsys):
        cfg = json.dumps({"kernel": [], "group": {"cyclic": 3}})
        rc, out, _ = run(["recover", cfg], capsys)
        assert rc == 0
        assert out.strip() == "1"

    def test_json_table(self, capsys):
        cfg = json.dumps({"kernel": [2, 4], "group": {"cyclic": 2}})
        rc, out, _ = run(["recover", cfg, "--json"], capsys)
        assert rc == 0
        report = json.loads(out)
        assert report["invariant_factors"] == [2, 4]
        assert set(report["table"]) == {"1", "2", "4", "8"}

    def test_nonsplit_carrier(self, capsys):
        rc, out, _ = run(["recover", Z4_OVER_Z2], capsys)
        assert rc == 0
        assert out.strip() == "2"


class TestHesVerify:
    def test_quadratic_inconclusive_with_gold(self, capsys):
        rc, out, _ = run(["hes", "verify", "[-5]"], capsys)
        assert rc == 0
        assert "conclusion: INCONCLUSIVE" in out
        assert "cyclic over Q" in out

    def test_quadratic_json(self, capsys):
        rc, out, _ = run(["hes", "verify", "[-5]", "--json"], capsys)
        assert rc == 0
        report = json.loads(out)
        assert report["conclusion"] == "INCONCLUSIVE"
        assert report["bound"] == 1519
        assert report["gold_certificate"]["condition"] == (
            "cyclic-over-rationals"
        )
        assert report["grh_conditional"] is True

    def test_quartic_nonsplit_json(self, capsys):
        rc, out, _ = run(
            ["hes", "verify", QUARTIC, "--json", "--threads", "2"], capsys
        )
        assert rc == 0
        report = json.loads(out)
        assert report["conclusion"] == "NONSPLIT"
        assert report["bound"] == 6992
        assert report["gold_certificate"] is None
        silent = [w for w in report["per_class"] if w["witness"] is None]
        assert len(silent) == 1 and silent[0]["representative"] == 3

    def test_uncertified_field_refused(self, capsys):
        rc, _, err = run(["hes", "verify", SQM15], capsys)
        assert rc == 2
        assert "tentative" in err


class TestConfigHandling:
    def test_invalid_inline_json(self, capsys):
        rc, _, err = run(["field", "info", "{bad"], capsys)
        assert rc == 2
        assert "not valid JSON" in err

    def test_missing_file(self, capsys):
        rc, _, err = run(["field", "info", "no-such-config.json"], capsys)
        assert rc == 2
        assert "cannot read" in err

    def test_config_from_file(self, capsys, tmp_path):
        path = tmp_path / "field.json"
        path.write_text('{"type": "quadratic", "d": -5}')
        rc, out, _ = run(["field", "info", str(path)], capsys)
        assert rc == 0
        assert "discriminant: -20" in out

    def test_unknown_extension_key_rejected(self, capsys):
        cfg = json.dumps(
            {"kernel": [2], "group": {"cyclic": 2}, "twist": 1}
        )
        rc, _, err = run(["density", cfg], capsys)
        assert rc == 2
        assert "twist" in err

    def test_argparse_missing_flag_exits_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["scan", "[-5]"])
        assert exc.value.code == 2
        capsys.readouterr()

    def test_installed_entry_point(self):
        proc = subprocess.run(
            [sys.executable, "-m", "princheb.cli", "field", "info", "[-5]"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert "discriminant: -20" in proc.stdout
