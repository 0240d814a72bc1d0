import json
import subprocess
import sys

import numpy as np
import pytest

from symtwistor import cli
from symtwistor.errors import RankDecisionError, UnknownSuiteError
from symtwistor.serialization import decode_array, encode_array, to_jsonable
from symtwistor.suites import SuiteConfig, _Checks, list_suites, run_suite


def strip_time(text):
    data = json.loads(text)
    data.pop("wall_time")
    return data


def test_encode_real_and_complex():
    assert encode_array(np.eye(2)) == [[1.0, 0.0], [0.0, 1.0]]
    z = np.array([[1 + 2j, 3j]])
    enc = encode_array(z)
    assert enc == [[[1.0, 2.0], [0.0, 3.0]]]
    np.testing.assert_array_equal(decode_array(json.loads(json.dumps(enc)), complex_=True), z)
    np.testing.assert_array_equal(decode_array([[1, 2], [3, 4]]), [[1, 2], [3, 4]])
    with pytest.raises(ValueError):
        decode_array([[1, 2, 3]], complex_=True)


def test_to_jsonable():
    out = to_jsonable({"a": np.float64(1.5), "b": np.int64(2), "c": np.bool_(True), "d": 1j, "e": (np.ones(1),)})
    assert json.loads(json.dumps(out)) == {"a": 1.5, "b": 2, "c": True, "d": [0.0, 1.0], "e": [[1.0]]}


def test_list_suites():
    names = [n for n, _ in list_suites()]
    assert names == sorted(names)
    assert {"siegel", "integrability", "all"} <= set(names)
    assert list_suites() == list_suites()


def test_config_validation():
    with pytest.raises(UnknownSuiteError):
        SuiteConfig("nope")
    with pytest.raises(ValueError):
        SuiteConfig("siegel", samples=0)


def test_siegel_suite_example():
    rep = run_suite(SuiteConfig("siegel", n=2, samples=50, seed=7, tol=1e-8))
    names = " ".join(c.name for c in rep.checks)
    assert rep.status == "pass"
    for key in ("equivariance", "round-trip", "anti-holomorphy"):
        assert key in names


def test_indeterminate_check_fails_suite():
    ck = _Checks("x")

    def boom():
        raise RankDecisionError("no gap", singular_values=[1.0, 1e-5])

    ck.run("rank", 1.0, boom)
    assert ck.records[0].status == "indeterminate"


def test_cli_unknown_suite_exits_2(capsys):
    assert cli.main(["--suite", "nope"]) == 2
    assert "unknown suite" in capsys.readouterr().err
    assert cli.main([]) == 2


def test_cli_list(capsys):
    assert cli.main(["--list"]) == 0
    assert "siegel" in capsys.readouterr().out


def test_cli_json_out_file(tmp_path):
    out = tmp_path / "report.json"
    assert cli.main(["--suite", "symplectic-core", "--dim", "2", "--samples", "5", "--format", "json",
                     "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["schema"] == 1 and data["status"] == "pass"
    assert data["config"]["samples"] == 5
    assert {"name", "status", "residual", "tolerance"} <= set(data["checks"][0])


def test_cli_text_format(capsys):
    assert cli.main(["--suite", "lagrangian", "--samples", "5"]) == 0
    assert capsys.readouterr().out.splitlines()[-1].startswith("PASS")


@pytest.mark.parametrize("dim", [1, 3])
def test_all_suites_pass_across_dimensions(dim):
    rep = run_suite(SuiteConfig("all", n=dim, samples=10, seed=1))
    bad = [c for c in rep.checks if c.status != "pass"]
    assert not bad, bad


def test_cli_tight_tolerance_fails(capsys):
    # a tolerance below roundoff must fail honestly, with exit status 1
    assert cli.main(["--suite", "siegel", "--samples", "5", "--tol", "1e-300"]) == 1


def test_reports_reproducible_in_process(capsys):
    cli.main(["--suite", "riemann-twistor", "--samples", "5", "--format", "json"])
    a = capsys.readouterr().out
    cli.main(["--suite", "riemann-twistor", "--samples", "5", "--format", "json"])
    b = capsys.readouterr().out
    assert strip_time(a) == strip_time(b)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "symtwistor", "--list"], capture_output=True, text=True)
    assert proc.returncode == 0 and "riemann-twistor" in proc.stdout
