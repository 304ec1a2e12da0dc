import json
import subprocess
import sys

import pytest

from qbench.cli import main
from qbench.config import ConfigError, RunConfig, from_mapping, load_config

FAILING = """
records:
  - id: good
    citation: test
    group: parameter-free
    lhs: "sum(k = 0..inf){ q^(k^2) / qp(q; q)_k }"
    rhs: "1 / qp(q, q^4; q^5)_inf"
  - id: bad
    citation: test
    group: parameter-free
    lhs: "sum(k = 0..inf){ q^(k^2) / qp(q; q)_k }"
    rhs: "1 / qp(q, q^3; q^5)_inf"
  - id: broken
    citation: test
    group: parameter-free
    lhs: "sum(k = 0..inf){ 1 }"
    rhs: "1"
"""


@pytest.fixture
def scratch_catalog(tmp_path):
    p = tmp_path / "cat.yaml"
    p.write_text(FAILING)
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_expand(capsys):
    code, out, _ = run(capsys, "expand", "sum(k=0..inf){ q^(k^2) / qp(q;q)_k }", "--order", "6")
    assert code == 0 and out.strip() == "1 + q + q^2 + q^3 + 2q^4 + 2q^5 + 3q^6"


def test_expand_binding_and_json(capsys):
    code, out, _ = run(capsys, "expand", "qp(z; q)_2", "--bind", "z=q^2", "--order", "5", "--json")
    d = json.loads(out)
    assert code == 0 and d["ok"] and d["coefficients"] == {"0": "1", "2": "-1", "3": "-1", "5": "1"}
    assert d["valuation"] == 0


def test_expand_unbound(capsys):
    code, _, err = run(capsys, "expand", "qp(z; q)_inf")
    assert code == 2 and "UnboundVariable z" in err
    code, out, _ = run(capsys, "expand", "qp(z; q)_inf", "--json")
    assert code == 2 and json.loads(out)["error"]["kind"] == "UnboundVariable"


def test_expand_parse_error_json(capsys):
    code, out, _ = run(capsys, "expand", "qp(q;q)_", "--json")
    err = json.loads(out)["error"]
    assert code == 2 and err["kind"] == "ParseError" and err["position"] == 8 and err["expected"]


def test_expand_bad_binding(capsys):
    code, _, err = run(capsys, "expand", "z", "--bind", "z")
    assert code == 2 and "name=value" in err


def test_verify_pass(capsys):
    code, out, _ = run(capsys, "verify", "bilgg-a", "--order", "60")
    assert code == 0 and out.startswith("PASS  bilgg-a")


def test_verify_json_schema(capsys):
    code, out, _ = run(capsys, "verify", "1psi1", "--order", "30", "--json")
    d = json.loads(out)
    assert code == 0 and d["schema"] == "qbench/1" and d["summary"] == {"PASS": 4, "FAIL": 0, "ERROR": 0}
    for rep in d["reports"]:
        assert set(rep) >= {"id", "sample", "order", "verdict", "first_mismatch", "certificates"}
        for cert in rep["certificates"]:
            assert set(cert) >= {"sum", "method", "probed_range", "min_excess_valuation", "terms_included"}


def test_verify_sample(capsys):
    code, out, _ = run(capsys, "verify", "jtpi", "--sample", "z=2", "--order", "20")
    assert code == 0 and out.count("PASS ") == 1
    code, _, err = run(capsys, "verify", "jtpi", "--sample", "nope")
    assert code == 2 and "UnknownSample" in err


def test_verify_group(capsys):
    code, out, _ = run(capsys, "verify", "--all", "--group", "parameter-free", "--order", "20")
    assert code == 0 and "0 failed, 0 errors" in out


def test_verify_fail_and_error_exit_codes(capsys, scratch_catalog):
    code, out, _ = run(capsys, "--catalog", scratch_catalog, "verify", "good", "--order", "20")
    assert code == 0
    code, out, _ = run(capsys, "--catalog", scratch_catalog, "verify", "bad", "--order", "20", "--json")
    rep = json.loads(out)["reports"][0]
    assert code == 1 and rep["verdict"] == "FAIL" and rep["first_mismatch"] == 3
    code, out, _ = run(capsys, "--catalog", scratch_catalog, "verify", "--all", "--order", "20", "--json")
    d = json.loads(out)
    assert code == 1 and not d["ok"] and d["summary"] == {"PASS": 1, "FAIL": 1, "ERROR": 1}
    broken = next(r for r in d["reports"] if r["id"] == "broken")
    assert broken["error"]["kind"] == "FormalDivergence"


def test_verify_unknown(capsys):
    code, _, err = run(capsys, "verify", "no-such-id")
    assert code == 2 and "UnknownRecord" in err
    code, _, err = run(capsys, "verify")
    assert code == 2


def test_partitions_count(capsys):
    code, out, _ = run(capsys, "partitions", "count", "--n", "9", "--family", "gap2")
    assert code == 0 and out.strip() == "gap2 n=9: 5"
    code, out, _ = run(capsys, "partitions", "count", "--n", "4", "--family", "mod5-1-4", "--table", "--json")
    assert json.loads(out)["counts"] == {"0": 1, "1": 1, "2": 1, "3": 1, "4": 2}
    code, _, _ = run(capsys, "partitions", "count", "--n", "4", "--family", "nope")
    assert code == 2


def test_partitions_comb5(capsys):
    code, out, _ = run(capsys, "partitions", "comb5", "--variant", "C", "--nmax", "30")
    lines = out.strip().splitlines()
    assert code == 0 and lines[-1].startswith("PASS  variant C")
    assert len([l for l in lines if l.rstrip().endswith("yes")]) == 31
    code, out, _ = run(capsys, "partitions", "comb5", "--nmax", "10", "--json")
    assert code == 0 and [v["variant"] for v in json.loads(out)["variants"]] == list("ABCD")


def test_partitions_classical_and_families(capsys):
    code, out, _ = run(capsys, "partitions", "classical", "--nmax", "20")
    assert code == 0 and out.count("PASS") == 2
    code, out, _ = run(capsys, "partitions", "families", "--json")
    assert code == 0 and len(json.loads(out)["families"]) == 26


def test_catalog_list_and_show(capsys):
    code, out, _ = run(capsys, "catalog", "list")
    assert code == 0 and "rr-a" in out and "bilgg-a" in out
    code, out, _ = run(capsys, "catalog", "show", "mrr-a(r=2,i=1)", "--json")
    rec = json.loads(out)["record"]
    assert code == 0 and rec["ints"] == {"i": 1, "r": 2}


def test_config_file(capsys, tmp_path, monkeypatch):
    cfg = tmp_path / "qbench.yaml"
    cfg.write_text("output_format: json\nmargin: 3\nexpand_order: 4\n")
    monkeypatch.setenv("QBENCH_CONFIG", str(cfg))
    code, out, _ = run(capsys, "expand", "1/(1-q)")
    d = json.loads(out)
    assert code == 0 and d["order"] == 4 and d["text"] == "1 + q + q^2 + q^3 + q^4"
    code, out, _ = run(capsys, "expand", "1/(1-q)", "--order", "2")
    assert json.loads(out)["text"] == "1 + q + q^2"


def test_bad_config(capsys, tmp_path):
    cfg = tmp_path / "bad.yaml"
    cfg.write_text("margin: 0\n")
    code, _, err = run(capsys, "--config", str(cfg), "expand", "q")
    assert code == 2 and "ConfigError" in err
    cfg.write_text("colour: blue\n")
    code, _, err = run(capsys, "--config", str(cfg), "expand", "q")
    assert code == 2 and "unknown config key" in err


def test_run_config():
    assert RunConfig().engine().margin == 5
    c = from_mapping({"defaultOrder": 120, "safetyMargin": 7, "hardCapFactor": "15/2"})
    assert (c.default_order, c.margin, c.hard_cap_factor) == (120, 7, 7.5)
    for bad in ({"default_order": 0}, {"margin": 0}, {"parallelism": 0}, {"output_format": "xml"}):
        with pytest.raises(ConfigError):
            from_mapping(bad)


def test_load_config_default(monkeypatch):
    monkeypatch.delenv("QBENCH_CONFIG", raising=False)
    assert load_config(None) == RunConfig()


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "qbench", "expand", "qp(q;q)_3"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.strip() == "1 - q - q^2 + q^4 + q^5 - q^6"
