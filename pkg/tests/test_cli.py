import json

import pytest

from padic_shalika.cli import RunConfig, load_config, main
from padic_shalika.measure import MeasureTower


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def test_verify_passes_on_default_grid(capsys):
    code, doc = run(capsys, "verify", "--set", "p=5", "--set", "samples=10")
    assert code == 0 and doc["ok"] and doc["passed"] == doc["total"] > 50


def test_verify_n2(capsys):
    code, doc = run(capsys, "verify", "--set", "n=2", "--set", "samples=5")
    assert code == 0 and doc["total"] > 0


def test_perturbed_alpha_fails(capsys):
    code, doc = run(capsys, "verify", "--set", "p=5", "--set", "samples=5", "--set", "perturb_alpha=3")
    assert code == 1
    assert any(not r["ok"] for r in doc["rows"] if r["lemma"] == "computation")


def test_parallel_matches_serial(capsys):
    _, serial = run(capsys, "verify", "--set", "samples=5")
    _, parallel = run(capsys, "verify", "--set", "samples=5", "--jobs", "2")
    strip = lambda d: [(r["lemma"], r["ok"], r["got"]) for r in d["rows"]]
    assert strip(serial) == strip(parallel)


@pytest.mark.parametrize("argv", [
    ["verify", "--set", "p=4"],
    ["verify", "--set", 'alphas=["1/2","3"]'],
    ["verify", "--set", "bogus=1"],
    ["verify", "--set", "p=3", "--set", 'alphas=["1/2","2"]', "--set", "L=0"],
    ["stab", "--set", "n=2", "--set", 'gl2={"a_p":126,"k":4}', "--set", "alphas=null"],
])
def test_config_errors_exit_2(capsys, argv):
    code, _ = run(capsys, *argv)
    assert code == 2


def test_missing_provider_value_exits_2(capsys, tmp_path):
    prov = tmp_path / "prov.json"
    prov.write_text(json.dumps([{"character": {"m": 0}, "s": "0", "value": "1"}]))
    code, _ = run(capsys, "euler", "--set", f"provider={prov}", "--set", "m_max=1")
    assert code == 2


def test_euler_rows(capsys):
    code, doc = run(capsys, "euler", "--set", "p=5", "--set", "m_max=1", "--set", 's_values=["0","1"]')
    assert code == 0
    assert len(doc["rows"]) == 2 * (1 + 3)


def test_stab_gl2_and_sym_cube(capsys):
    code, doc = run(capsys, "stab", "--set", "p=5", "--set", 'gl2={"a_p":126,"k":4}')
    assert code == 0 and doc["count"] == 2 and doc["weakly_ordinary_count"] == 1
    assert doc["critical_points"] == [0, 1, 2]
    code, doc = run(capsys, "stab", "--set", "p=5", "--set", "n=2", "--set", 'sym_cube={"a_p":126,"k":4}')
    assert code == 0 and doc["count"] == 6
    flagged = [e["label"] for e in doc["stabilizations"] if e["weakly_ordinary"]]
    assert flagged == ["(1,2|3,4)"]
    assert doc["critical_points"] == [2, 3, 4]


def test_measure_output_is_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["measure", "--set", "p=5", "--set", "m_max=3", "--set", 'lp_points=["1","2"]']
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    doc = json.loads(a.read_text())
    assert doc["compatible"]
    tower = MeasureTower.from_json(doc["tower"])
    assert tower.depth == 3


def test_measure_refuses_unbounded(capsys):
    code, doc = run(capsys, "measure", "--set", "p=5", "--set", 'alphas=["1/5","5"]', "--set", "m_max=3",
                    "--set", 'lp_points=["1"]')
    assert code == 0
    assert not doc["diagnostic"]["bounded"]
    assert "refused" in doc["lp"][0]


def test_load_config_defaults():
    cfg = load_config(None, {})
    assert isinstance(cfg, RunConfig) and cfg.alphas == ["1/2", "2"]
