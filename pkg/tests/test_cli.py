import json

import mpmath
import pytest

from cmspaces import cli
from cmspaces.cache import ConstantCache, canonical_key


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_eval_hurwitz_half(capsys, isolated_cache):
    code, out, _ = run(capsys, "eval", "hurwitz", "--k", "2", "--x", "1/2", "--prec", "128")
    assert code == 0
    data = json.loads(out)
    assert data["value"]["error_log2"] <= -127
    assert data["value"]["decimal"].startswith("4.9348022")
    assert abs(mpmath.mpf(data["value"]["decimal"]) - mpmath.pi**2 / 2) < mpmath.mpf(2) ** -120


def test_eval_gauss_exact(capsys, isolated_cache):
    code, out, _ = run(capsys, "eval", "gauss", "--disc", "-4")
    assert code == 0
    data = json.loads(out)
    assert data["exact"] == "2*i"
    assert data["value"]["imag"].startswith("2")


def test_eval_mzv_matches_stuffle(capsys, isolated_cache):
    code, out, _ = run(capsys, "eval", "mzv", "--s", "3,3", "--prec", "200")
    assert code == 0
    value = mpmath.mpf(json.loads(out)["value"]["decimal"])
    ref = (mpmath.zeta(3) ** 2 - mpmath.zeta(6)) / 2
    assert abs(value - ref) < mpmath.mpf(2) ** -190


@pytest.mark.parametrize("argv", [
    ["eval", "hurwitz", "--k", "2", "--x", "0.5"],
    ["eval", "hurwitz", "--k", "2", "--x", "3/2"],
    ["eval", "hurwitz", "--k", "1", "--x", "1/2"],
    ["eval", "hurwitz", "--k", "2"],
    ["eval", "gauss", "--disc", "12x"],
    ["eval", "nonsense"],
    ["verify", "--identity", "unknown"],
    ["verify", "--identity", "hecke", "--k", "4", "--q", "5", "--a", "1"],
    ["dimension", "--space", "strong-cm", "--k", "3", "--q", "5", "--out", "csv"],
])
def test_invalid_parameters_exit_2(capsys, isolated_cache, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err


def test_verify_hecke_reports_exact_value(capsys):
    code, out, _ = run(capsys, "verify", "--identity", "hecke", "--k", "3", "--q", "4", "--a", "1")
    assert code == 0
    data = json.loads(out)
    assert data["verdict"] == "pass" and data["details"]["exact_value"] == "1/4*i"


@pytest.mark.parametrize("argv", [
    ["--identity", "dedekind", "--q", "5", "--k", "2", "--prec", "320"],
    ["--identity", "euler-factor", "--k", "2", "--q", "2", "--prec", "128"],
    ["--identity", "gauss", "--disc", "-7"],
    ["--identity", "stuffle", "--d", "1"],
    ["--identity", "stuffle", "--s1", "3", "--s2", "2"],
    ["--identity", "bernoulli-l-link", "--disc", "-4", "--d", "1"],
    ["--identity", "reflection", "--k", "3", "--q", "7", "--a", "3"],
    ["--identity", "dedekind-generic", "--orders", "2,3", "--values", "1,2,0,5,1/3,1"],
    ["--identity", "unit-decomposition", "--values", "1,0,0,0,-2,3", "--k", "3"],
])
def test_verify_identities_pass(capsys, argv):
    code, out, _ = run(capsys, "verify", *argv)
    assert code == 0
    assert json.loads(out)["verdict"] == "pass"


def test_verify_unit_decomposition_from_file(capsys, tmp_path):
    path = tmp_path / "f.json"
    path.write_text(json.dumps({"period": 4, "values": ["1", "0", "-1", "0"]}))
    code, out, _ = run(capsys, "verify", "--identity", "unit-decomposition", "--function", str(path), "--k", "2")
    assert code == 0


def test_verify_csv_and_plain(capsys):
    code, out, _ = run(capsys, "verify", "--identity", "gauss", "--disc", "-3", "--out", "csv")
    assert code == 0 and out.splitlines()[0].startswith("name,")
    code, out, _ = run(capsys, "verify", "--identity", "gauss", "--disc", "-3", "--out", "plain")
    assert out.strip() == "gauss: pass (residual_log2 exact-zero)"


def test_dimension_strong_cm(capsys):
    code, out, _ = run(capsys, "dimension", "--space", "strong-cm", "--k", "3", "--q", "4",
                       "--height", "1e6", "--prec", "300")
    assert code == 0
    assert json.loads(out)["evidence_dimension"] == 3


def test_dimension_okada_and_zagier(capsys):
    code, out, _ = run(capsys, "dimension", "--space", "okada", "--k", "1", "--q", "5",
                       "--height", "1e8", "--prec", "300")
    assert code == 0 and json.loads(out)["search"]["outcome"] == "no_relation_certificate"
    code, out, _ = run(capsys, "dimension", "--space", "zagier", "--weight", "6",
                       "--height", "1e6", "--prec", "300")
    assert code == 0 and json.loads(out)["pair_relation_free"]


def test_dimension_precision_refusal_exit_3(capsys):
    code, _, err = run(capsys, "dimension", "--space", "strong-cm", "--k", "3", "--q", "12",
                       "--height", "1e6", "--prec", "100")
    assert code == 3
    assert "required precision" in err


def test_cache_outputs_identical(capsys, isolated_cache):
    argv = ["eval", "lvalue", "--k", "3", "--disc", "-7", "--prec", "160"]
    _, uncached, _ = run(capsys, *argv, "--no-cache")
    assert not isolated_cache.exists()
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert uncached == first == second
    assert len(isolated_cache.read_text().splitlines()) == 1


def test_cache_keys_are_canonical(isolated_cache):
    a = canonical_key("eval:hurwitz", {"x": "1/2", "k": 2}, 128)
    b = canonical_key("eval:hurwitz", {"k": 2, "x": "1/2"}, 128)
    assert a == b
    assert canonical_key("eval:hurwitz", {"k": 2, "x": "2/4"}, 128) != a


def test_cache_rejects_insufficient_error(isolated_cache):
    cache = ConstantCache()
    cache.put("k", {"value": 1}, error_log2=-10)
    assert cache.get("k", max_error_log2=-100) is None
    assert cache.get("k", max_error_log2=-5) == {"value": 1}


def test_cache_ignores_torn_lines(isolated_cache):
    cache = ConstantCache()
    cache.put("k", {"value": 1}, error_log2=-10)
    with open(isolated_cache, "a") as fh:
        fh.write('{"key": "k", "res')
    assert cache.get("k") == {"value": 1}


def test_equivalent_rationals_share_cache_entry(capsys, isolated_cache):
    run(capsys, "eval", "hurwitz", "--k", "3", "--x", "2/4", "--prec", "96")
    run(capsys, "eval", "hurwitz", "--k", "3", "--x", "1/2", "--prec", "96")
    assert len(isolated_cache.read_text().splitlines()) == 1


def _write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj) if not isinstance(obj, str) else obj)
    return p


def test_sweep_all_pass(capsys, tmp_path, isolated_cache):
    config = _write(tmp_path, "c.json", [
        {"command": "verify", "params": {"identity": "euler-factor", "prec": 128},
         "ranges": {"k": [2, 3], "q": {"from": 2, "to": 6}}},
        {"command": "dimension", "params": {"space": "strong-cm", "k": 3, "height": "1e3"},
         "ranges": {"q": [3, 4]}},
    ])
    out = tmp_path / "out" / "results.json"
    code, _, _ = run(capsys, "sweep", "--config", str(config), "--jobs", "2", "--out", str(out))
    assert code == 0
    results = json.loads(out.read_text())
    assert len(results) == 12
    assert all(r["status"] == "pass" for r in results)
    assert not [p for p in out.parent.iterdir() if p.name.endswith(".tmp")]


def test_sweep_partial_failure_exit_4(capsys, tmp_path, isolated_cache):
    config = _write(tmp_path, "c.json", [
        {"command": "verify", "params": {"identity": "hecke", "q": 5, "a": 1}, "ranges": {"k": [3, 4]}},
    ])
    out = tmp_path / "r.json"
    code, _, err = run(capsys, "sweep", "--config", str(config), "--out", str(out))
    assert code == 4
    statuses = [r["status"] for r in json.loads(out.read_text())]
    assert statuses == ["pass", "error"]


@pytest.mark.parametrize("content", ['{"command": "verify"}', "not json", '[{"command": "launch"}]',
                                     '[{"command": "verify", "ranges": {"k": 5}}]'])
def test_sweep_malformed_config_exit_2(capsys, tmp_path, content):
    config = _write(tmp_path, "c.json", content)
    code, _, err = run(capsys, "sweep", "--config", str(config))
    assert code == 2 and "malformed" in err


def test_atomic_write_leaves_old_file_on_failure(tmp_path, monkeypatch):
    target = tmp_path / "r.json"
    target.write_text("old")

    def boom(*a, **k):
        raise KeyboardInterrupt

    monkeypatch.setattr(cli.os, "replace", boom)
    with pytest.raises(KeyboardInterrupt):
        cli.write_atomic(target, "new contents")
    assert target.read_text() == "old"
    assert [p.name for p in tmp_path.iterdir()] == ["r.json"]
