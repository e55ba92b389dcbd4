"""Enumeration harness, configuration parsing, and the command line surface."""

import json
import os
import subprocess
import sys

import pytest

try:
    import jsonschema
except ImportError:  # pragma: no cover
    jsonschema = None

from mpreg.bundles import parse_space
from mpreg.harness import (
    ConfigError,
    EnumerationConfig,
    compare_regularity_definitions,
    default_jobs,
    enumerate_bundles,
    enumerate_summands,
    parse_config_text,
    run_verification,
)


# ---------------------------------------------------------------------------
# configuration


def test_parse_config_full():
    cfg = parse_config_text(
        """
        # harness setup
        spaces = P1xP1, P2xP3
        degrees = -1..1
        cotangent = on
        cotangent_twists = 0..1
        max_summands = 3
        theorems = T1, T2
        jobs = 2
        """
    )
    assert cfg.spaces == ("P1xP1", "P2xP3")
    assert (cfg.degree_min, cfg.degree_max) == (-1, 1)
    assert cfg.cotangent and (cfg.cot_twist_min, cfg.cot_twist_max) == (0, 1)
    assert cfg.max_summands == 3
    assert cfg.theorems == ("T1", "T2")
    assert cfg.jobs == 2


@pytest.mark.parametrize(
    "text,fragment",
    [
        ("degrees = -1..1", "space"),
        ("spaces = P1xP1\ndegrees = 3..1", "range"),
        ("spaces = P1xP1\nmax_summands = 0", "max_summands"),
        ("spaces = P1xP1\nbogus = 1", "bogus"),
        ("spaces = Px1", "space"),
        ("spaces = P1xP1\ntheorems = T9", "T9"),
    ],
)
def test_parse_config_rejects(text, fragment):
    with pytest.raises(ConfigError) as err:
        parse_config_text(text)
    assert fragment.lower() in str(err.value).lower()


def test_default_jobs_env(monkeypatch):
    monkeypatch.delenv("MPREG_JOBS", raising=False)
    assert default_jobs(None) == 1
    assert default_jobs(4) == 4
    monkeypatch.setenv("MPREG_JOBS", "3")
    assert default_jobs(None) == 3
    monkeypatch.setenv("MPREG_JOBS", "zero")
    with pytest.raises(ConfigError):
        default_jobs(None)


# ---------------------------------------------------------------------------
# enumeration


def test_enumeration_counts_line_only():
    sp = parse_space("P1xP1")
    cfg = EnumerationConfig(spaces=("P1xP1",), degree_min=-1, degree_max=1,
                            max_summands=2)
    summands = list(enumerate_summands(sp, cfg))
    assert len(summands) == 9
    bundles = list(enumerate_bundles(sp, cfg))
    # 9 singles plus 45 unordered pairs with repetition
    assert len(bundles) == 54
    assert len(set(bundles)) == 54


def test_enumeration_includes_cotangent_atoms():
    sp = parse_space("P2xP2")
    cfg = EnumerationConfig(spaces=("P2xP2",), degree_min=0, degree_max=0,
                            cotangent=True, cot_twist_min=1, cot_twist_max=1,
                            max_summands=1)
    summands = set(enumerate_summands(sp, cfg))
    # per factor: O(0) and W1(1)
    assert len(summands) == 4


def test_run_verification_small_all_consistent():
    cfg = EnumerationConfig(spaces=("P1xP1",), degree_min=-1, degree_max=1,
                            max_summands=2, theorems=("T1", "T2"))
    rep = run_verification(cfg)
    assert rep.total_bundles == 54
    assert rep.ok
    for tid in ("T1", "T2"):
        st = rep.per_theorem[tid]
        assert st.applicable == 54 and st.inconsistent == 0
    assert rep.elapsed_seconds >= 0


def test_run_verification_parallel_matches_serial():
    cfg1 = EnumerationConfig(spaces=("P1xP2",), degree_min=-1, degree_max=1,
                             max_summands=2, theorems=("T1",))
    cfg2 = EnumerationConfig(spaces=("P1xP2",), degree_min=-1, degree_max=1,
                             max_summands=2, theorems=("T1",), jobs=2)
    r1, r2 = run_verification(cfg1), run_verification(cfg2)
    assert r1.total_bundles == r2.total_bundles
    assert r1.per_theorem["T1"].consistent == r2.per_theorem["T1"].consistent
    assert r1.findings == r2.findings


def test_comparison_requires_two_factors():
    from mpreg.bundles import ArityError, parse_bundle

    _, b = parse_bundle("P1xP1xP1", "O(0,0,0)")
    with pytest.raises(ArityError):
        compare_regularity_definitions([b])


def test_comparison_report_shape():
    cfg = EnumerationConfig(spaces=("P1xP1",), degree_min=-1, degree_max=1,
                            max_summands=1)
    bundles = list(enumerate_bundles(parse_space("P1xP1"), cfg))
    rep = compare_regularity_definitions(bundles, p_range=(-1, 1))
    assert rep["checked_bundles"] == len(bundles)
    assert rep["hw_implies_box_violations"] == []
    assert isinstance(rep["shift_literal_violations"], list)
    assert isinstance(rep["shift_swapped_violations"], list)


# ---------------------------------------------------------------------------
# CLI


def run_cli(*args, env=None):
    cmd = [sys.executable, "-m", "mpreg.cli", *args]
    full_env = dict(os.environ)
    if env:
        full_env.update(env)
    return subprocess.run(cmd, capture_output=True, text=True, env=full_env,
                          timeout=300)


COHOMOLOGY_SCHEMA = {
    "type": "object",
    "required": ["space", "bundle", "entries"],
    "properties": {
        "space": {"type": "array", "items": {"type": "integer", "minimum": 1}},
        "bundle": {"type": "string"},
        "entries": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["i", "t", "dim"],
                "properties": {
                    "i": {"type": "integer", "minimum": 0},
                    "t": {"type": "array", "items": {"type": "integer"}},
                    "dim": {"type": "string", "pattern": "^[0-9]+$"},
                },
            },
        },
    },
}

CHECK_SCHEMA = {
    "type": "object",
    "required": ["theorem", "condition", "form", "consistent", "witnesses",
                 "detected"],
    "properties": {
        "theorem": {"type": "string"},
        "condition": {"type": ["boolean", "null"]},
        "form": {"type": ["boolean", "null"]},
        "consistent": {"type": ["boolean", "null"]},
        "witnesses": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["i", "k", "t", "dim"],
                "properties": {"dim": {"type": "string", "pattern": "^[0-9]+$"}},
            },
        },
        "detected": {"type": "array", "items": {"type": "string"}},
    },
}


def test_cli_cohomology_json_schema():
    res = run_cli("cohomology", "--space", "P1xP2", "--bundle", "O(0,2)",
                  "--twist-range=-2..0", "--format", "json")
    assert res.returncode == 0, res.stderr
    payload = json.loads(res.stdout)
    if jsonschema is not None:
        jsonschema.validate(payload, COHOMOLOGY_SCHEMA)
    assert payload["space"] == [1, 2]
    assert {"i": 0, "t": [0, 0], "dim": "6"} in payload["entries"]


def test_cli_cohomology_csv():
    res = run_cli("cohomology", "--space", "P1xP1", "--bundle", "O(-2,-2)",
                  "--twist-range", "0..0", "--format", "csv")
    assert res.returncode == 0
    lines = res.stdout.strip().splitlines()
    assert lines[0] == "i,t_1,t_2,dim"
    assert "2,0,0,1" in lines[1:]


def test_cli_cohomology_per_factor_ranges():
    res = run_cli("cohomology", "--space", "P1xP2", "--bundle", "O(0,0)",
                  "--twist-range=0..1,-1..0", "--format", "json")
    assert res.returncode == 0
    payload = json.loads(res.stdout)
    ts = {tuple(e["t"]) for e in payload["entries"]}
    assert ts <= {(0, -1), (0, 0), (1, -1), (1, 0)}


def test_cli_bad_range_exits_2():
    res = run_cli("cohomology", "--space", "P1xP1", "--bundle", "O(0,0)",
                  "--twist-range", "5..1")
    assert res.returncode == 2
    assert "error" in res.stderr.lower()


def test_cli_parse_error_exits_2():
    res = run_cli("reg", "--space", "P1xP1", "--bundle", "O(0,0")
    assert res.returncode == 2


def test_cli_reg_hw_flag():
    res = run_cli("reg", "--space", "P1xP1", "--bundle", "O(2,-1)",
                  "--definition", "hw", "--format", "json")
    assert res.returncode == 0
    payload = json.loads(res.stdout)
    assert payload["definition"] == "hw"
    assert payload["value"] == 1


def test_cli_reg_hw_three_factors_exits_2():
    res = run_cli("reg", "--space", "P1xP1xP1", "--bundle", "O(0,0,0)",
                  "--definition", "hw")
    assert res.returncode == 2


def test_cli_acm():
    res = run_cli("acm", "--space", "P1xP2", "--bundle", "O(0,2)",
                  "--format", "json")
    assert res.returncode == 0
    payload = json.loads(res.stdout)
    assert payload["acm"] is False
    assert payload["witnesses"]


def test_cli_check_consistent_json():
    res = run_cli("check", "--space", "P1xP2", "--bundle", "O(1,1)",
                  "--theorem", "T1", "--format", "json")
    assert res.returncode == 0
    payload = json.loads(res.stdout)
    if jsonschema is not None:
        jsonschema.validate(payload, CHECK_SCHEMA)
    assert payload["theorem"] == "T1"
    assert payload["consistent"] is True


def test_cli_check_inconsistent_exits_3():
    # a frozen nonsplitting gap: condition holds, the form does not
    res = run_cli("check", "--space", "P3xP3", "--bundle", "O(0,2) + O(1,1)",
                  "--theorem", "P4", "--format", "json")
    assert res.returncode == 3
    payload = json.loads(res.stdout)
    assert payload["condition"] is True and payload["form"] is False


def test_cli_check_precondition_exits_4():
    res = run_cli("check", "--space", "P2xP3", "--bundle", "O(3,3)",
                  "--theorem", "T0", "--format", "json")
    assert res.returncode == 4
    payload = json.loads(res.stdout)
    assert payload["applicable"] is False
    assert "Reg" in payload["reason"]


def test_cli_classify():
    res = run_cli("classify", "--space", "P2xP3", "--bundle",
                  "O(0,0) + O(1,1)", "--format", "json")
    assert res.returncode == 0
    payload = json.loads(res.stdout)
    assert payload["rank"] == 2
    assert payload["reg"] == 0
    assert payload["forms"]["T1"] is True
    assert "Triv" in payload["detected"]


def test_cli_verify_paper_with_config(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "spaces = P1xP1\ndegrees = -1..1\nmax_summands = 2\ntheorems = T1, T2\n"
    )
    res = run_cli("verify-paper", "--config", str(cfg), "--format", "json")
    assert res.returncode == 0, res.stderr
    payload = json.loads(res.stdout)
    assert payload["ok"] is True
    assert payload["total_bundles"] == 54
    assert payload["per_theorem"]["T1"]["inconsistent"] == 0


def test_cli_verify_paper_inconsistent_exits_3(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "spaces = P3xP3\ndegrees = -2..2\nmax_summands = 2\ntheorems = P4\n"
    )
    res = run_cli("verify-paper", "--config", str(cfg), "--format", "json")
    assert res.returncode == 3
    payload = json.loads(res.stdout)
    assert payload["ok"] is False
    assert payload["per_theorem"]["P4"]["inconsistent"] == 11


def test_cli_verify_paper_bad_config_exits_2(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("spaces = P1xP1\ndegrees = 2..-2\n")
    res = run_cli("verify-paper", "--config", str(cfg))
    assert res.returncode == 2


def test_cli_jobs_env_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("spaces = P1xP1\ndegrees = -1..0\ntheorems = T1\n")
    res = run_cli("verify-paper", "--config", str(cfg), "--format", "json",
                  env={"MPREG_JOBS": "2"})
    assert res.returncode == 0
    assert json.loads(res.stdout)["ok"] is True
