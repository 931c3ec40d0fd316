"""End-to-end command-line checks over the built-in corpus."""

import json
import subprocess
import sys


def run_cli(*args):
    return subprocess.run(
        [sys.executable, "-m", "torell.cli", *args],
        text=True,
        capture_output=True,
        check=False,
    )


def test_validate_json_payload():
    proc = run_cli("validate", "p2", "affine2")
    assert proc.returncode == 0
    payload = json.loads(proc.stdout)
    assert payload["command"] == "validate"
    results = {r["fan"]: r for r in payload["result"]}
    assert results["p2"]["proper"] is True
    assert results["affine2"]["proper"] is False


def test_compare_identity_pair_is_isomorphic_surface():
    proc = run_cli("compare", "p2", "p2")
    assert proc.returncode == 0
    payload = json.loads(proc.stdout)
    verdict = payload["result"]["verdict"]
    assert verdict["outcome"] == "ISOMORPHIC"
    assert verdict["rule"] == "surface-ray-line-sufficiency"


def test_compare_expectations_drive_exit_codes():
    assert run_cli("compare", "flop3_a", "flop3_b", "--expect", "noniso").returncode == 0
    assert run_cli("compare", "flop3_a", "flop3_b", "--expect", "iso").returncode == 1
    assert run_cli("compare", "ray_reversal_a", "ray_reversal_b",
                   "--expect", "iso").returncode == 0
    assert run_cli("compare", "ray_reversal_a", "ray_reversal_b",
                   "--expect", "noniso").returncode == 1


def test_reports_are_byte_identical_across_runs():
    first = run_cli("compare", "flop3_a", "flop3_b")
    second = run_cli("compare", "flop3_a", "flop3_b")
    assert first.stdout == second.stdout
    assert first.returncode == second.returncode == 0


def test_gkm_dot_output():
    proc = run_cli("gkm", "p2", "--format", "dot")
    assert proc.returncode == 0
    assert proc.stdout.startswith("graph moment_graph {")
    assert proc.stdout.count(" -- ") == 3


def test_cech_counts():
    proc = run_cli("cech", "p1")
    assert proc.returncode == 0
    payload = json.loads(proc.stdout)
    assert payload["result"]["cover_size"] == 3
    assert payload["result"]["counts_per_grade"] == {"0": 3, "1": 2}

    proc = run_cli("cech", "p2")
    payload = json.loads(proc.stdout)
    assert payload["result"]["cover_size"] == 7
    assert payload["result"]["support_size_histogram"]["3"] == 1


def test_flop_listing_and_green_apply():
    from torell.fan_io import corpus_bytes

    listing = run_cli("flop", "mu2-kernel", "--list")
    assert listing.returncode == 0
    flips = json.loads(listing.stdout)["result"]["flips"]
    assert len(flips) == 3
    assert any("green" in f["aliases"] for f in flips)

    proc = run_cli("flop", "mu2-kernel", "--apply", "green")
    assert proc.returncode == 0
    payload = json.loads(proc.stdout)
    result = payload["result"]
    assert result["comparison"]["outcome"] == "NOT_ISOMORPHIC"
    assert len(result["certificate"]["moves"]) == 1
    # the emitted fan is the corpus partner fan
    partner = json.loads(corpus_bytes("flop3_b"))
    assert result["fan"]["rays"] == partner["rays"]
    assert sorted(result["fan"]["cones"]) == sorted(partner["cones"])


def test_corpus_directory_overrides(tmp_path):
    import os

    from torell.fan_io import corpus_bytes

    (tmp_path / "local.fan.json").write_bytes(corpus_bytes("p2"))
    by_flag = run_cli("validate", "local", "--corpus", str(tmp_path))
    assert by_flag.returncode == 0
    assert json.loads(by_flag.stdout)["result"][0]["proper"] is True

    env = dict(os.environ, TORELL_CORPUS=str(tmp_path))
    by_env = subprocess.run(
        [sys.executable, "-m", "torell.cli", "validate", "local"],
        text=True, capture_output=True, env=env, check=False)
    assert by_env.returncode == 0
    assert json.loads(by_env.stdout)["result"][0]["proper"] is True
    # built-in names are hidden while the override is active
    assert subprocess.run(
        [sys.executable, "-m", "torell.cli", "validate", "p2"],
        text=True, capture_output=True, env=env, check=False).returncode == 2


def test_mckay_example_default():
    proc = run_cli("mckay-example")
    assert proc.returncode == 0
    payload = json.loads(proc.stdout)
    simplex = payload["result"]["simplex"]
    assert len(simplex["points"]) == 6
    assert payload["result"]["triangulation_count"] == 4


def test_mckay_example_antidiagonal():
    proc = run_cli("mckay-example", "--generators", "1/4,3/4")
    assert proc.returncode == 0
    payload = json.loads(proc.stdout)
    assert payload["result"]["simplex"]["normalized_volume"] == 4
    assert payload["result"]["triangulation_count"] == 1


def test_input_errors_exit_two():
    assert run_cli("validate", "no-such-corpus-fan").returncode == 2
    assert run_cli("validate", "/nonexistent/path.fan.json").returncode == 2
    assert run_cli("flop", "mu2-kernel", "--apply", "purple").returncode == 2


def test_text_format_is_human_readable():
    proc = run_cli("invariant", "p2", "--format", "text")
    assert proc.returncode == 0
    assert "rank=3" in proc.stdout


def test_invariant_ladder_payload():
    proc = run_cli("invariant", "p1", "--ladder")
    assert proc.returncode == 0
    ladder = json.loads(proc.stdout)["result"]["ladder"]["terms"]
    assert [len(term) for term in ladder] == [0, 2, 1]


def test_ray_list_file_input(tmp_path):
    path = tmp_path / "surface.txt"
    path.write_text("(1,0) (0,1) (-1,-1)\n")
    proc = run_cli("validate", str(path))
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"][0]["proper"] is True
