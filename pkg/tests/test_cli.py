"""CLI behavior: verbs, formats, exit codes, remote mode."""

import json

import httpx
import pytest

from ultrafractal.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# --- classify -----------------------------------------------------------------

def test_classify_limit_space_is_an_answer_not_an_error(capsys):
    code, out, _ = run_cli(capsys, "classify", "w^w")
    assert code == 0
    assert out.startswith("NotTopologicalFractal (height w, limit)")


def test_classify_json(capsys):
    code, out, _ = run_cli(capsys, "classify", "w^2*3+w*2+5", "--format", "json")
    assert code == 0
    body = json.loads(out)
    assert body["verdict"] == "BanachUltrafractal"
    assert body["multiplicity"] == "3"


def test_classify_malformed_literal_is_usage(capsys):
    code, _, err = run_cli(capsys, "classify", "w+w")
    assert code == 2
    assert "usage error" in err


# --- tree ----------------------------------------------------------------------

def test_tree_rejects_root_height_minus_one(capsys):
    code, _, err = run_cli(capsys, "tree", "--height", "-1")
    assert code == 2
    assert "usage error" in err


def test_tree_text_and_dot(capsys):
    code, out, _ = run_cli(capsys, "tree", "--height", "1", "--depth", "2",
                           "--breadth", "3")
    assert code == 0
    assert "root height 1" in out
    code, out, _ = run_cli(capsys, "tree", "--height", "1", "--depth", "2",
                           "--breadth", "3", "--format", "dot")
    assert code == 0
    assert out.startswith("digraph height_tree {")
    assert "h=-1" in out and "|x|=1/2" in out


def test_tree_json_schema_shape(capsys):
    code, out, _ = run_cli(capsys, "tree", "--height", "w", "--depth", "2",
                           "--breadth", "3", "--format", "json")
    assert code == 0
    body = json.loads(out)
    assert body["root_height"] == "w"
    assert {"path", "height", "norm"} <= set(body["nodes"][0])


# --- ifs ------------------------------------------------------------------------

def test_ifs_distances_halve_each_step(capsys):
    code, out, _ = run_cli(capsys, "ifs", "--height", "w+1", "--lambda", "1/2",
                           "--iterate", "6")
    assert code == 0
    assert "1/64" in out
    assert "contraction verified: yes" in out


def test_ifs_limit_height_exits_one(capsys):
    code, _, err = run_cli(capsys, "ifs", "--height", "w^w")
    assert code == 1
    assert "refused" in err


def test_ifs_cap_exceeded_exits_three(capsys):
    code, _, err = run_cli(capsys, "ifs", "--height", "2", "--iterate", "6",
                           "--level-cap", "2")
    assert code == 3
    assert "cap exceeded" in err


def test_ifs_dot_export(capsys):
    code, out, _ = run_cli(capsys, "ifs", "--height", "1", "--iterate", "3",
                           "--format", "dot")
    assert code == 0
    assert out.startswith("digraph level_set {")
    assert "via g" in out


def test_ifs_glued_space_text(capsys):
    code, out, _ = run_cli(capsys, "ifs", "--space", "w*2", "--iterate", "4")
    assert code == 0
    assert "glued" in out and "p1.g" in out


# --- verify -----------------------------------------------------------------------

def test_verify_all_pass_exit_zero(capsys):
    code, out, _ = run_cli(capsys, "verify", "--height", "2", "--suite", "all",
                           "--levels", "5")
    assert code == 0
    assert "all suites passed" in out


def test_verify_failure_exits_one(capsys):
    # A verify run on a limit height requests impossible suites.
    code, _, err = run_cli(capsys, "verify", "--height", "w", "--suite", "norm")
    assert code == 1
    assert "refused" in err


def test_verify_suite_selection(capsys):
    code, out, _ = run_cli(capsys, "verify", "--height", "w",
                           "--suite", "height-tree", "--depth", "3")
    assert code == 0
    assert "height-tree" in out


def test_unknown_suite_is_usage(capsys):
    code, _, err = run_cli(capsys, "verify", "--height", "2", "--suite", "bogus")
    assert code == 2


def test_unknown_verb_is_usage(capsys):
    assert run_cli(capsys, "frobnicate")[0] == 2


def test_missing_target_is_usage(capsys):
    code, _, err = run_cli(capsys, "verify")
    assert code == 2


# --- iterate ---------------------------------------------------------------------------

def test_iterate_reports_fixed_points(capsys):
    code, out, _ = run_cli(capsys, "iterate", "--height", "1", "--steps", "10")
    assert code == 0
    assert "Fix(f) = branch[]" in out
    assert "Fix(g) = branch[1]" in out


def test_iterate_custom_seeds(capsys):
    code, out, _ = run_cli(capsys, "iterate", "--height", "1", "--seed", "4",
                           "--seed", "central", "--format", "json")
    assert code == 0
    body = json.loads(out)
    assert {tuple(orbit["seed"]) for orbit in body["orbits"]} == {(4,), ()}


# --- determinism -----------------------------------------------------------------------

def test_identical_invocations_are_byte_identical(capsys):
    first = run_cli(capsys, "verify", "--height", "2", "--levels", "5",
                    "--format", "json")
    second = run_cli(capsys, "verify", "--height", "2", "--levels", "5",
                     "--format", "json")
    assert first == second


def test_reports_are_stable_across_hash_seeds():
    # Byte-identical output must not depend on set iteration order.
    import os
    import subprocess
    import sys

    outputs = []
    for seed in ("0", "4242"):
        env = dict(os.environ, PYTHONHASHSEED=seed)
        result = subprocess.run(
            [sys.executable, "-m", "ultrafractal", "verify", "--height", "2",
             "--levels", "5", "--format", "json"],
            capture_output=True, env=env, check=True,
        )
        outputs.append(result.stdout)
    assert outputs[0] == outputs[1]


# --- remote mode -------------------------------------------------------------------------

@pytest.fixture()
def asgi_client(monkeypatch):
    from fastapi.testclient import TestClient

    from ultrafractal.service.app import app

    def factory(**kwargs):
        return TestClient(app, raise_server_exceptions=False)

    monkeypatch.setattr(httpx, "Client", factory)


def test_remote_classify_matches_local(capsys, asgi_client):
    local = run_cli(capsys, "classify", "w^2", "--format", "json")
    remote = run_cli(capsys, "classify", "w^2", "--format", "json",
                     "--server", "http://service")
    assert local[0] == remote[0] == 0
    assert json.loads(local[1]) == json.loads(remote[1])


def test_remote_errors_map_to_exit_codes(capsys, asgi_client):
    code, _, err = run_cli(capsys, "ifs", "--height", "w^w",
                           "--server", "http://service")
    assert code == 1
    code, _, err = run_cli(capsys, "classify", "w+w", "--server", "http://service")
    assert code == 2
    code, _, err = run_cli(capsys, "ifs", "--height", "2", "--iterate", "6",
                           "--level-cap", "2", "--server", "http://service")
    assert code == 3
