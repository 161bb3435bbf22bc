"""Command line driver: outputs, exit codes, determinism."""

import json

import pytest

from chaintop.cli import (
    EXIT_INCONCLUSIVE,
    EXIT_INPUT,
    EXIT_OK,
    CliInputError,
    JobSpec,
    format_group,
    main,
    run_job,
)
from chaintop.simplicial import simplicial_to_json, sphere_model


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_homology_sphere_table(capsys):
    code, out, _ = run(capsys, "homology", "sphere", "2")
    assert code == EXIT_OK
    assert "H_0: Z" in out
    assert "H_1: 0" in out
    assert "H_2: Z" in out
    assert "ring: Z" in out


def test_homology_projective_plane_torsion(capsys):
    code, out, _ = run(capsys, "homology", "rp2", "--max-degree", "1")
    assert code == EXIT_OK
    assert "H_1: Z/2" in out


def test_homology_point(capsys):
    code, out, _ = run(capsys, "homology", "point")
    assert code == EXIT_OK
    assert out.strip().endswith("H_0: Z")


def test_cobar_sphere_all_degrees_infinite_cyclic(capsys):
    code, out, _ = run(capsys, "cobar", "sphere", "2")
    assert code == EXIT_OK
    for n in range(6):
        assert f"H_{n}: Z" in out


def test_cobar_ext_group_ring_rank(capsys):
    code, out, _ = run(capsys, "cobar-ext", "rp2", "--ring", "q")
    assert code == EXIT_OK
    assert "H_0 rank: 2" in out
    assert "inconclusive: False" in out


def test_cobar_ext_tight_window_is_inconclusive(capsys):
    code, out, _ = run(
        capsys, "cobar-ext", "rp2", "--ring", "q", "--word-cutoff", "1"
    )
    assert code == EXIT_INCONCLUSIVE
    assert "inconclusive: True" in out


def test_loop_matches_cobar_with_cross_check(capsys):
    code, loop_out, _ = run(capsys, "loop", "sphere", "2", "--check")
    assert code == EXIT_OK
    assert "cross-check: passed" in loop_out
    _, cobar_out, _ = run(capsys, "cobar", "sphere", "2")
    loop_rows = [l for l in loop_out.splitlines() if l.startswith("H_")]
    cobar_rows = [l for l in cobar_out.splitlines() if l.startswith("H_")]
    assert loop_rows == cobar_rows


def test_loop_with_edges_uses_word_cutoff(capsys):
    code, out, _ = run(
        capsys, "loop", "rp2", "--max-degree", "1", "--word-cutoff", "2", "--check"
    )
    assert code == EXIT_OK
    assert "max_length=2" in out
    assert "cross-check: passed" in out


def test_steenrod_detects_projective_plane(capsys):
    code, out, _ = run(capsys, "steenrod", "rp2")
    assert code == EXIT_OK
    assert "nonzero: True" in out
    assert "class 0: [1]" in out


def test_verify_serre_coalgebra(capsys):
    code, out, _ = run(capsys, "verify", "serre-coalgebra")
    assert code == EXIT_OK
    assert "result: pass" in out


def test_verify_join_signs_unique_convention(capsys):
    code, out, _ = run(capsys, "verify", "join-signs")
    assert code == EXIT_OK
    assert "conventions: (1,-1)" in out


def test_unknown_model_is_an_input_error(capsys):
    code, _, err = run(capsys, "homology", "nosuch")
    assert code == EXIT_INPUT
    assert "nosuch" in err


def test_bad_ring_is_an_input_error(capsys):
    code, _, _ = run(capsys, "homology", "sphere", "2", "--ring", "fp:6")
    assert code == EXIT_INPUT


def test_nonpositive_cutoff_is_an_input_error(capsys):
    code, _, _ = run(capsys, "cobar", "rp2", "--word-cutoff", "0")
    assert code == EXIT_INPUT


def test_missing_file_is_an_input_error(capsys):
    code, _, err = run(capsys, "homology", "no/such/file.json")
    assert code == EXIT_INPUT
    assert "file.json" in err


def test_bad_json_is_an_input_error(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{не json")
    code, _, _ = run(capsys, "homology", str(path))
    assert code == EXIT_INPUT
    path.write_text('{"cells": 3}')
    code, _, _ = run(capsys, "homology", str(path))
    assert code == EXIT_INPUT


def test_json_file_input_round_trips(tmp_path, capsys):
    path = tmp_path / "sphere2.json"
    path.write_text(json.dumps(simplicial_to_json(sphere_model(2))))
    code, out, _ = run(capsys, "homology", str(path))
    assert code == EXIT_OK
    assert "H_2: Z" in out


def test_json_format_embeds_ring_and_window(capsys):
    code, out, _ = run(
        capsys, "cobar", "sphere", "2", "--format", "json", "--max-degree", "3"
    )
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["ring"] == "Z"
    assert data["window"] == {"max_degree": 4, "max_length": None}
    assert data["homology"]["3"] == {"rank": 1, "torsion": []}


def test_output_is_deterministic(capsys):
    outputs = set()
    for _ in range(2):
        _, out, _ = run(capsys, "homology", "rp2", "--format", "json")
        outputs.add(out)
        _, out, _ = run(capsys, "steenrod", "rp2", "--format", "json")
        outputs.add(out)
    assert len(outputs) == 2


def test_unknown_suite_raises_at_job_level():
    with pytest.raises(CliInputError):
        run_job(JobSpec(command="verify", suite="nope"))


def test_format_group_rendering():
    assert format_group(0, []) == "0"
    assert format_group(1, []) == "Z"
    assert format_group(2, [2, 4]) == "Z^2 + Z/2 + Z/4"
    assert format_group(3, [], "F2") == "F2^3"


def test_homology_field_labels(capsys):
    code, out, _ = run(capsys, "homology", "rp2", "--ring", "fp:2")
    assert code == EXIT_OK
    assert "H_0: F2" in out
    assert "H_1: F2" in out
    assert "H_2: F2" in out
