"""End-to-end runs of the cyc command: exit codes, answer lines, JSON shape."""

import json
import subprocess
import sys

import pytest

from cyclab.cli import main


def run(capsys, *argv):
    report = main(list(argv))
    out = capsys.readouterr().out
    return report, out


def last_line(out: str) -> str:
    return out.strip().splitlines()[-1]


@pytest.fixture
def petersen_file(tmp_path):
    path = tmp_path / "petersen.cyc"
    main(["gen", "petersen", "-o", str(path)])
    return str(path)


@pytest.fixture
def rings_files(tmp_path):
    g = tmp_path / "rr.cyc"
    emb = tmp_path / "rr.rot"
    cert = tmp_path / "rr.json"
    rep = main(["gen", "ringOfRings", "3", "4", "-o", str(g),
                "--emb-out", str(emb), "--cert-out", str(cert)])
    assert rep.exit_code == 0
    return str(g), str(emb), str(cert)


def test_oracle_cyclability_petersen(capsys, petersen_file):
    rep, out = run(capsys, "oracle", "--graph", petersen_file, "--cyclability")
    assert rep.exit_code == 0
    assert rep.answer == 9
    assert last_line(out) == "9"


def test_dp_yes_on_cycle(capsys, tmp_path):
    path = tmp_path / "c5.cyc"
    main(["gen", "cycle", "5", "-o", str(path)])
    rep, out = run(capsys, "dp", "--graph", str(path), "-k", "3")
    assert rep.exit_code == 0 and rep.answer is True
    assert last_line(out) == "YES"


def test_oracle_witness_on_star(capsys, tmp_path):
    path = tmp_path / "star.cyc"
    main(["gen", "star", "3", "-o", str(path)])
    rep, out = run(capsys, "oracle", "--graph", str(path), "-k", "1", "--witness")
    assert rep.exit_code == 0 and rep.answer is False
    assert "failing subset: 0" in out
    assert last_line(out) == "NO"


def test_tw_emit_and_verify(capsys, tmp_path):
    g = tmp_path / "grid.cyc"
    td = tmp_path / "grid.td"
    main(["gen", "grid", "3", "3", "-o", str(g)])
    rep, out = run(capsys, "tw", "--graph", str(g), "--emit-td", str(td))
    assert rep.exit_code == 0 and rep.answer == 3
    assert last_line(out) == "3"
    rep, out = run(capsys, "verify", "td", "--graph", str(g), "--td", str(td))
    assert rep.exit_code == 0 and rep.answer is True


def test_verify_certificates(capsys, rings_files):
    g, emb, cert = rings_files
    for kind in ("concentric", "annulus"):
        rep, out = run(capsys, "verify", kind, "--graph", g,
                       "--emb", emb, "--cert", cert)
        assert rep.exit_code == 0 and rep.answer is True, (kind, out)


def test_verify_rejects_malformed_certificate(capsys, rings_files, tmp_path):
    g, emb, _ = rings_files
    bad = tmp_path / "bad.json"
    bad.write_text('{"cycles": []}')
    rep, _ = run(capsys, "verify", "concentric", "--graph", g,
                 "--emb", emb, "--cert", str(bad))
    assert rep.exit_code == 4


def test_malformed_graph_is_exit_4(capsys, tmp_path):
    path = tmp_path / "junk.cyc"
    path.write_text("p cyc 2 1\ne 0 5\n")
    rep, _ = run(capsys, "oracle", "--graph", str(path), "-k", "1")
    assert rep.exit_code == 4


def test_pipeline_on_rings(capsys, rings_files):
    g, emb, cert = rings_files
    rep, out = run(capsys, "pipeline", "--graph", g, "--emb", emb, "-k", "1",
                   "--cert", cert, "--trace",
                   "--constants", "width_cap=2,y=2,rings_needed=2,b=2,w_lo=1,w_hi=2,density=1")
    assert rep.exit_code == 0 and rep.answer is True
    assert "step=" in out
    assert last_line(out) == "YES"


def test_pipeline_rejects_unknown_constant(capsys, rings_files):
    g, emb, _ = rings_files
    rep, _ = run(capsys, "pipeline", "--graph", g, "--emb", emb, "-k", "1",
                 "--constants", "bogus=3")
    assert rep.exit_code == 4


def test_usage_errors_are_exit_2(capsys):
    rep, _ = run(capsys, "oracle", "-k", "1")
    assert rep.exit_code == 2
    assert main(["nonsense"]).exit_code == 2
    assert main([]).exit_code == 2


def test_oversize_graph_is_exit_3(capsys, tmp_path):
    path = tmp_path / "big.cyc"
    main(["gen", "grid", "9", "9", "-o", str(path)])
    rep, _ = run(capsys, "oracle", "--graph", str(path), "--cyclability")
    assert rep.exit_code == 3


def test_gen_clique_reduction_roles(capsys, tmp_path):
    host = tmp_path / "host.cyc"
    host.write_text("p cyc 4 6\ne 0 1\ne 0 2\ne 0 3\ne 1 2\ne 1 3\ne 2 3\n")
    out_g = tmp_path / "red.cyc"
    roles = tmp_path / "roles.json"
    rep, out = run(capsys, "gen", "cliqueReduction", "3", "--graph", str(host),
                   "-o", str(out_g), "--roles", str(roles))
    assert rep.exit_code == 0
    parsed = json.loads(roles.read_text())
    assert any(role[0] == "hub" for role in parsed.values())


def test_suite_single_criterion(capsys):
    rep, out = run(capsys, "suite", "--only", "2")
    assert rep.exit_code == 0 and rep.answer is True
    assert "[PASS] criterion-2" in out
    assert last_line(out) == "YES"


def test_json_output_is_deterministic(tmp_path):
    g = tmp_path / "c6.cyc"
    main(["gen", "cycle", "6", "-o", str(g)])
    cmd = [sys.executable, "-m", "cyclab.cli", "dp", "--graph", str(g),
           "-k", "2", "--json"]
    first = subprocess.run(cmd, capture_output=True, check=True)
    second = subprocess.run(cmd, capture_output=True, check=True)
    assert first.stdout == second.stdout
    doc = json.loads(first.stdout)
    assert doc["schema"] == 1
    assert doc["answer"] is True
    assert doc["exit_code"] == 0
    assert {"width", "nodes", "entries_max"} <= set(doc)
