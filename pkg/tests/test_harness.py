import json
import subprocess
import sys

import pytest

from conftest import bundled_text
from torslab import reports
from torslab.reports import exit_code, refield, render_json
from torslab.algebra import load_algebra


def test_smalo_class_counts(a2, kxk, loop):
    for A, bound, want in ((a2, (2, 2), 5), (kxk, (1, 1), 4), (loop, (2,), 2)):
        rep = reports.suite_smalo(A, bound, "x")
        assert rep["counts"]["fail"] == 0
        assert rep["counts"]["window-limited"] == 0
        assert rep["checks"][0]["witness"]["classes"] == want
        assert exit_code(rep) == 0


def test_smalo_rejects_unstable_window(kronecker):
    # the torsion census grows between (2,2) and (3,3), so no certificate
    with pytest.raises(reports.ReportError):
        reports.suite_smalo(kronecker, (2, 2), "kronecker")


def test_semistable_a2_all_rigid_all_pass(a2):
    rep = reports.suite_semistable(a2, (2, 2), grid=(-4, 4), depth=6, algebra_id="a2")
    assert exit_code(rep) == 0
    summary = rep["checks"][-1]["witness"]
    assert summary["points"] == 81
    assert summary["full-pass"] == 81
    assert summary["graph-complete"] is True
    assert summary["ample"] is True
    for c in rep["checks"][:-1]:
        w = c["witness"]
        assert w["verdict"] == "rigid"
        assert all(w["predicates"].values())
        if w["rays"]:
            assert w["coherent"] is True
            tm = w["tbar-map"]
            # a skipped sweep is allowed, a completed one must realize level 1
            assert tm["level"] == 1 or not tm["searched"]


def test_semistable_kronecker_window_limited_points(kronecker):
    rep = reports.suite_semistable(
        kronecker, (3, 3), grid=(-2, 2), depth=10, algebra_id="kronecker"
    )
    assert exit_code(rep) == 2
    limited = {
        tuple(c["witness"]["theta"])
        for c in rep["checks"][:-1]
        if c["status"] == "window-limited"
    }
    assert limited == {(1, -1), (2, -2)}
    ray = [c for c in rep["checks"] if c["claim"] == "semistable[1,-1]"][0]
    w = ray["witness"]
    assert w["verdict"] == "unknown"
    assert w["strict-inclusion"] is True
    assert w["Tbar-witnesses"]["fac"] is None
    assert rep["counts"]["fail"] == 0


def test_numdis_small_algebras_pass(a2, kxk, loop):
    for A, bound in ((a2, (2, 2)), (kxk, (1, 1)), (loop, (2,))):
        rep = reports.suite_numdis(A, bound, "x")
        assert exit_code(rep) == 0


def test_numdis_hereditary_checks_present(a2, loop):
    rep = reports.suite_numdis(a2, (2, 2), "a2")
    assert any(c["claim"].startswith("hereditary") for c in rep["checks"])
    rep = reports.suite_numdis(loop, (2,), "loop")
    # the loop algebra has a relation, so no hereditary claims
    assert not any(c["claim"].startswith("hereditary") for c in rep["checks"])


def test_brickfinite_statuses(loop, kronecker):
    rep = reports.suite_brickfinite(loop, (2,), "loop")
    assert exit_code(rep) == 0
    eq = [c for c in rep["checks"] if c["claim"] == "brickfinite-equivalences"][0]
    assert eq["status"] == "pass"

    rep = reports.suite_brickfinite(kronecker, (2, 2), "kronecker")
    assert exit_code(rep) == 2
    assert rep["counts"]["fail"] == 0
    census = [c for c in rep["checks"] if c["claim"] == "brick-census"][0]
    assert census["status"] == "window-limited"
    assert census["witness"]["bricks-at-next-bound"] > census["witness"]["bricks"]
    eq = [c for c in rep["checks"] if c["claim"] == "brickfinite-equivalences"][0]
    assert eq["status"] == "window-limited"
    t = eq["witness"]
    assert t["ff"] <= t["bicompact"] <= t["compact"] <= t["widely-generated"]


def test_scan_semibrick_sizes():
    text = bundled_text("kronecker")
    rep = reports.suite_scan(text, grid=(-2, 2), fields=(2, 3), bound=(1, 1))
    assert exit_code(rep) == 0
    growth = {
        tuple(c["witness"]["theta"]): c["witness"]["sizes"]
        for c in rep["checks"]
        if c["claim"].startswith("scan-growth")
    }
    assert growth == {(1, -1): [3, 4], (2, -2): [3, 4]}
    for c in rep["checks"]:
        if c["claim"].startswith("scan-evidence"):
            w = c["witness"]
            assert w["orthogonal"] and w["bricks"] and w["generates"]


def test_refield_swaps_only_the_field_line():
    text = bundled_text("kronecker")
    swapped = refield(text, 7)
    assert "field p=7" in swapped
    assert swapped.count("arrow") == text.count("arrow")
    assert load_algebra(swapped).p == 7


def test_render_json_byte_identical(kxk):
    a = render_json(reports.suite_smalo(kxk, (1, 1), "kxk"))
    b = render_json(reports.suite_smalo(kxk, (1, 1), "kxk"))
    assert a == b
    assert a.endswith("\n")
    json.loads(a)


def test_exit_code_ranking():
    def rep(p, f, w):
        return {"counts": {"pass": p, "fail": f, "window-limited": w}}

    assert exit_code(rep(3, 0, 0)) == 0
    assert exit_code(rep(3, 0, 2)) == 2
    assert exit_code(rep(3, 1, 2)) == 1


def test_fan_json_shape(kronecker):
    fan = reports.fan_json(kronecker, 6, "kronecker")
    assert fan["complete"] is False
    assert len(fan["cones"]) == 13
    for cone in fan["cones"]:
        assert len(cone["rays"]) <= 2


def test_wallchamber_deterministic(a2, loop):
    x = reports.wallchamber_svg(a2, (2, 2), window=(-3, 3), depth=6)
    y = reports.wallchamber_svg(a2, (2, 2), window=(-3, 3), depth=6)
    assert x == y
    assert x.startswith("<svg ")
    with pytest.raises(reports.ReportError):
        reports.wallchamber_svg(loop, (2,))


def _cli(*argv):
    proc = subprocess.run(
        [sys.executable, "-m", "torslab.cli"] + list(argv),
        capture_output=True,
        text=True,
    )
    return proc


def test_cli_verify_smoke():
    proc = _cli("verify", "--suite", "smalo", "--algebra", "kxk", "--bound", "1,1")
    assert proc.returncode == 0, proc.stderr
    rep = json.loads(proc.stdout)
    assert rep["suite"] == "smalo"
    assert rep["algebra"] == "kxk"


def test_cli_negative_grid_and_out(tmp_path):
    out = tmp_path / "scan.json"
    proc = _cli(
        "scan", "--algebra", "kronecker", "--fields", "2,3",
        "--grid", "-1:1", "--bound", "1,1", "--out", str(out),
    )
    assert proc.returncode == 0, proc.stderr
    rep = json.loads(out.read_text())
    assert rep["suite"] == "scan"
    assert rep["fields"] == [2, 3]


def test_cli_unknown_algebra_errors():
    proc = _cli("fan", "--algebra", "no-such-algebra")
    assert proc.returncode != 0
    assert "no such algebra" in proc.stderr


def test_cli_timings_attached():
    proc = _cli(
        "verify", "--suite", "brickfinite", "--algebra", "loop",
        "--bound", "2", "--timings",
    )
    assert proc.returncode == 0, proc.stderr
    rep = json.loads(proc.stdout)
    assert "timings" in rep and rep["timings"]["seconds"] >= 0
    bare = _cli(
        "verify", "--suite", "brickfinite", "--algebra", "loop", "--bound", "2"
    )
    assert "timings" not in json.loads(bare.stdout)
