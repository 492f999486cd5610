import json
import subprocess
import sys

import numpy as np
import pytest

from unirigid import core
from unirigid.cli import main
from unirigid.samples import hierarchy_samples, line_cycle
from unirigid.sdp import build_embedding_sdp, problem_to_dict, SdpProblem


def _write(path, data):
    path.write_text(json.dumps(data))
    return str(path)


def _framework_file(tmp_path, name, f):
    return _write(tmp_path / name, core.framework_to_dict(f))


def test_gen_examples(tmp_path):
    out = tmp_path / "c.json"
    assert main(["gen", "cycle", "4", "--dim", "1", "--seed", "1", "-o", str(out)]) == 0
    f = core.load_framework(out)
    assert f.e == 4 and f.d == 1
    assert main(["gen", "trilateration", "8", "-d", "2", "-o", str(out)]) == 0
    assert core.load_framework(out).e == 18
    assert main(["gen", "complete", "3", "-o", str(out)]) == 0
    assert core.load_framework(out).e == 3


def test_gen_is_reproducible(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(["gen", "trilateration", "7", "--seed", "5", "-o", str(a)])
    main(["gen", "trilateration", "7", "--seed", "5", "-o", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_certify_exit_codes(tmp_path):
    k4 = _framework_file(tmp_path, "k4.json", hierarchy_samples()["UniversallyRigid"])
    c4 = _framework_file(tmp_path, "c4.json", hierarchy_samples()["Flexible"])
    simplex = _framework_file(
        tmp_path, "tri.json", core.Framework(core.complete_graph(3), core.sample_pseudo_generic_configuration(3, 2))
    )
    assert main(["certify", "-i", k4, "-o", str(tmp_path / "k4.cert.json")]) == 0
    assert main(["certify", "-i", c4]) == 1
    assert main(["certify", "-i", simplex]) == 2


def test_round_trip_through_certificate(tmp_path):
    src = tmp_path / "t.json"
    main(["gen", "trilateration", "7", "--seed", "2", "-o", str(src)])
    cert = tmp_path / "t.cert.json"
    assert main(["certify", "-i", str(src), "-o", str(cert)]) == 0
    assert json.loads(cert.read_text())["verdict"] == "UniversallyRigid"
    report = tmp_path / "r.json"
    assert main(["verify", "-i", str(src), "-c", str(cert), "-o", str(report)]) == 0
    assert json.loads(report.read_text())["match"] is True


def test_certify_many_with_jobs(tmp_path):
    paths = []
    for seed in range(3):
        p = tmp_path / f"f{seed}.json"
        main(["gen", "trilateration", "6", "--seed", str(seed), "-o", str(p)])
        paths += ["-i", str(p)]
    outdir = tmp_path / "certs"
    assert main(["certify", *paths, "-o", str(outdir), "--jobs", "2"]) == 0
    assert sorted(x.name for x in outdir.iterdir()) == ["f0.cert.json", "f1.cert.json", "f2.cert.json"]


def test_certify_reports_identical(tmp_path):
    src = tmp_path / "t.json"
    main(["gen", "trilateration", "8", "--seed", "4", "-o", str(src)])
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(["certify", "-i", str(src), "-o", str(a)])
    main(["certify", "-i", str(src), "-o", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_classify(tmp_path, capsys):
    expected = {"Flexible", "GloballyRigid", "UniversallyRigid"}
    for name in expected:
        path = _framework_file(tmp_path, f"{name}.json", hierarchy_samples()[name])
        assert main(["classify", "-i", path]) == 0
        assert capsys.readouterr().out.split()[0] == name


def test_sdp_actions(tmp_path):
    trace = problem_to_dict(SdpProblem(np.eye(2), [np.diag([1.0, 0.0])], [1.0]))
    out = tmp_path / "sol.json"
    assert main(["sdp", "solve", "-i", _write(tmp_path / "p.json", trace), "-o", str(out)]) == 0
    assert json.loads(out.read_text())["primal_objective"] == pytest.approx(1.0, abs=1e-8)
    emb = problem_to_dict(build_embedding_sdp(line_cycle()))
    assert main(["sdp", "solve", "-i", _write(tmp_path / "e.json", emb), "--gap-tol", "1e-9"]) == 0
    bad = {"n": 1, "C": [[0.0]], "constraints": [{"A": [[1.0]], "b": -1.0}]}
    assert main(["sdp", "solve", "-i", _write(tmp_path / "bad.json", bad)]) == 1
    pair = {"X": [[1, 0], [0, 0]], "Omega": [[0, 0], [0, 1]]}
    assert main(["sdp", "check", "-i", _write(tmp_path / "pair.json", pair)]) == 0
    assert main(["sdp", "check", "-i", _write(tmp_path / "np.json", {"X": np.eye(2).tolist(), "Omega": np.eye(2).tolist()})]) == 1
    assert main(["sdp", "check", "-i", _write(tmp_path / "x.json", {"X": [[1]]})]) == 3
    src = _framework_file(tmp_path, "lc.json", line_cycle())
    out = tmp_path / "emb.json"
    assert main(["sdp", "embed", "-i", src, "-o", str(out)]) == 0
    assert len(json.loads(out.read_text())["constraints"]) == 4


def test_usage_errors(tmp_path):
    assert main(["certify", "-i", str(tmp_path / "missing.json")]) == 3
    (tmp_path / "junk.json").write_text("{not json")
    assert main(["certify", "-i", str(tmp_path / "junk.json")]) == 3
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 3


def test_env_tolerance(tmp_path, monkeypatch):
    monkeypatch.setenv("RIGIDITY_DEFAULT_TOL", "1e-7")
    path = _framework_file(tmp_path, "k4.json", hierarchy_samples()["UniversallyRigid"])
    out = tmp_path / "c.json"
    assert main(["certify", "-i", path, "-o", str(out)]) == 0
    assert json.loads(out.read_text())["tolerances"]["rank"] == 1e-7


def test_module_entry_point(tmp_path):
    out = tmp_path / "k.json"
    proc = subprocess.run(
        [sys.executable, "-m", "unirigid", "gen", "complete", "4", "-o", str(out)], capture_output=True, text=True
    )
    assert proc.returncode == 0, proc.stderr
    proc = subprocess.run([sys.executable, "-m", "unirigid", "certify", "-i", str(out)], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("UniversallyRigid")
