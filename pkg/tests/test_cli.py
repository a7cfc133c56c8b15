import json
import subprocess
import sys

import numpy as np
import pytest

CLI = [sys.executable, "-m", "numrad.cli"]


def run(args, cwd=None):
    return subprocess.run(CLI + args, capture_output=True, text=True, cwd=cwd)


@pytest.fixture()
def files(tmp_path):
    def dump(name, obj):
        path = tmp_path / name
        path.write_text(json.dumps(obj))
        return str(path)

    P = np.eye(3) - np.ones((3, 3)) / 3.0
    Pc = [[[float(P[i, j]), 0.0] for j in range(3)] for i in range(3)]
    return {
        "dir": tmp_path,
        "linf3c": dump("linf3c.json", {"dim": 3, "field": "complex", "norm": {"kind": "max"}}),
        "linf3": dump("linf3.json", {"dim": 3, "field": "real", "norm": {"kind": "max"}}),
        "l2c": dump("l2c.json", {"dim": 2, "field": "complex", "norm": {"kind": "euclid"}}),
        "P": dump("P.json", Pc),
        "zero": dump("zero.json", np.zeros((3, 3)).tolist()),
        "nil": dump("nil.json", [[[0.0, 0.0], [1.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]]),
        "sub": dump("sub.json", {"kernel_of": [1.0, 1.0, 0.0]}),
        "eye": dump("eye.json", np.eye(3).tolist()),
        "fam": dump(
            "fam.json",
            [np.outer([1.0, -1.0, 0.0], [1.0, 1.0, 1.0]).tolist(), np.outer([0.0, 1.0, -1.0], [1.0, 1.0, 1.0]).tolist()],
        ),
    }


def test_radius_paper_value(files):
    out = run(["radius", "--space", files["linf3c"], "--op", files["P"]])
    assert out.returncode == 0
    data = json.loads(out.stdout)
    assert abs(data["value"] - 4.0 / 3.0) <= 1e-12
    assert len(data["active"]) == 3


def test_radius_zero(files):
    out = run(["radius", "--space", files["linf3"], "--op", files["zero"]])
    assert out.returncode == 0
    assert json.loads(out.stdout)["value"] == 0.0


def test_csv_format(files):
    out = run(["radius", "--space", files["linf3"], "--op", files["zero"], "--format", "csv"])
    assert out.returncode == 0
    rows = dict(line.split(",", 1) for line in out.stdout.strip().splitlines())
    assert float(rows["value"]) == 0.0


def test_missing_file_exit_1(files):
    out = run(["radius", "--space", "nope.json", "--op", files["P"]])
    assert out.returncode == 1


def test_malformed_json_exit_1(files, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    out = run(["radius", "--space", str(bad), "--op", files["P"]])
    assert out.returncode == 1


def test_capability_exit_2(files, tmp_path):
    l2r = tmp_path / "l2r.json"
    l2r.write_text(json.dumps({"dim": 2, "field": "real", "norm": {"kind": "euclid"}}))
    T = tmp_path / "T2.json"
    T.write_text(json.dumps([[1.0, 0.0], [0.0, 1.0]]))
    # q pairs on polytope norms are unsupported -> capability; euclid approx
    # needs enumerable pairs, also a capability error
    out = run(["approx", "--space", str(l2r), "--target", str(T), "--family", str(T).replace("T2", "famX")])
    assert out.returncode == 1  # family file missing -> parse error first
    fam = tmp_path / "fam1.json"
    fam.write_text(json.dumps([[[1.0, 0.0], [0.0, 1.0]]]))
    out = run(["approx", "--space", str(l2r), "--target", str(T), "--family", str(fam)])
    assert out.returncode == 2


def test_certify_optimal_exit_0(files):
    out = run(
        [
            "certify",
            "--space",
            files["linf3c"],
            "--target",
            files["P"],
            "--minimizer",
            files["zero"],
            "--family",
            files["fam"],
        ]
    )
    assert out.returncode == 0
    data = json.loads(out.stdout)
    assert data["verdict"] == "optimal"
    assert data["k"] == 3


def test_certify_not_optimal_exit_3(files, tmp_path):
    # a real problem with an exact pair set so the verdict is decisive
    T = tmp_path / "T.json"
    T.write_text(json.dumps([[2.0, 1.0, 0.0], [0.0, -2.0, 0.0], [0.0, 0.0, 1.0]]))
    L = tmp_path / "L.json"
    L.write_text(json.dumps((1.5 * np.outer([1.0, -1.0, 0.0], [1.0, 1.0, 1.0])).tolist()))
    out = run(
        ["certify", "--space", files["linf3"], "--target", str(T), "--minimizer", str(L), "--family", files["fam"]]
    )
    assert out.returncode == 3
    assert json.loads(out.stdout)["verdict"] == "not_optimal"


def test_suba_zero_on_paper_instance(files):
    out = run(
        ["suba", "--space", files["linf3c"], "--target", files["P"], "--minimizer", files["zero"], "--family", files["fam"]]
    )
    assert out.returncode == 0
    data = json.loads(out.stdout)
    assert data["r"] == 0.0
    assert data["witness"] is not None


def test_minproj_value(files):
    out = run(["minproj", "--space", files["linf3"], "--subspace", files["sub"]])
    assert out.returncode == 0
    data = json.loads(out.stdout)
    assert abs(data["lambda_w"] - 1.0) <= 1e-9
    assert data["unique"] == "non_unique"


def test_minext_identity(files):
    eye2 = files["dir"] / "eye2.json"
    eye2.write_text(json.dumps(np.eye(2).tolist()))
    out = run(["minext", "--space", files["linf3"], "--subspace", files["sub"], "--op", str(eye2)])
    assert out.returncode == 0
    assert abs(json.loads(out.stdout)["lambda_w"] - 1.0) <= 1e-9


def test_index_command(files):
    out = run(["index", "--space", files["linf3"], "--trials", "50", "--seed", "0"])
    assert out.returncode == 0
    assert 0.0 <= json.loads(out.stdout)["index"] <= 1.0


def test_range_samples_csv_and_figure(files, tmp_path):
    fig = tmp_path / "fov.png"
    csv = tmp_path / "fov.csv"
    out = run(
        [
            "range-samples",
            "--space",
            files["l2c"],
            "--op",
            files["nil"],
            "--count",
            "24",
            "--output",
            str(csv),
            "--figure",
            str(fig),
        ]
    )
    assert out.returncode == 0
    lines = csv.read_text().strip().splitlines()
    assert lines[0] == "theta,re,im"
    assert len(lines) == 25
    assert fig.exists() and fig.stat().st_size > 0


def test_repro_exit_0_and_figure(tmp_path):
    out = run(["repro", "--figure-dir", str(tmp_path / "figs")])
    assert out.returncode == 0
    data = json.loads(out.stdout)
    assert data["all_pass"]
    assert (tmp_path / "figs" / "repro.png").exists()


def test_determinism(files):
    a = run(["radius", "--space", files["linf3c"], "--op", files["P"]])
    b = run(["radius", "--space", files["linf3c"], "--op", files["P"]])
    assert a.stdout == b.stdout
