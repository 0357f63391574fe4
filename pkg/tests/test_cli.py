import json

import numpy as np
import pytest

from imkit import io
from imkit.channels import RealKrausSet, random_channel
from imkit.cli import run
from imkit.errors import InvalidInput
from imkit.linalg import PLUS_I, random_orthogonal


def write(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def plus_i_file(tmp_path):
    return write(tmp_path / "plus_i.json", io.array_to_json(PLUS_I))


def test_array_round_trip(rng):
    for a in (rng.standard_normal(3), rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))):
        back = io.array_from_json(json.loads(io.dumps(io.array_to_json(a))))
        assert np.array_equal(back, a)


def test_array_imaginary_part_optional():
    assert np.array_equal(io.array_from_json({"dim": 2, "re": [1, 0]}), [1, 0])


def test_array_format_errors():
    with pytest.raises(InvalidInput):
        io.array_from_json({"dim": 3, "re": [1, 0]})
    with pytest.raises(InvalidInput):
        io.array_from_json({"re": [1, 0], "im": [0]})
    with pytest.raises(InvalidInput):
        io.array_from_json([1, 0])


def test_kraus_round_trip(rng):
    k = random_channel(3, 2, 2, rng)
    obj = json.loads(io.dumps(io.kraus_to_json(k)))
    assert obj["outcomes"] == 2
    back = io.kraus_from_json(obj)
    assert all(np.array_equal(a, b) for a, b in zip(back, k))
    real = io.kraus_from_json(io.kraus_to_json(RealKrausSet([np.eye(2)])))
    assert isinstance(real, RealKrausSet)


def test_measure_plus_i(capsys, plus_i_file):
    code, out, _ = call(capsys, "measure", "--state", plus_i_file)
    assert code == 0
    rep = json.loads(out)
    assert set(rep) == {"robustness", "fidelity_of_imaginarity", "geometric"}
    assert rep["robustness"] == pytest.approx(1, abs=1e-12)
    assert rep["fidelity_of_imaginarity"] == pytest.approx(1, abs=1e-12)
    assert rep["geometric"] == pytest.approx(0.5, abs=1e-12)


def test_measure_bloch(capsys):
    code, out, _ = call(capsys, "measure", "--bloch", "0,0.6,0.4")
    rep = json.loads(out)
    assert code == 0 and rep["robustness"] == pytest.approx(0.6) and "geometric" not in rep


def test_optics_cost(capsys):
    code, out, _ = call(capsys, "optics", "cost", "--measurement", "2")
    assert code == 0 and json.loads(out) == {"general": 11, "real": 5}
    code, out, _ = call(capsys, "optics", "cost", "--dilation", "3")
    assert json.loads(out) == {"general": 728, "real": 351, "dilation_dim": 27}


def test_optics_decompose(capsys, tmp_path):
    o = random_orthogonal(4, 3)
    path = write(tmp_path / "o.json", io.array_to_json(o))
    code, out, _ = call(capsys, "optics", "decompose", "--state", path)
    plan = json.loads(out)
    assert code == 0 and plan["count"] == 6


def test_region_csv(capsys, tmp_path):
    dest = tmp_path / "region.csv"
    code, out, _ = call(capsys, "region", "--bloch", "0,0.6,0.4", "--grid", "401", "--out", str(dest))
    assert code == 0 and out == ""
    rows = dest.read_text().splitlines()
    assert rows[0] == "s_y,s_z,accessible"
    assert len(rows) == 1 + 401 * 401
    data = np.loadtxt(dest, delimiter=",", skiprows=1)
    acc = data[data[:, 2] == 1]
    assert np.abs(acc[:, 0]).max() <= 0.6


def test_convert(capsys, tmp_path, plus_i_file):
    tgt = write(tmp_path / "t.json", io.array_to_json(np.array([0.8, 0.6j])))
    code, out, _ = call(capsys, "convert", "--state", plus_i_file, "--target", tgt)
    res = json.loads(out)
    assert code == 0 and res["probability"] == 1 and res["deterministic"]
    k = io.kraus_from_json(res["channel"])
    assert k.is_complete()


def test_distill(capsys):
    code, out, _ = call(capsys, "distill", "--bloch", "0,0.6,0.4")
    res = json.loads(out)
    assert code == 0
    assert res["achieved"] == pytest.approx(0.8, abs=1e-12)


def test_discriminate(capsys, tmp_path, rng):
    q = random_orthogonal(6, rng)
    a = write(tmp_path / "a.json", io.array_to_json(q[0]))
    b = write(tmp_path / "b.json", io.array_to_json(q[1]))
    code, out, _ = call(capsys, "discriminate", "--state", a, "--target", b, "--dim-a", "2")
    res = json.loads(out)
    assert code == 0
    assert res["success"]["psi"] == pytest.approx(1, abs=1e-9)
    assert res["success"]["phi"] == pytest.approx(1, abs=1e-9)


def test_validate(capsys, tmp_path):
    half = write(tmp_path / "half.json", io.kraus_to_json(RealKrausSet([np.eye(2) / 2])))
    code, _, err = call(capsys, "validate", "--channel", half)
    assert code == 1 and json.loads(err)["error"] == "Incomplete"
    code, out, _ = call(capsys, "validate", "--channel", half, "--complete")
    assert code == 0
    completed = io.kraus_from_json(json.loads(out)["completed"])
    assert completed.is_complete()


def test_random_is_seeded(capsys, monkeypatch):
    _, a, _ = call(capsys, "random", "--kind", "mixed", "--dim", "3", "--seed", "5")
    _, b, _ = call(capsys, "random", "--kind", "mixed", "--dim", "3", "--seed", "5")
    monkeypatch.setenv("IMKIT_SEED", "5")
    _, c, _ = call(capsys, "random", "--kind", "mixed", "--dim", "3")
    monkeypatch.delenv("IMKIT_SEED")
    _, d, _ = call(capsys, "random", "--kind", "mixed", "--dim", "3")
    _, e, _ = call(capsys, "random", "--kind", "mixed", "--dim", "3", "--seed", "0")
    assert a == b == c
    assert d == e != a


def test_byte_identical_output(capsys, tmp_path):
    outs = []
    for _ in range(2):
        dest = tmp_path / "r.csv"
        run(["region", "--bloch", "0,-0.7,-0.714142842854285", "--grid", "51", "--out", str(dest)])
        outs.append(dest.read_bytes())
    assert outs[0] == outs[1]


def test_domain_error_exit_code(capsys):
    code, out, err = call(capsys, "measure", "--bloch", "1,1,1")
    assert code == 1 and out == ""
    assert json.loads(err) == {"error": "InvalidBloch", "detail": json.loads(err)["detail"]}


def test_missing_file(capsys):
    code, _, err = call(capsys, "measure", "--state", "/nonexistent.json")
    assert code == 1 and json.loads(err)["error"] == "InvalidInput"


def test_usage_errors(capsys):
    assert call(capsys, "bogus")[0] == 2
    assert call(capsys, "measure")[0] == 2
    assert call(capsys, "measure", "--bloch", "0,0,0", "--tol", "nonsense")[0] == 2
    code, _, err = call(capsys, "measure", "--bloch", "0,0,0", "--tol", "bogus=1")
    assert code == 2 and json.loads(err)["error"] == "UnknownTolerance"


def test_tolerance_override(capsys, tmp_path):
    m = np.eye(2) / 2
    m[0, 0] += 1e-7
    path = write(tmp_path / "m.json", io.array_to_json(m))
    assert call(capsys, "validate", "--state", path)[0] == 1
    assert call(capsys, "validate", "--state", path, "--tol", "tr=1e-6")[0] == 0
