import json
import subprocess
import sys

import numpy as np
import pytest

from qsdpi import io
from qsdpi.cli import main, parse_grid
from qsdpi.errors import ParamError, ParseError
from qsdpi.states import bsc_channel, identity_channel, random_channel, random_density


def _write(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


@pytest.fixture
def files(tmp_path):
    ch = random_channel(0, 2)
    sigma = random_density(1, 2)
    return {
        "channel": _write(tmp_path / "ch.json", io.channel_to_json(ch)),
        "bsc": _write(tmp_path / "bsc.json", dict(io.channel_to_json(bsc_channel(0.05)), is_qc=True)),
        "sigma": _write(tmp_path / "sigma.json", io.matrix_to_json(sigma.matrix)),
        "diag": _write(tmp_path / "diag.json", io.matrix_to_json(np.diag([0.7, 0.3]))),
        "half": _write(tmp_path / "half.json", io.matrix_to_json(np.eye(2) / 2)),
        "pure": _write(tmp_path / "pure.json", io.matrix_to_json(np.diag([1.0, 0.0]))),
        "bell": _write(tmp_path / "bell.json", io.matrix_to_json(np.outer([1, 0, 0, 1], [1, 0, 0, 1]) / 2)),
        "tmp": tmp_path,
    }


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_matrix_json_roundtrip():
    rng = np.random.default_rng(0)
    M = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    np.testing.assert_array_equal(io.matrix_from_json(io.matrix_to_json(M)), M)
    R = rng.standard_normal((2, 3))
    np.testing.assert_array_equal(io.matrix_from_json(io.matrix_to_json(R)), R)


def test_channel_json_roundtrip():
    ch = random_channel(3, 3)
    back = io.channel_from_json(json.loads(json.dumps(io.channel_to_json(ch))))
    np.testing.assert_allclose(back.superop, ch.superop, atol=1e-15)
    assert not back.is_qc


def test_parse_errors_carry_paths():
    good = io.matrix_to_json(np.eye(2))
    with pytest.raises(ParseError) as exc:
        io.channel_from_json({"kraus": [good, {"dim": 2, "entries": [[1, 0]] * 3 + [["x", 0]]}]})
    assert exc.value.path == "$.kraus[1].entries[3]"
    with pytest.raises(ParseError) as exc:
        io.matrix_from_json({"dim": 2, "entries": [[1, 0], [0, 0], [0, 0], [1]]})
    assert exc.value.path == "$.entries[3]"
    with pytest.raises(ParseError):
        io.matrix_from_json({"dim": 0, "entries": []})


def test_parse_grid():
    assert parse_grid("0:1:3") == [0.0, 0.5, 1.0]
    assert parse_grid("0.25") == [0.25]
    for bad in ("0:1", "a:b:c", "0:1:0"):
        with pytest.raises(ParamError):
            parse_grid(bad)


def test_chisq(capsys, files):
    code, out, _ = run(capsys, "chisq", "--rho", files["diag"], "--sigma", files["half"], "--kappa", "max")
    assert code == 0
    res = json.loads(out)
    assert res["value"] == pytest.approx(0.16) and res["infinite"] is False


def test_chisq_infinite(capsys, files):
    code, out, _ = run(capsys, "chisq", "--rho", files["half"], "--sigma", files["pure"])
    assert code == 0 and json.loads(out) == {"kappa": "alpha:0.5", "value": None, "infinite": True}


def test_sdpi_both(capsys, files):
    code, out, _ = run(capsys, "sdpi", "--channel", files["channel"], "--sigma", files["sigma"], "--method", "both")
    res = json.loads(out)
    assert code == 0 and res["residuals"]["eig_svd_gap"] <= 1e-9
    assert res["eta"] == pytest.approx(res["eta_svd"], abs=1e-9)


def test_sdpi_bsc_value(capsys, files):
    code, out, _ = run(capsys, "sdpi", "--channel", files["bsc"], "--sigma", files["half"], "--method", "svd")
    assert code == 0 and json.loads(out)["eta"] == pytest.approx(0.81, abs=1e-10)


def test_tensorize_reports_qc_provenance(capsys, files):
    code, out, _ = run(capsys, "tensorize", "--channels", files["bsc"], files["bsc"],
                       "--sigmas", files["sigma"], files["half"], "--kappa", "wyd:2")
    res = json.loads(out)
    assert code == 0
    assert res["hypothesis_flags"]["all_channels_qc"] and res["hypothesis_flags"]["tensorization_proven"]
    assert abs(res["gap"]) <= 1e-7


def test_maxcorr_bell(capsys, files):
    code, out, _ = run(capsys, "maxcorr", "--state", files["bell"], "--dims", "2,2")
    assert code == 0 and json.loads(out)["mu"] == pytest.approx(1.0, abs=1e-12)


def test_petz_output_is_loadable(capsys, files):
    code, out, _ = run(capsys, "petz", "--channel", files["channel"], "--sigma", files["sigma"])
    assert code == 0
    R = io.channel_from_json(json.loads(out))
    ch = io.load_channel(files["channel"])
    sigma = io.load_state(files["sigma"])
    np.testing.assert_allclose(R(ch(sigma)).matrix, sigma.matrix, atol=1e-10)


def test_contraction(capsys, files):
    code, out, _ = run(capsys, "contraction", "--channel", files["bsc"], "--trials", "2")
    res = json.loads(out)
    assert code == 0 and 0.81 - 1e-9 <= res["eta_lower_bound"] <= 1.0
    assert res["seed"] == 0


def test_search_is_byte_identical(capsys, files):
    args = ("search", "--kappa", "min", "--trials", "3", "--seed", "5")
    _, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args)
    assert first == second
    assert json.loads(first)["best"]["seed"] in (5, 6, 7)


def test_figure_csv(capsys):
    code, out, _ = run(capsys, "figure", "bsc", "--eps", "0.05", "--s", "0:0:1")
    assert code == 0 and out == "s,eta_closed_form,eta_numeric\n0.0,0.81,0.81\n"


def test_figure_qc_json_and_out_file(capsys, files):
    dest = files["tmp"] / "fig.json"
    code, out, _ = run(capsys, "figure", "qc", "--s", "0.95", "--grid", "0:1:3", "--format", "json", "--out", str(dest))
    assert code == 0 and out == ""
    rows = json.loads(dest.read_text())
    assert [r["alpha"] for r in rows] == [0.0, 0.5, 1.0]


def test_csv_for_dict_results(capsys, files):
    code, out, _ = run(capsys, "sdpi", "--channel", files["bsc"], "--sigma", files["half"], "--format", "csv")
    assert code == 0 and out.startswith("key,value\n")
    assert "residuals.fixed_point," in out


def test_exit_code_validation_error(capsys, files, tmp_path):
    bad = _write(tmp_path / "bad.json", io.matrix_to_json(np.diag([0.7, 0.4])))
    code, out, err = run(capsys, "chisq", "--rho", bad, "--sigma", files["half"])
    assert code == 2 and out == ""
    assert json.loads(err)["error"] == "NotAState"


def test_exit_code_rank_error(capsys, files):
    code, _, err = run(capsys, "sdpi", "--channel", files["channel"], "--sigma", files["pure"])
    assert code == 2 and json.loads(err)["error"] == "FullRankRequired"


def test_exit_code_search_trials(capsys):
    code, _, err = run(capsys, "search", "--trials", "0")
    assert code == 2 and json.loads(err)["error"] == "ParamError"


def test_exit_code_malformed_input(capsys, files, tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    code, _, err = run(capsys, "chisq", "--rho", str(broken), "--sigma", files["half"])
    assert code == 3 and json.loads(err)["error"] == "ParseError"
    code, _, err = run(capsys, "chisq", "--rho", str(tmp_path / "missing.json"), "--sigma", files["half"])
    assert code == 3


def test_exit_code_bad_entry_path(capsys, files, tmp_path):
    obj = io.channel_to_json(bsc_channel(0.1))
    obj["kraus"][1]["entries"][2] = [0.0]
    path = _write(tmp_path / "ch.json", obj)
    code, _, err = run(capsys, "sdpi", "--channel", path, "--sigma", files["half"])
    payload = json.loads(err)
    assert code == 3 and payload["path"] == "$.kraus[1].entries[2]"


def test_module_entry_point(files):
    proc = subprocess.run(
        [sys.executable, "-m", "qsdpi", "chisq", "--rho", files["diag"], "--sigma", files["half"]],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["value"] == pytest.approx(0.16)


def test_sdpi_identity_channel(capsys, files, tmp_path):
    ident = _write(tmp_path / "id2.json", io.channel_to_json(identity_channel(2)))
    code, out, _ = run(capsys, "sdpi", "--channel", ident, "--sigma", files["half"], "--kappa", "half")
    assert code == 0 and json.loads(out)["eta"] == pytest.approx(1.0, abs=1e-12)
