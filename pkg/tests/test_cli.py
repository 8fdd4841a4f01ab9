import json

import numpy as np
import pytest

from aisgd.cli import main


@pytest.fixture()
def lasso_csv(tmp_path):
    path = tmp_path / "lasso.csv"
    assert main(["simulate", "--generator", "lasso", "--n", "300", "--p", "5",
                 "--seed", "3", "--out", str(path)]) == 0
    return path


def test_simulate_writes_data_and_sidecar(lasso_csv):
    lines = lasso_csv.read_text().splitlines()
    assert lines[0] == "x1,x2,x3,x4,x5,y"
    assert len(lines) == 301
    meta = json.loads(lasso_csv.with_suffix(".json").read_text())
    assert meta["theta_star"][0] == -1.0


def test_fit_json_and_trace(lasso_csv, tmp_path, capsys):
    out, trace = tmp_path / "fit.json", tmp_path / "trace.csv"
    code = main(["fit", "--data", str(lasso_csv), "--gamma0", "0.5", "--passes", "3",
                 "--shuffle", "--out", str(out), "--trace", str(trace),
                 "--trace-every", "50", "--truth", str(lasso_csv.with_suffix(".json"))])
    assert code == 0
    res = json.loads(out.read_text())
    assert res["updates"] == 900 and len(res["estimate"]) == 5
    assert res["mse_to_truth"] < 0.1
    rows = trace.read_text().splitlines()
    assert rows[0] == "update_index,metric,value" and len(rows) == 1 + 900 // 50
    assert "method" in capsys.readouterr().out


def test_fit_to_stdout(lasso_csv, capsys):
    assert main(["fit", "--data", str(lasso_csv)]) == 0
    assert json.loads(capsys.readouterr().out)["command"] == "fit"


def test_predict_round_trip(lasso_csv, tmp_path):
    fitted = tmp_path / "fit.json"
    main(["fit", "--data", str(lasso_csv), "--out", str(fitted)])
    preds = tmp_path / "pred.csv"
    assert main(["predict", "--data", str(lasso_csv), "--response", "y",
                 "--fit", str(fitted), "--out", str(preds)]) == 0
    vals = np.array([float(v) for v in preds.read_text().splitlines()[1:]])
    data = np.loadtxt(lasso_csv, delimiter=",", skiprows=1)
    theta = np.array(json.loads(fitted.read_text())["estimate"])
    np.testing.assert_allclose(vals, data[:, :5] @ theta, rtol=1e-12)


def test_path_command(lasso_csv, tmp_path):
    out = tmp_path / "path.json"
    assert main(["path", "--data", str(lasso_csv), "--n-lambda", "4",
                 "--gamma0", "0.3", "--out", str(out)]) == 0
    entries = json.loads(out.read_text())["entries"]
    assert [e["status"] for e in entries] == ["ok"] * 4
    lams = [e["lam"] for e in entries]
    assert lams == sorted(lams, reverse=True)


def test_exit_codes(lasso_csv, tmp_path):
    assert main(["fit", "--data", str(tmp_path / "missing.csv")]) == 3
    assert main(["fit", "--data", str(lasso_csv), "--passes", "0"]) == 2
    assert main(["fit", "--data", str(lasso_csv), "--method", "esgd",
                 "--gamma0", "1e6", "--lr-a", "1e-9"]) == 4
    bad = tmp_path / "bad.csv"
    bad.write_text("a,y\n1,2\nx,3\n")
    assert main(["fit", "--data", str(bad)]) == 3
    assert main(["simulate", "--generator", "lasso", "--n", "5", "--p", "2",
                 "--out", str(tmp_path / "oops.json")]) == 2
    with pytest.raises(SystemExit) as info:
        main(["fit", "--data", str(lasso_csv), "--model", "gamma"])
    assert info.value.code == 2


def test_huber_and_binomial_models(tmp_path):
    data = tmp_path / "h.csv"
    main(["simulate", "--generator", "huber", "--n", "500", "--p", "3", "--out", str(data)])
    assert main(["fit", "--data", str(data), "--model", "huber", "--huber-delta", "2",
                 "--gamma0", "100", "--lr-a", "0.01"]) == 0
    rng = np.random.default_rng(0)
    b = tmp_path / "b.csv"
    X = rng.standard_normal((200, 2))
    y = (X[:, 0] > 0).astype(float)
    np.savetxt(b, np.column_stack([X, y]), delimiter=",", header="x1,x2,y", comments="")
    assert main(["fit", "--data", str(b), "--model", "binomial", "--lr", "adagrad"]) == 0
