import json

import numpy as np
import pytest
from PIL import Image

from wheatvision import cli
from wheatvision.dataset import Dataset, LabeledSample, write_csv
from wheatvision.learners import load_model
from wheatvision.synthetic import render_image


def _save_class_dir(root, name, builder, count, size=32, seed=13):
    d = root / name
    d.mkdir(parents=True)
    for i in range(count):
        arr = render_image(builder, i, seed=seed, size=size)
        Image.fromarray(arr.astype(np.uint8), mode="L").save(
            d / f"{name}_{i}.png")


_TRAIN_FLAGS = ["--seed", "3", "--test-fraction", "0.25", "--cv-folds", "2",
                "--forest-trees", "5", "--gbm-rounds", "5",
                "--stacking-folds", "2"]


@pytest.fixture(scope="module")
def cli_env(tmp_path_factory):
    """Shared corpus: 2 classes x 4 images, extracted CSV, trained tree."""
    root = tmp_path_factory.mktemp("cli")
    data = root / "data"
    _save_class_dir(data, "plain", "healthy", 4)
    _save_class_dir(data, "spots", "blobs", 4)
    csv_path = root / "features.csv"
    assert cli.main(["extract", str(data), str(csv_path)]) == 0
    model_path = root / "tree.model.json"
    assert cli.main(["train", str(csv_path), "--model", "tree",
                     "--out", str(model_path)] + _TRAIN_FLAGS) == 0
    return {"root": root, "data": data, "csv": csv_path,
            "model": model_path,
            "report": root / "tree.model.report.json"}


def test_extract_summary_and_determinism(cli_env, capsys, tmp_path):
    out = tmp_path / "again.csv"
    assert cli.main(["extract", str(cli_env["data"]), str(out)]) == 0
    stdout = capsys.readouterr().out
    assert "wrote 8 rows" in stdout
    assert "plain 4, spots 4" in stdout
    assert "skipped 0" in stdout
    assert out.read_bytes() == cli_env["csv"].read_bytes()


def test_extract_skips_corrupt_file(tmp_path, capsys):
    data = tmp_path / "data"
    _save_class_dir(data, "a", "healthy", 1)
    _save_class_dir(data, "b", "blobs", 1)
    (data / "a" / "junk.png").write_bytes(b"not an image")
    out = tmp_path / "features.csv"
    assert cli.main(["extract", str(data), str(out)]) == 0
    captured = capsys.readouterr()
    assert "warning: skipping" in captured.err
    assert "skipped 1" in captured.out


def test_extract_dump_masks(cli_env, tmp_path):
    out = tmp_path / "features.csv"
    masks = tmp_path / "masks"
    assert cli.main(["extract", str(cli_env["data"]), str(out),
                     "--dump-masks", str(masks)]) == 0
    files = sorted(masks.rglob("*.png"))
    assert len(files) == 8
    arr = np.asarray(Image.open(files[0]))
    assert set(np.unique(arr)) <= {0, 255}


def test_train_artifacts(cli_env, tmp_path):
    model_path = cli_env["model"]
    report_path = cli_env["report"]
    assert model_path.exists()
    assert report_path.exists()  # default <stem>.report.json next to the model

    bundle = load_model(model_path)
    assert bundle.kind == "tree"
    assert bundle.class_names == ["plain", "spots"]
    assert bundle.config.seed == 3

    doc = json.loads(report_path.read_text())
    assert doc["model"] == "tree"
    assert doc["train_size"] == 6 and doc["test_size"] == 2
    assert len(doc["test_predictions"]) == 2
    assert np.array(doc["confusion"]).sum() == 2

    # retraining reproduces both files byte for byte
    again = tmp_path / "again.model.json"
    assert cli.main(["train", str(cli_env["csv"]), "--model", "tree",
                     "--out", str(again)] + _TRAIN_FLAGS) == 0
    assert again.read_bytes() == model_path.read_bytes()
    assert (tmp_path / "again.model.report.json").read_bytes() == \
        report_path.read_bytes()


def test_train_prints_report(cli_env, tmp_path, capsys):
    out = tmp_path / "m.json"
    assert cli.main(["train", str(cli_env["csv"]), "--model", "tree",
                     "--out", str(out)] + _TRAIN_FLAGS) == 0
    stdout = capsys.readouterr().out
    assert "trained tree on 6 samples, tested on 2" in stdout
    assert "precision" in stdout and "macro avg" in stdout
    assert f"model written to {out}" in stdout


def test_train_voting_model(cli_env, tmp_path):
    out = tmp_path / "voting.model.json"
    assert cli.main(["train", str(cli_env["csv"]), "--model", "voting",
                     "--out", str(out)] + _TRAIN_FLAGS) == 0
    bundle = load_model(out)
    assert bundle.kind == "voting"
    assert len(bundle.model.bases) == 3


def test_train_unknown_model_usage_error(cli_env):
    with pytest.raises(SystemExit) as err:
        cli.main(["train", str(cli_env["csv"]), "--model", "svm",
                  "--out", "x.json"])
    assert err.value.code == 2


def test_evaluate_outputs(cli_env, tmp_path, capsys):
    json_path = tmp_path / "metrics.json"
    cm_path = tmp_path / "cm.csv"
    assert cli.main(["evaluate", str(cli_env["model"]), str(cli_env["csv"]),
                     "--json", str(json_path),
                     "--confusion-csv", str(cm_path)]) == 0
    stdout = capsys.readouterr().out
    assert "accuracy" in stdout
    doc = json.loads(json_path.read_text())
    assert doc["model"] == "tree"
    assert np.array(doc["confusion"]).sum() == 8
    lines = cm_path.read_text().splitlines()
    assert lines[0] == "true\\pred,plain,spots"


def test_evaluate_class_mismatch(cli_env, tmp_path, capsys):
    samples = [LabeledSample(np.full(28, float(c)), c, f"c{c}/x.png")
               for c in range(3)]
    ds = Dataset(samples=samples, class_names=["c0", "c1", "c2"])
    csv3 = tmp_path / "three.csv"
    write_csv(ds, csv3)
    assert cli.main(["evaluate", str(cli_env["model"]), str(csv3)]) == 1
    assert "error:" in capsys.readouterr().err


def test_predict_matches_training_report(cli_env, tmp_path, capsys):
    doc = json.loads(cli_env["report"].read_text())
    row = doc["test_predictions"][0]
    image = cli_env["data"] / row["source"]
    mask_path = tmp_path / "mask.png"
    glcm_path = tmp_path / "glcm.csv"
    assert cli.main(["predict", str(cli_env["model"]), str(image),
                     "--dump-mask", str(mask_path),
                     "--dump-glcm", str(glcm_path)]) == 0
    stdout = capsys.readouterr().out
    lines = stdout.splitlines()
    assert lines[0] == f"prediction: {row['predicted']}"
    probs = [float(line.strip().rsplit(" ", 1)[1]) for line in lines[1:3]]
    assert probs == row["proba"]  # CLI replay is bit-exact vs training report
    assert sum(probs) == pytest.approx(1.0, abs=1e-9)

    assert set(np.unique(np.asarray(Image.open(mask_path)))) <= {0, 255}
    assert glcm_path.read_text().strip()


def test_predict_warns_on_empty_mask(cli_env, tmp_path, capsys):
    dark = tmp_path / "dark.png"
    Image.fromarray(np.full((32, 32), 10, dtype=np.uint8), mode="L").save(dark)
    assert cli.main(["predict", str(cli_env["model"]), str(dark)]) == 0
    captured = capsys.readouterr()
    assert "empty segmentation mask" in captured.err
    assert captured.out.startswith("prediction: ")


def test_report_artifacts(cli_env, tmp_path, capsys):
    out_dir = tmp_path / "report"
    assert cli.main(["report", str(cli_env["model"]), str(cli_env["csv"]),
                     "--out-dir", str(out_dir), "--cv"]) == 0
    stdout = capsys.readouterr().out
    assert "cross-validation accuracy" in stdout
    for name in ("confusion.csv", "metrics.json", "metrics.txt",
                 "confusion.png", "metrics.png", "cv.json"):
        path = out_dir / name
        assert path.exists() and path.stat().st_size > 0, name
    assert (out_dir / "confusion.png").read_bytes()[:8] == \
        b"\x89PNG\r\n\x1a\n"
    cv = json.loads((out_dir / "cv.json").read_text())
    assert len(cv["folds"]) == 2
    assert "accuracy" in cv["summary"]


def test_bad_model_file_exit_one(cli_env, tmp_path, capsys):
    bogus = tmp_path / "bogus.json"
    bogus.write_text("{not json")
    assert cli.main(["evaluate", str(bogus), str(cli_env["csv"])]) == 1
    assert cli.main(["predict", str(bogus),
                     str(cli_env["data"] / "plain" / "plain_0.png")]) == 1
    assert "error:" in capsys.readouterr().err


def test_config_flag_overrides_file(tmp_path):
    data = tmp_path / "data"
    for name in ("a", "b"):
        d = data / name
        d.mkdir(parents=True)
        Image.fromarray(np.full((8, 8), 100, dtype=np.uint8),
                        mode="L").save(d / "img.png")
    cfg = tmp_path / "config.json"
    cfg.write_text(json.dumps({"resize_width": 16, "resize_height": 16,
                               "seg_threshold": 120}))

    # config file alone: 100 < 120 so the mask is empty
    masks_a = tmp_path / "masks_a"
    assert cli.main(["extract", str(data), str(tmp_path / "a.csv"),
                     "--config", str(cfg), "--dump-masks", str(masks_a)]) == 0
    mask = np.asarray(Image.open(masks_a / "a" / "img.png"))
    assert mask.shape == (16, 16)  # config file set the resize
    assert (mask == 0).all()

    # flag beats the file: threshold 90 turns everything foreground
    masks_b = tmp_path / "masks_b"
    assert cli.main(["extract", str(data), str(tmp_path / "b.csv"),
                     "--config", str(cfg), "--seg-threshold", "90",
                     "--dump-masks", str(masks_b)]) == 0
    assert (np.asarray(Image.open(masks_b / "a" / "img.png")) == 255).all()


def test_invalid_config_value_exit_one(cli_env, capsys):
    assert cli.main(["extract", str(cli_env["data"]), "out.csv",
                     "--seg-threshold", "999"]) == 1
    assert "invalid config" in capsys.readouterr().err


def test_no_subcommand_usage_error():
    with pytest.raises(SystemExit) as err:
        cli.main([])
    assert err.value.code == 2
