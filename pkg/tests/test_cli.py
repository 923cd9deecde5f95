import hashlib
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from shapesection import cli, geometry as geo, ingest
from shapesection import synthetic as sy
from shapesection.config import build_config, parse_config_text
from shapesection.errors import ConfigError


def write_dataset(root: Path, data) -> Path:
    rows = []
    for i, (c, k) in enumerate(zip(data.contours, data.labels)):
        name = data.class_names[k]
        (root / name).mkdir(parents=True, exist_ok=True)
        rel = f"{name}/{name}_{i:03d}.csv"
        ingest.write_contour_csv(c, root / rel)
        rows.append(f"{rel},{k},{name}")
    manifest = root / "manifest.csv"
    manifest.write_text("path,class_id,class_name\n" + "\n".join(rows) + "\n")
    return manifest


@pytest.fixture
def shapes(tmp_path):
    data = sy.circles_vs_squares(np.random.default_rng(3), per_class=8)
    return write_dataset(tmp_path / "data", data)


def tree_hash(root: Path) -> dict[str, str]:
    return {p.relative_to(root).as_posix(): hashlib.sha256(p.read_bytes()).hexdigest() for p in sorted(root.rglob("*")) if p.is_file()}


# ---------------------------------------------------------------- extract


def test_extract_disks(tmp_path, capsys):
    rows = []
    for i, r in enumerate((10.0, 15.0, 22.0)):
        ingest.write_pgm(sy.disk_image(64, r), tmp_path / f"d{i}.pgm")
        rows.append(f"d{i}.pgm,0,disk")
    (tmp_path / "m.csv").write_text("path,class_id,class_name\n" + "\n".join(rows) + "\n")
    assert cli.main(["extract", str(tmp_path / "m.csv"), "--out", str(tmp_path / "out")]) == 0
    for i, r in enumerate((10.0, 15.0, 22.0)):
        c = ingest.read_contour_csv(tmp_path / "out" / "contours" / f"d{i}.csv")
        assert geo.is_simple(c)
        assert abs(abs(geo.signed_area(c)) - np.pi * r * r) < 0.02 * np.pi * r * r + 2 * np.pi * r * 0.5
    assert capsys.readouterr().out.count("vertices") == 3


def test_extract_disk_area_within_two_percent(tmp_path):
    ingest.write_pgm(sy.disk_image(140, 50.0), tmp_path / "big.pgm")
    (tmp_path / "m.csv").write_text("path,class_id,class_name\nbig.pgm,0,disk\n")
    assert cli.main(["extract", str(tmp_path / "m.csv"), "--out", str(tmp_path / "out")]) == 0
    c = ingest.read_contour_csv(tmp_path / "out" / "contours" / "big.csv")
    assert abs(abs(geo.signed_area(c)) - np.pi * 2500) < 0.02 * np.pi * 2500


def test_extract_unreadable_file_continues(tmp_path, capsys):
    ingest.write_pgm(sy.disk_image(40, 10.0), tmp_path / "ok.pgm")
    (tmp_path / "broken.pgm").write_bytes(b"not an image")
    (tmp_path / "m.csv").write_text("path,class_id,class_name\nbroken.pgm,0,a\nok.pgm,0,a\n")
    assert cli.main(["extract", str(tmp_path / "m.csv"), "--out", str(tmp_path / "out")]) == 1
    assert (tmp_path / "out" / "contours" / "ok.csv").exists()
    assert "broken.pgm" in capsys.readouterr().err


# ---------------------------------------------------------------- pipeline


def test_pipeline_outputs(shapes, tmp_path):
    out = tmp_path / "run"
    assert cli.main(["pipeline", str(shapes), "--out", str(out)]) == 0
    lines = (out / "distmat.csv").read_text().splitlines()
    assert lines[0].startswith("path,circle/circle_000.csv")
    assert len(lines) == 17
    dunn = (out / "dunn.txt").read_text()
    assert dunn.startswith("dunn=") and float(dunn.split()[0].split("=")[1]) > 1
    assert len(list((out / "contours").rglob("*.csv"))) == 16


def test_pipeline_is_byte_identical(shapes, tmp_path):
    cli.main(["pipeline", str(shapes), "--out", str(tmp_path / "a")])
    cli.main(["pipeline", str(shapes), "--out", str(tmp_path / "b")])
    assert tree_hash(tmp_path / "a") == tree_hash(tmp_path / "b")


def test_pipeline_degenerate_dunn_exits_2(tmp_path, capsys):
    c = sy.leaf(200)
    rows = []
    for i in range(4):
        ingest.write_contour_csv(c, tmp_path / f"c{i}.csv")
        rows.append(f"c{i}.csv,{i // 2},k{i // 2}")
    (tmp_path / "m.csv").write_text("path,class_id,class_name\n" + "\n".join(rows) + "\n")
    assert cli.main(["pipeline", str(tmp_path / "m.csv"), "--out", str(tmp_path / "o")]) == 2
    assert "diameter" in capsys.readouterr().err


def test_pipeline_uses_config_file(shapes, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(f"paths.manifest = {shapes}\npaths.out = out\nfamily.lambda = 2\nfamily.sectors = 3\nfamily.samples = 300\n")
    assert cli.main(["pipeline", "--config", str(cfg)]) == 0
    report = (tmp_path / "out" / "report.txt").read_text()
    assert "lambda=2 sectors=3 samples=300" in report
    c = ingest.read_contour_csv(tmp_path / "out" / "contours" / "square" / "square_008.csv")
    assert c.shape == (300, 2)


# ---------------------------------------------------------------- gridsearch and classify


def test_gridsearch(shapes, tmp_path, capsys):
    cfg = tmp_path / "g.cfg"
    cfg.write_text("grid.lambdas = 1, inf\ngrid.sectors = 0, 3\nfamily.samples = 120\n")
    assert cli.main(["gridsearch", str(shapes), "--config", str(cfg), "--out", str(tmp_path / "g")]) == 0
    rows = (tmp_path / "g" / "grid.csv").read_text().splitlines()
    assert rows[0] == "n,1,inf"
    assert [r.split(",")[0] for r in rows[1:]] == ["0", "3"]
    assert capsys.readouterr().out.startswith("best: n=")


def test_classify_separable(shapes, tmp_path, capsys):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("split.train_per_class = 5\nfamily.samples = 200\nclassify.k = 3\n")
    assert cli.main(["classify", str(shapes), "--config", str(cfg), "--out", str(tmp_path / "c")]) == 0
    out = capsys.readouterr().out
    assert "knn_accuracy=1 " in out and "logistic_accuracy=1 " in out
    pred = (tmp_path / "c" / "predictions.csv").read_text().splitlines()
    assert pred[0] == "path,true,pred" and len(pred) == 7


# ---------------------------------------------------------------- config


@pytest.mark.parametrize(
    "text, key",
    [
        ("plan.rotate = upside_down", "plan.rotate"),
        ("family.lambda = fast", "family.lambda"),
        ("family.sectors = 7\nfamily.samples = 3", "family"),
        ("colour = blue", "colour"),
        ("threshold = 999", "threshold"),
        ("grid.sectors = ", "grid.sectors"),
    ],
)
def test_config_errors_name_the_key(text, key):
    with pytest.raises(ConfigError, match=f"^{key}"):
        build_config(parse_config_text(text))


def test_config_syntax_errors():
    with pytest.raises(ConfigError, match="line 2"):
        parse_config_text("seed = 1\nno equals sign\n")
    with pytest.raises(ConfigError, match="more than once"):
        parse_config_text("seed = 1\nseed = 2\n")


def test_bad_config_exit_code(tmp_path, capsys):
    (tmp_path / "x.cfg").write_text("family.sectors = -1\n")
    assert cli.main(["pipeline", "--config", str(tmp_path / "x.cfg")]) == 1
    assert "family.sectors" in capsys.readouterr().err


def test_missing_manifest_exit_code(tmp_path):
    assert cli.main(["pipeline", str(tmp_path / "none.csv")]) == 1


def test_fmt():
    assert cli.fmt(1 / 3) == "0.3333333333"
    assert cli.fmt(float("inf")) == "inf"
    assert cli.fmt(2.0) == "2"


def test_module_entry_point(shapes, tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "shapesection", "pipeline", str(shapes), "--out", str(tmp_path / "m")],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout.startswith("dunn=")
