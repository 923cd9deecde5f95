import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import ndimage

from shapesection import geometry as geo
from shapesection import ingest, kernels
from shapesection import synthetic as sy
from shapesection.errors import DegenerateContourError, InputError, InvalidContourError
from shapesection.normalize import ensure_ccw

from . import oracles


def square_mask(size=14, lo=2, hi=12):
    m = np.zeros((size, size), dtype=bool)
    m[lo:hi, lo:hi] = True
    return m


def blob(rng, size=48):
    """Chain of overlapping disks, opened so no part is thinner than 3 pixels."""
    yy, xx = np.mgrid[:size, :size]
    mask = np.zeros((size, size), dtype=bool)
    p = rng.uniform(15, 33, 2)
    for _ in range(rng.integers(2, 7)):
        r = rng.uniform(3, 7)
        mask |= (yy - p[0]) ** 2 + (xx - p[1]) ** 2 <= r * r
        p = np.clip(p + rng.uniform(-r, r, 2), 8, size - 9)
    return ndimage.binary_opening(mask, np.ones((3, 3)))


# ---------------------------------------------------------------- PGM


@pytest.mark.parametrize("binary", [True, False])
def test_pgm_round_trip(tmp_path, rng, binary):
    img = rng.integers(0, 256, (7, 11)).astype(np.uint8)
    ingest.write_pgm(img, tmp_path / "a.pgm", binary=binary)
    np.testing.assert_array_equal(ingest.read_pgm(tmp_path / "a.pgm"), img)


def test_pgm_header_comments_and_maxval(tmp_path):
    (tmp_path / "c.pgm").write_bytes(b"P2\n# made by hand\n3 1\n# depth\n15\n0 15 5\n")
    np.testing.assert_array_equal(ingest.read_pgm(tmp_path / "c.pgm"), [[0, 255, 85]])


@pytest.mark.parametrize(
    "data",
    [b"P6\n1 1\n255\n\x00\x00\x00", b"P5\n2 2\n255\n\x00", b"P2\n2 2\n255\n1 2 3", b"P5\n1 1\n65535\n\x00\x00"],
)
def test_pgm_rejects_bad_files(tmp_path, data):
    (tmp_path / "bad.pgm").write_bytes(data)
    with pytest.raises(InputError):
        ingest.read_pgm(tmp_path / "bad.pgm")


# ---------------------------------------------------------------- binarize


def test_binarize_all_dark():
    with pytest.raises(DegenerateContourError):
        ingest.binarize(np.zeros((5, 5), dtype=np.uint8))


def test_binarize_checkerboard():
    img = (np.indices((6, 6)).sum(0) % 2 * 255).astype(np.uint8)
    np.testing.assert_array_equal(ingest.binarize(img), img == 0)


def test_binarize_disk_area():
    mask = ingest.binarize(sy.disk_image(200, 60.0))
    assert abs(mask.sum() - math.pi * 60**2) < 0.02 * math.pi * 60**2


def test_binarize_threshold_range():
    with pytest.raises(InputError):
        ingest.binarize(np.zeros((2, 2)), 300)


# ---------------------------------------------------------------- tracing


def test_square_trace():
    m = square_mask()
    padded = np.pad(m, 1).astype(np.uint8)
    r, c = np.nonzero(padded)
    raw = kernels.backend.moore_trace(padded, int(r[0]), int(c[0]), kernels.DIR_ROW, kernels.DIR_COL, kernels.DIR_INDEX)
    assert raw.shape[0] == 36
    out = ingest.trace_boundary(m)
    assert out.shape[0] == 4
    # y = height - 1 - row puts rows 2..11 at y = 11..2
    assert {tuple(p) for p in out} == {(2.0, 2.0), (11.0, 2.0), (11.0, 11.0), (2.0, 11.0)}
    assert geo.signed_area(ensure_ccw(out)) == 81.0


def test_trace_picks_larger_component():
    m = np.zeros((30, 30), dtype=bool)
    m[2:6, 2:6] = True
    m[10:25, 12:28] = True
    out = ingest.trace_boundary(m)
    assert abs(geo.signed_area(out)) == 14 * 15
    assert out[:, 0].min() == 12


def test_trace_disk():
    r = 50.0
    out = ingest.trace_boundary(ingest.binarize(sy.disk_image(140, r)))
    assert abs(geo.length(out) - 2 * math.pi * r) < 0.10 * 2 * math.pi * r
    assert abs(abs(geo.signed_area(out)) - math.pi * r * r) < 0.02 * math.pi * r * r


def test_trace_thin_line_is_degenerate():
    m = np.zeros((10, 10), dtype=bool)
    m[5, 2:8] = True
    with pytest.raises(DegenerateContourError):
        ingest.trace_boundary(m)


def test_trace_keeps_one_pixel_spike():
    m = square_mask(20, 5, 15)
    m[1:5, 9] = True
    out = ingest.trace_boundary(m)
    assert out[:, 1].max() == 20 - 1 - 1


def test_trace_translation_equivariance(rng):
    m = blob(rng, 40)
    padded = np.pad(m, ((0, 6), (0, 6)))
    base = ingest.trace_boundary(padded)
    # 6 rows down is 6 units lower in y; 3 columns right is 3 units in x
    moved = ingest.trace_boundary(np.roll(padded, (6, 3), (0, 1)))
    np.testing.assert_array_equal(moved, base + [3.0, -6.0])


@given(st.integers(0, 2**32 - 1))
def test_blob_traces_are_simple(seed):
    out = ingest.trace_boundary(blob(np.random.default_rng(seed)))
    assert geo.is_simple(out)
    assert out.shape[0] >= 4


def test_prune_collinear():
    c = np.array([[0, 0], [1, 0], [2, 0], [2, 0], [2, 1], [2, 2], [0, 2], [0, 1]], dtype=float)
    np.testing.assert_array_equal(ingest.prune_collinear(c), [[0, 0], [2, 0], [2, 2], [0, 2]])


# ---------------------------------------------------------------- contour CSV


def test_csv_round_trip(tmp_path, rng):
    c = rng.normal(size=(50, 2)) * 10.0 ** rng.integers(-8, 8, (50, 1))
    ingest.write_contour_csv(c, tmp_path / "c.csv")
    np.testing.assert_array_equal(ingest.read_contour_csv(tmp_path / "c.csv"), c)


def test_csv_header_optional(tmp_path):
    (tmp_path / "a.csv").write_text("0,0\n1,0\n0,1\n")
    (tmp_path / "b.csv").write_text("x,y\n0,0\n1,0\n0,1\n")
    np.testing.assert_array_equal(ingest.read_contour_csv(tmp_path / "a.csv"), ingest.read_contour_csv(tmp_path / "b.csv"))


@pytest.mark.parametrize("text", ["x,y\n0,0\n1,1\n", "0,0\n1,0\n0,nan\n", "0,0\n1,0,3\n0,1\n", "0,0\n1,a\n0,1\n"])
def test_csv_rejects_bad_files(tmp_path, text):
    (tmp_path / "bad.csv").write_text(text)
    with pytest.raises(InvalidContourError):
        ingest.read_contour_csv(tmp_path / "bad.csv")


# ---------------------------------------------------------------- manifests


def write_manifest(path, rows):
    path.write_text("path,class_id,class_name\n" + "".join(f"{p},{k},{n}\n" for p, k, n in rows))


def test_manifest_csv_dataset(tmp_path):
    for name, c in (("b.csv", sy.regular_polygon(5)), ("a.csv", sy.leaf(50)), ("c.csv", sy.ellipse(2, 1, 40))):
        ingest.write_contour_csv(c, tmp_path / name)
    write_manifest(tmp_path / "m.csv", [("b.csv", 1, "round"), ("a.csv", 0, "leaf"), ("c.csv", 1, "round")])
    data = ingest.load_dataset(tmp_path / "m.csv")
    assert len(data) == 3 and data.class_count == 2
    assert [p.rsplit("/", 1)[1] for p in data.names] == ["a.csv", "b.csv", "c.csv"]
    assert data.class_names == ["leaf", "round"]
    np.testing.assert_array_equal(data.labels, [0, 1, 1])


def test_manifest_mixed_images_and_csv(tmp_path):
    ingest.write_pgm(sy.disk_image(40, 12.0), tmp_path / "disk.pgm")
    ingest.write_contour_csv(sy.regular_polygon(7), tmp_path / "hept.csv")
    write_manifest(tmp_path / "m.csv", [("disk.pgm", 0, "disk"), ("hept.csv", 1, "hept")])
    data = ingest.load_dataset(tmp_path / "m.csv")
    assert all(c.ndim == 2 and c.shape[1] == 2 and c.dtype == np.float64 for c in data.contours)


@pytest.mark.parametrize(
    "rows",
    [
        [("a.csv", 0, "x"), ("a.csv", 1, "y")],
        [("a.csv", 0, "x"), ("b.csv", 2, "y")],
        [("a.csv", 0, "x"), ("b.csv", 0, "y")],
    ],
)
def test_manifest_rejects_bad_rows(tmp_path, rows):
    write_manifest(tmp_path / "m.csv", rows)
    with pytest.raises(InputError):
        ingest.read_manifest(tmp_path / "m.csv")


def test_manifest_header_and_missing_file(tmp_path):
    (tmp_path / "m.csv").write_text("file,label\na.csv,0\n")
    with pytest.raises(InputError):
        ingest.read_manifest(tmp_path / "m.csv")
    write_manifest(tmp_path / "m.csv", [("nope.csv", 0, "x")])
    with pytest.raises(InputError, match="missing"):
        ingest.load_dataset(tmp_path / "m.csv")


def test_self_intersecting_csv_rejected(tmp_path):
    ingest.write_contour_csv(np.array([[0, 0], [1, 1], [1, 0], [0, 1]], dtype=float), tmp_path / "bow.csv")
    write_manifest(tmp_path / "m.csv", [("bow.csv", 0, "x")])
    with pytest.raises(InvalidContourError):
        ingest.load_dataset(tmp_path / "m.csv")


def test_unsupported_extension(tmp_path):
    with pytest.raises(InputError):
        ingest.load_contour(tmp_path / "leaf.png")


def test_shoelace_agrees_on_traced_disk():
    out = ingest.trace_boundary(ingest.binarize(sy.disk_image(60, 20.0)))
    assert geo.signed_area(out) == pytest.approx(oracles.shoelace(out), rel=1e-12)
