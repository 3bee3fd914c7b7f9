import numpy as np
import pytest

from conftest import flat
from impulsegraph.bench import CSV_HEADER
from impulsegraph.cli import main
from impulsegraph.image import Image, read_image, write_image


@pytest.fixture
def paths(tmp_path):
    class P:
        def __getattr__(self, name):
            return str(tmp_path / name)

    return P()


def test_noise_zero_fraction_copies_file(paths):
    write_image(paths.a, Image.filled(6, 5, (1, 2, 3)))
    assert main(["noise", paths.a, paths.b, paths.m, "--p", "0"]) == 0
    with open(paths.a, "rb") as fa, open(paths.b, "rb") as fb:
        assert fa.read() == fb.read()


def test_noise_repeatable_and_mask_count(paths):
    write_image(paths.a, flat(100, 100))
    assert main(["noise", paths.a, paths.b, paths.m, "--p", "0.2", "--seed", "5"]) == 0
    assert main(["noise", paths.a, paths.c, paths.m2, "--p", "0.2", "--seed", "5"]) == 0
    with open(paths.b, "rb") as fb, open(paths.c, "rb") as fc:
        assert fb.read() == fc.read()
    with open(paths.m, "rb") as fm:
        data = fm.read()
    assert data.startswith(b"P5\n100 100\n255\n")
    assert data.count(b"\xff") == 2000


def test_denoise_flat_is_identical(paths):
    write_image(paths.a, flat(12, 12, 90))
    assert main(["denoise", paths.a, paths.b, paths.m]) == 0
    assert read_image(paths.b) == flat(12, 12, 90)
    assert read_image(paths.m).pixels.max() == 0


def test_denoise_single_outlier(paths, single_outlier):
    write_image(paths.a, single_outlier)
    assert main(["denoise", paths.a, paths.b, paths.m]) == 0
    assert read_image(paths.b) == flat(16, 16, 128)
    assert int((read_image(paths.m).pixels == 255).sum()) == 1


def test_zero_bandwidth_is_usage_error(paths, capsys):
    write_image(paths.a, flat(4, 4))
    assert main(["denoise", paths.a, paths.b, "--h", "0"]) == 1
    assert "h must be" in capsys.readouterr().err


def test_unknown_flag_is_usage_error(paths):
    with pytest.raises(SystemExit) as info:
        main(["denoise", paths.a, paths.b, "--bogus"])
    assert info.value.code == 1


def test_missing_input_is_io_error(paths):
    assert main(["median", paths.nothing, paths.b]) == 2


def test_garbage_input_is_format_error(paths):
    with open(paths.a, "wb") as fh:
        fh.write(b"not an image")
    assert main(["denoise", paths.a, paths.b]) == 2


def test_median_removes_spike(paths):
    arr = np.zeros((5, 5), dtype=np.uint8)
    arr[2, 2] = 255
    write_image(paths.a, Image.from_array(arr))
    assert main(["median", paths.a, paths.b]) == 0
    assert read_image(paths.b) == flat(5, 5, 0)


def test_compare_output(paths, capsys):
    orig = Image.from_array(np.array([[0, 0]], dtype=np.uint8))
    noisy = Image.from_array(np.array([[40, 0]], dtype=np.uint8))
    write_image(paths.o, orig)
    write_image(paths.n, noisy)
    assert main(["compare", paths.o, paths.n, paths.o]) == 0
    header, row = capsys.readouterr().out.splitlines()
    assert header == "d_orig_noisy,d_orig_restored,delta_improvement_percent"
    assert row.split(",")[2] == "100.000000"
    assert main(["compare", paths.o, paths.n, paths.n]) == 0
    assert capsys.readouterr().out.splitlines()[1].split(",")[2] == "0.000000"


def test_compare_with_masks(paths, capsys):
    write_image(paths.o, flat(4, 4, 10))
    assert main(["noise", paths.o, paths.n, paths.t, "--p", "0.25"]) == 0
    assert main(["denoise", paths.n, paths.r, paths.d]) == 0
    assert main(["compare", paths.o, paths.n, paths.r, "--truth", paths.t, "--detected", paths.d]) == 0
    header = capsys.readouterr().out.splitlines()[0]
    assert header.endswith(",precision,recall")
    assert main(["compare", paths.o, paths.n, paths.r, "--truth", paths.t]) == 1


def test_bench_csv_and_figures(paths, tmp_path):
    code = main(["bench", "--synthetic", "solid_rect", "--size", "20", "--p-list", "10,20",
                 "--seeds", "1,2", "--csv", paths.out, "--figures", paths.figs])
    assert code == 0
    lines = open(paths.out).read().splitlines()
    assert lines[0] == ",".join(CSV_HEADER)
    assert len(lines) == 1 + 4 + 2
    assert [ln.split(",")[-1] for ln in lines[1:]] == ["1", "2", "1", "2", "-1", "-1"]
    assert (tmp_path / "figs" / "curves.png").exists()
    assert (tmp_path / "figs" / "panels.png").exists()


def test_bench_from_image(paths, capsys):
    write_image(paths.a, flat(10, 10, 70))
    assert main(["bench", "--image", paths.a, "--p-list", "30", "--seeds", "1"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert len(out) == 3


def test_bench_rejects_out_of_range(paths):
    assert main(["bench", "--size", "8", "--p-list", "0,10"]) == 1
    assert main(["bench", "--size", "8", "--p-list", "100"]) == 1


def test_synth(paths):
    assert main(["synth", paths.a, "--synthetic", "solid_rect", "--size", "12x8"]) == 0
    img = read_image(paths.a)
    assert (img.width, img.height) == (12, 8)
