import io
import math

import pytest

from impulsegraph.bench import (
    AVERAGE_SEED,
    CSV_HEADER,
    BenchRow,
    average_rows,
    read_csv,
    run_bench,
    write_csv,
)
from impulsegraph.synthetic import SyntheticSpec, generate_synthetic

RUNTIME_COLUMNS = [i for i, name in enumerate(CSV_HEADER) if name.startswith("runtime")]


@pytest.fixture(scope="module")
def small():
    return generate_synthetic(SyntheticSpec("solid_plus_gradient", 24, 24))


def _csv(rows):
    buf = io.StringIO()
    write_csv(rows, buf)
    return buf.getvalue()


def test_header():
    assert ",".join(CSV_HEADER) == (
        "p_percent,delta_proposed,delta_median,precision,recall,"
        "runtime_ms_proposed,runtime_ms_median,seed"
    )


def test_row_layout(small):
    rows = run_bench(small, [30, 10, 20], [2, 1])
    keys = [(r.p_percent, r.seed) for r in rows]
    assert keys[:6] == [(10, 1), (10, 2), (20, 1), (20, 2), (30, 1), (30, 2)]
    assert keys[6:] == [(10, -1), (20, -1), (30, -1)]


def test_average_is_mean():
    rows = [BenchRow(10, 1, 2, 0.5, 1, 3, 4, 1), BenchRow(10, 3, 4, 1.0, 0, 5, 6, 2)]
    (avg,) = average_rows(rows)
    assert avg == BenchRow(10, 2, 3, 0.75, 0.5, 4, 5, AVERAGE_SEED)


def test_rerun_differs_only_in_runtimes(small):
    a = _csv(run_bench(small, [10, 40], [1, 2])).splitlines()
    b = _csv(run_bench(small, [10, 40], [1, 2])).splitlines()
    assert a[0] == b[0]
    for la, lb in zip(a[1:], b[1:]):
        fa, fb = la.split(","), lb.split(",")
        for i in RUNTIME_COLUMNS:
            fa[i] = fb[i] = ""
        assert fa == fb


def test_csv_round_trip(small):
    rows = run_bench(small, [20], [1])
    back = read_csv(io.StringIO(_csv(rows)))
    assert len(back) == len(rows)
    assert back[0].delta_proposed == pytest.approx(rows[0].delta_proposed, abs=1e-6)


def test_rejects_bad_percentages(small):
    for bad in ([0], [100], [-5]):
        with pytest.raises(ValueError):
            run_bench(small, bad, [1])
    with pytest.raises(ValueError):
        run_bench(small, [10], [])


def test_p_range_checked():
    with pytest.raises(ValueError):
        BenchRow(101, 0, 0, 0, 0, 0, 0, 1)


def test_deltas_finite(small):
    rows = run_bench(small, [10, 70], [1])
    assert all(math.isfinite(r.delta_proposed) and math.isfinite(r.delta_median) for r in rows)


def test_figures(tmp_path, small):
    from impulsegraph.report import plot_curves, plot_panels

    trials = {}
    rows = run_bench(small, [10, 20], [1], keep=trials)
    curves = plot_curves(rows, tmp_path / "c.png")
    t = trials[(20, 1)]
    panels = plot_panels(small, t.noisy, t.proposed, t.median, tmp_path / "p.png")
    for path in (curves, panels):
        assert path.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
