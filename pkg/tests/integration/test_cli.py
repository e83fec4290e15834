"""
Command-line pipeline: synth, propagate, compare, aperture-study, fresnel
"""
import json
import logging

import numpy as np
import pytest
import structlog

from farfield.main import EXIT_FAILURE, EXIT_OK, EXIT_USAGE, cli_main
from farfield.models.field import PlanarField
from farfield.models.grid import PlanarGrid
from farfield.utils.csvio import read_curve, read_reports
from farfield.utils.fieldfile import read_field, write_field


@pytest.fixture(autouse=True)
def reset_logging():
    handlers = list(logging.root.handlers)
    level = logging.root.level
    yield
    structlog.reset_defaults()
    logging.root.handlers = handlers
    logging.root.setLevel(level)


@pytest.fixture
def line_1500(tmp_path):
    near, far = tmp_path / "near.txt", tmp_path / "far.csv"
    code = cli_main([
        "synth", "--freq", "1500", "--kind", "line", "--elements", "22",
        "--out", str(near), "--far-out", str(far),
    ])
    assert code == EXIT_OK
    return near, far


def test_fresnel(capsys):
    assert cli_main(["fresnel", "--freq", "500", "--c", "300", "--R", "2.03", "--D", "0.49"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "5.1"


def test_fresnel_uses_configured_sound_speed(capsys):
    assert cli_main(["fresnel", "--freq", "1500", "--R", "2.03", "--D", "0.49"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "1.7"


def test_synth_planar(tmp_path):
    path = tmp_path / "planar.txt"
    assert cli_main(["synth", "--freq", "500", "--out", str(path), "--seed", "4"]) == EXIT_OK
    field = read_field(path)
    assert isinstance(field, PlanarField)
    assert field.grid.shape == (21, 11)
    assert field.frequency == 500.0


def test_fps_identity(tmp_path, rng):
    grid = PlanarGrid(x_coords=np.arange(8) * 0.1 - 0.35, y_coords=np.arange(6) * 0.12 - 0.3, z_plane=0.28)
    values = rng.normal(size=(8, 6)) + 1j * rng.normal(size=(8, 6))
    src, out = tmp_path / "uniform.txt", tmp_path / "same.csv"
    write_field(PlanarField(grid=grid, values=values, frequency=1500.0), src)

    code = cli_main([
        "propagate", "--method", "fps", "--in", str(src), "--zfar", "0.28",
        "--out", str(out), "--no-window",
    ])
    assert code == EXIT_OK
    x, y, mag, phase = read_curve(out)
    back = mag * np.exp(1j * np.radians(phase))
    expected = values.reshape(-1)
    assert np.linalg.norm(back - expected) / np.linalg.norm(expected) < 1e-8
    assert np.array_equal(x, grid.points()[:, 0])


def test_fps_identity_is_approximate_on_scan_grid(tmp_path):
    src, out = tmp_path / "planar.txt", tmp_path / "same.csv"
    assert cli_main(["synth", "--freq", "1500", "--out", str(src), "--seed", "2"]) == EXIT_OK
    assert cli_main([
        "propagate", "--method", "fps", "--in", str(src), "--zfar", "0.28", "--out", str(out), "--no-window",
    ]) == EXIT_OK
    _, _, mag, phase = read_curve(out)
    expected = read_field(src).values.reshape(-1)
    error = np.linalg.norm(mag * np.exp(1j * np.radians(phase)) - expected) / np.linalg.norm(expected)
    # Scan steps of 0.123 m and 0.120 m break the uniform-grid identity.
    assert 1e-3 < error < 0.05


def test_fls_pipeline(line_1500, tmp_path, capsys):
    near, far = line_1500
    pred, report = tmp_path / "pred.csv", tmp_path / "report.json"
    assert cli_main([
        "propagate", "--method", "fls", "--in", str(near), "--zfar", "2.03", "--out", str(pred),
    ]) == EXIT_OK
    assert cli_main([
        "compare", "--pred", str(pred), "--oracle", str(far), "--report", str(report), "--method", "fls",
    ]) == EXIT_OK
    assert capsys.readouterr().out.startswith("FLS: rms_divergence=")
    (result,) = read_reports(report)
    assert result.rms_divergence < 0.15
    assert json.loads(report.read_text())[0]["method"] == "FLS"


def test_flt_writes_zero_phase(line_1500, tmp_path):
    near, _ = line_1500
    out = tmp_path / "flt.csv"
    assert cli_main([
        "propagate", "--method", "flt", "--in", str(near), "--zfar", "2.03", "--out", str(out),
        "--interpolate",
    ]) == EXIT_OK
    _, _, mag, phase = read_curve(out)
    assert np.all(phase == 0.0)
    assert mag.max() > 0


def test_aperture_study(line_1500, tmp_path, capsys):
    near, far = line_1500
    out, report = tmp_path / "study.csv", tmp_path / "study.json"
    assert cli_main([
        "aperture-study", "--in", str(near), "--sizes", "6,10,22", "--out", str(out),
        "--oracle", str(far), "--report", str(report),
    ]) == EXIT_OK
    reports = read_reports(report)
    assert [r.subset_size for r in reports] == [6, 10, 22]
    printed = capsys.readouterr().out.splitlines()
    assert printed[0].startswith("size 6: rms_divergence=")
    rows = out.read_text().splitlines()
    assert len(rows) == 1 + 3 * 22


def test_method_must_match_file_kind(line_1500, tmp_path, capsys):
    near, _ = line_1500
    code = cli_main([
        "propagate", "--method", "fps", "--in", str(near), "--zfar", "2.03", "--out", str(tmp_path / "x.csv"),
    ])
    assert code == EXIT_USAGE
    assert "error[usage]" in capsys.readouterr().err


def test_report_needs_oracle(line_1500, tmp_path):
    near, _ = line_1500
    code = cli_main([
        "aperture-study", "--in", str(near), "--out", str(tmp_path / "s.csv"),
        "--report", str(tmp_path / "r.json"),
    ])
    assert code == EXIT_USAGE


@pytest.mark.parametrize(
    "argv",
    [
        ["propagate", "--method", "fps", "--in", "a.txt"],
        ["explode"],
        ["propagate", "--method", "beam", "--in", "a.txt", "--zfar", "2", "--out", "b.csv"],
        ["aperture-study", "--in", "a.txt", "--out", "b.csv", "--sizes", "6,x"],
    ],
)
def test_usage_errors(argv, capsys):
    assert cli_main(argv) == EXIT_USAGE
    assert capsys.readouterr().err.startswith("farfield: error[usage]: ")


def test_help_exits_cleanly(capsys):
    assert cli_main(["--help"]) == EXIT_OK
    assert "propagate" in capsys.readouterr().out


def test_malformed_field_file(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("NOT-A-FIELD\n")
    code = cli_main([
        "propagate", "--method", "fls", "--in", str(bad), "--zfar", "2.03", "--out", str(tmp_path / "o.csv"),
    ])
    assert code == EXIT_FAILURE
    assert capsys.readouterr().err.strip().startswith("farfield: error[parse]: line 1:")


def test_missing_input_file(tmp_path, capsys):
    code = cli_main([
        "propagate", "--method", "fls", "--in", str(tmp_path / "none.txt"), "--zfar", "2",
        "--out", str(tmp_path / "o.csv"),
    ])
    assert code == EXIT_FAILURE
    assert "error[io]" in capsys.readouterr().err


def test_domain_errors_exit_with_failure(line_1500, tmp_path, capsys):
    near, _ = line_1500
    code = cli_main([
        "propagate", "--method", "fls", "--in", str(near), "--zfar", "0.1", "--out", str(tmp_path / "o.csv"),
    ])
    assert code == EXIT_FAILURE
    assert "error[propagation]" in capsys.readouterr().err


def test_undecodable_inputs_are_parse_errors(line_1500, tmp_path, capsys):
    near, far = line_1500
    latin = tmp_path / "latin.txt"
    latin.write_bytes(near.read_bytes().replace(b"kind line", b"kind line\xff"))
    code = cli_main([
        "propagate", "--method", "fls", "--in", str(latin), "--zfar", "2.03", "--out", str(tmp_path / "o.csv"),
    ])
    assert code == EXIT_FAILURE
    assert capsys.readouterr().err.startswith("farfield: error[parse]: line 3: ")

    bad_curve = tmp_path / "bad.csv"
    bad_curve.write_bytes(far.read_bytes() + b"0,0,\xff,0\n")
    code = cli_main([
        "compare", "--pred", str(bad_curve), "--oracle", str(far), "--report", str(tmp_path / "r.json"),
    ])
    assert code == EXIT_FAILURE
    assert capsys.readouterr().err.startswith("farfield: error[parse]: ")


def _abs_p(path, row):
    return float(path.read_text().splitlines()[row].split(",")[3])


def _run_twice(tmp_path, argv_for):
    outputs = []
    for run in ("a", "b"):
        out = tmp_path / run
        out.mkdir(parents=True)
        assert cli_main(argv_for(out)) == EXIT_OK
        outputs.append({p.name: p.read_bytes() for p in sorted(out.iterdir())})
    return outputs


def test_outputs_are_byte_identical(line_1500, tmp_path):
    near, far = line_1500
    runs = {
        "propagate": lambda out: [
            "propagate", "--method", "fls", "--in", str(near), "--zfar", "2.03", "--out", str(out / "pred.csv"),
        ],
        "compare": lambda out: [
            "compare", "--pred", str(far), "--oracle", str(far), "--report", str(out / "report.json"),
        ],
        "aperture-study": lambda out: [
            "aperture-study", "--in", str(near), "--sizes", "6,10", "--out", str(out / "study.csv"),
            "--oracle", str(far), "--report", str(out / "study.json"),
        ],
    }
    for command, argv_for in runs.items():
        first, second = _run_twice(tmp_path / command, argv_for)
        assert first and first == second, command


def test_yz_fresnel_check_from_cli(line_1500, tmp_path, capsys):
    near, _ = line_1500
    code = cli_main([
        "--log-level", "WARNING", "propagate", "--method", "fls", "--in", str(near), "--zfar", "2.03",
        "--out", str(tmp_path / "o.csv"), "--d-yz", "0.49",
    ])
    assert code == EXIT_OK
    assert "yz_fresnel_parameter_low" in capsys.readouterr().err


def test_aperture_study_coverage_can_be_disabled(line_1500, tmp_path):
    near, _ = line_1500
    base = ["aperture-study", "--in", str(near), "--sizes", "10"]
    covered, plain = tmp_path / "covered.csv", tmp_path / "plain.csv"
    assert cli_main(base + ["--out", str(covered)]) == EXIT_OK
    assert cli_main(base + ["--out", str(plain), "--source-diameter", "0"]) == EXIT_OK
    # Row 11 holds x = -0.05, next to the null between the lobes.
    assert _abs_p(covered, 11) < _abs_p(plain, 11)
