import numpy as np
import pytest

from holosurf import ConfigurationError
from holosurf.experiments import (
    Experiment,
    SweepConfig,
    emit_config,
    parse_config,
    read_csv,
    read_matrix_csv,
    run,
    run_gain_vs_direction,
    write_matrix_csv,
)
from holosurf.experiments.cli import main
from holosurf.experiments.runners import mc_draws

FAST = dict(quad_polar=64, quad_azimuth=128)


def test_config_round_trip():
    cfg = SweepConfig(Experiment.CSI_ERROR_MC, L=(1.0,), d=(0.5, 0.1), pattern=("iso", "dipole"),
                      sigma=(0.0, 1.5), seed=7, gamma=3e-13, trials=50)
    assert parse_config(emit_config(cfg)) == cfg


def test_config_overrides_and_errors():
    text = "experiment = GAIN_VS_SPACING\nL = 1\nd = 0.5, 0.25  # comment\n"
    cfg = parse_config(text, {"pattern": "iso,dir3gpp"})
    assert cfg.pattern == ("iso", "dir3gpp") and cfg.d == (0.5, 0.25)
    with pytest.raises(ConfigurationError):
        parse_config(text + "colour = red\n")
    with pytest.raises(ConfigurationError):
        parse_config("experiment = GAIN_VS_SPACING\nd = 0.3\n")
    with pytest.raises(ConfigurationError):
        parse_config("experiment = CSI_ERROR_MC\n")
    with pytest.raises(ConfigurationError):
        parse_config(text, experiment=Experiment.PATTERN_CUT)


def test_gain_vs_spacing_table():
    cfg = SweepConfig(Experiment.GAIN_VS_SPACING, L=(1.0,), d=(0.5, 0.25),
                      pattern=("iso", "dipole"), target=("normal", "endfire"), **FAST)
    t = run(cfg)
    assert len(t.rows) == 8
    row = t.where(pattern="iso", target="normal", d=0.5)[0]
    # 2x2 grid at broadside: h is all ones, an eigenvector of C = I + s J, so G = 4 / (1 + s)
    s = np.sinc(2 * np.sqrt(2) * 0.5)
    assert row["G_opt_dB"] == pytest.approx(10 * np.log10(4 / (1 + s)), abs=1e-9)
    assert row["G_conv_dB"] == pytest.approx(row["G_opt_dB"], abs=1e-9)
    for r in t.where(d=0.25):
        assert r["G_opt_dB"] >= r["G_conv_dB"] - 1e-12


def test_direction_sweep_matches_spacing_runner():
    base = dict(L=(1.0,), d=(0.5, 0.25), pattern=("dir3gpp",), **FAST)
    sweep = run_gain_vs_direction(SweepConfig(Experiment.GAIN_VS_DIRECTION, angle_step=5.0, **base))
    spacing = run(SweepConfig(Experiment.GAIN_VS_SPACING, **base))
    at0 = sweep.where(angle_deg=0.0)[0]
    for r in spacing.rows:
        d = r[3]
        assert at0[f"G_conv_dB@{d:g}"] == pytest.approx(r[5], abs=1e-9)
        assert at0[f"G_opt_dB@{d:g}"] == pytest.approx(r[6], abs=1e-9)


def test_vertical_sweep_range():
    t = run(SweepConfig(Experiment.GAIN_VS_DIRECTION, L=(1.0,), d=(0.5,), sweep="vertical",
                        angle_step=10.0, **FAST))
    assert t.column("angle_deg")[0] == 0.0 and t.column("angle_deg")[-1] == 180.0


def test_coupling_sweep_first_zero_and_grid():
    t = run(SweepConfig(Experiment.COUPLING_SWEEP, pattern=("iso",), max_distance=1.0, step=0.05))
    assert t.metadata["first_zero[iso]"] == pytest.approx(0.5)
    assert t.column("distance")[:3] == [0.0, 0.05, 0.1]
    t2 = run(SweepConfig(Experiment.COUPLING_SWEEP, pattern=("dipole",), dipole_length=0.5,
                         axis="YZ", max_distance=0.2, step=0.1, **FAST))
    assert t2.columns == ["pattern", "t_y", "t_z", "re_c", "im_c"] and len(t2.rows) == 25
    with pytest.raises(ConfigurationError):
        run(SweepConfig(Experiment.COUPLING_SWEEP, pattern=("dipole",)))


def test_pattern_cut_has_beamwidth_row():
    t = run(SweepConfig(Experiment.PATTERN_CUT, L=(1.0,), d=(0.5,), cut_step=0.5, **FAST))
    assert t.rows[-1][0] == "zero_point_beamwidth_deg"
    assert t.columns[1:] == ["iso|normal|d=0.5|conv", "iso|normal|d=0.5|opt"]
    assert len(t.rows) == 721 + 1


def test_aperture_requires_two_spacings():
    with pytest.raises(ConfigurationError):
        run(SweepConfig(Experiment.GAIN_VS_APERTURE, L=(1.0,), d=(0.5,)))
    t = run(SweepConfig(Experiment.GAIN_VS_APERTURE, L=(0.5, 1.0), d=(0.5, 0.25), **FAST))
    r = t.where(L=1.0)[0]
    assert r["delta_dB"] == pytest.approx(r["G_opt_dB@0.25"] - r["G_opt_dB@0.5"])


def test_mc_deterministic_and_zero_sigma_reduction():
    cfg = SweepConfig(Experiment.CSI_ERROR_MC, L=(1.0,), d=(0.5, 0.25), trials=300,
                      sigma=(0.0, 5.0), seed=11, **FAST)
    a, b = run(cfg), run(cfg)
    assert a.to_csv(include_timing=False) == b.to_csv(include_timing=False)
    assert a.metadata["averaging"] == "linear"
    # sigma = 0 equals the plain average of the perfect-knowledge gains
    from holosurf import angles_to_units, batch_gains, build_ura, coupling_matrix, transfer_matrix
    from holosurf import isotropic_pattern, spherical_quadrature

    theta, phi, _, _ = mc_draws(11, 300)
    g = build_ura(1.0, 0.25)
    T = transfer_matrix(coupling_matrix(g, isotropic_pattern(), spherical_quadrature(64, 128)))
    conv, opt = batch_gains(g, isotropic_pattern(), T, angles_to_units(theta, phi))
    row = a.where(sigma_deg=0.0)[0]
    assert row["G_opt_dB@0.25"] == pytest.approx(10 * np.log10(opt.mean()), abs=1e-12)
    assert row["G_conv_dB@0.25"] == pytest.approx(10 * np.log10(conv.mean()), abs=1e-12)


def test_mc_seed_changes_draws():
    a = mc_draws(1, 10)[0]
    b = mc_draws(2, 10)[0]
    assert not np.allclose(a, b)
    assert np.all((a >= np.pi / 3) & (a <= 2 * np.pi / 3))


def test_csv_round_trip(tmp_path):
    t = run(SweepConfig(Experiment.GAIN_VS_SPACING, L=(1.0,), d=(0.5,), **FAST))
    path = tmp_path / "out.csv"
    t.to_csv(path)
    back = read_csv(path.read_text())
    assert back.columns == t.columns
    assert back.rows[0][5] == t.rows[0][5]
    assert parse_config(back.metadata["config"]) == t_config(t)


def t_config(table):
    return parse_config(table.metadata["config"])


def test_matrix_csv_round_trip():
    m = np.array([[1 + 2j, -0.5], [1e-20j, 3.25]])
    np.testing.assert_array_equal(read_matrix_csv(write_matrix_csv(m)), m)


def test_cli_success_and_failure(tmp_path, capsys):
    cfg = tmp_path / "c.txt"
    cfg.write_text("L = 1\nd = 0.5, 0.25\nquad_polar = 64\nquad_azimuth = 128\n")
    out = tmp_path / "t.csv"
    assert main(["gain-spacing", "--config", str(cfg), "--pattern", "dir3gpp",
                 "--out", str(out)]) == 0
    t = read_csv(out.read_text())
    assert set(t.column("pattern")) == {"dir3gpp"}
    assert main(["gain-spacing", "--d", "0.3"]) != 0
    err = capsys.readouterr().err.strip()
    assert err.startswith("holosurf: error:") and "\n" not in err
    assert main(["csi-mc", "--L", "1", "--d", "0.5"]) != 0


def test_cli_export_matrix(capsys):
    assert main(["export-matrix", "--L", "1", "--d", "0.5", "--which", "C"]) == 0
    m = read_matrix_csv(capsys.readouterr().out)
    s = np.sinc(2 * np.sqrt(2) * 0.5)
    np.testing.assert_allclose(m, np.eye(4) + s * np.fliplr(np.eye(4)), atol=1e-15)


def test_cli_help_documents_schema(capsys):
    with pytest.raises(SystemExit) as info:
        main(["aperture", "--help"])
    assert info.value.code == 0
    assert "delta_dB" in capsys.readouterr().out
