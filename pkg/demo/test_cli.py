#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
测试命令行入口
子命令输出、退出码映射与结果文件的可复现性
"""

import sys
import math
import hashlib
from pathlib import Path

import pytest

# 添加项目路径
sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

import quantum_carpet
from quantum_carpet import main
from src.config import get_config_manager
from src.core.errors import InvalidParameterError, NumericAccuracyError
from src.core.model import CarpetField, SpaceTimeGrid
from src.render import read_csv_field

WIDE_PACKET = ["--xbar", "0.5", "--sx", "0.1", "--pbar", "0"]


def parse_fields(text):
    """把 "key: value" 输出行转为字典"""
    fields = {}
    for line in text.splitlines():
        key, sep, value = line.partition(": ")
        if sep:
            fields[key] = value
    return fields


# ==================== 高斯和 ====================
def test_gauss_sum_table(capsys):
    assert main(["gauss-sum", "--alpha", "1", "--beta", "2"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "n,re_S,im_S,abs_S,theta"
    assert len(lines) == 3
    for line in lines[1:]:
        n, re_s, im_s, abs_s, theta = line.split(",")
        assert math.isclose(float(abs_s), math.sqrt(2.0), rel_tol=1e-14)
        assert -math.pi < float(theta) <= math.pi
    n, re_s, im_s, _, _ = lines[1].split(",")
    assert n == "1"
    assert math.isclose(float(re_s), 1.0, rel_tol=1e-14)
    assert math.isclose(float(im_s), -1.0, rel_tol=1e-14)


def test_gauss_sum_non_coprime(capsys):
    assert main(["gauss-sum", "--alpha", "2", "--beta", "4"]) == 1
    assert "不互质" in capsys.readouterr().err


def test_gauss_sum_sweep(capsys):
    assert main(["gauss-sum", "--sweep", "12"]) == 0
    fields = parse_fields(capsys.readouterr().out)
    assert fields["violations"] == "0"
    assert fields["beta_max"] == "12"


# ==================== 用法错误 ====================
def test_unknown_subcommand(tmp_path, capsys):
    assert main(["tapestry", "--out", str(tmp_path / "x.ppm")]) == 1
    assert not (tmp_path / "x.ppm").exists()
    assert "用法错误" in capsys.readouterr().err


def test_unknown_flag(tmp_path):
    out = tmp_path / "x.ppm"
    assert main(["carpet", "--colour", "red", "--out", str(out)]) == 1
    assert not out.exists()


def test_invalid_parameter(tmp_path):
    out = tmp_path / "x.ppm"
    assert main(["carpet", "--L", "-1", "--out", str(out)]) == 1
    assert not out.exists()


def test_nmax_and_tail_tol_are_exclusive():
    assert main(["carpet", "--nmax", "8", "--tail-tol", "1e-6"]) == 1


# ==================== 连续地毯 ====================
def test_carpet_default_ppm(tmp_path, capsys):
    out = tmp_path / "fig1.ppm"
    assert main(["carpet", "--format", "ppm", "--out", str(out)]) == 0
    assert out.read_bytes().startswith(b"P6\n512 512\n255\n")
    assert len(out.read_bytes()) == len(b"P6\n512 512\n255\n") + 512 * 512 * 3
    meta = Path(f"{out}.meta").read_text(encoding="utf-8")
    assert "# command: carpet" in meta
    fields = parse_fields(capsys.readouterr().out)
    assert int(fields["nmax"]) <= 128


def test_carpet_csv_is_reproducible(tmp_path):
    out = tmp_path / "carpet.csv"
    argv = ["carpet", "--nx", "16", "--nt", "8", "--nmax", "64", "--format", "csv", "--out", str(out)]
    digests = set()
    for _ in range(3):
        assert main(argv) == 0
        digests.add(hashlib.sha256(out.read_bytes()).hexdigest())
    assert len(digests) == 1
    values, meta = read_csv_field(out)
    assert values.shape == (16, 8)
    assert meta["nmax_used"] == "64"


def run_three_times(argv, outputs):
    """同一命令跑三次，返回每个输出文件的摘要集合"""
    digests = {path: set() for path in outputs}
    for _ in range(3):
        assert main(argv) == 0
        for path in outputs:
            digests[path].add(hashlib.sha256(Path(path).read_bytes()).hexdigest())
    return digests


@pytest.mark.parametrize("name,argv", [
    ("carpet.ppm", ["carpet", "--nx", "16", "--nt", "8", "--nmax", "64"]),
    ("canals.ppm", ["canals", "--terms", "background_plus", "--k-min", "0", "--k-max", "0",
                    "--j-min", "-5", "--j-max", "5", "--nx", "16", "--nt", "8"]),
    ("discrete.ppm", ["discrete", "--sites", "32", "--nt", "8"]),
])
def test_ppm_outputs_are_reproducible(tmp_path, name, argv):
    out = tmp_path / name
    digests = run_three_times([*argv, "--format", "ppm", "--out", str(out)],
                              [out, Path(f"{out}.meta")])
    assert all(len(found) == 1 for found in digests.values())


def test_fractional_profile_is_reproducible(tmp_path):
    out = tmp_path / "profile.csv"
    argv = ["fractional", "--alpha", "3", "--beta", "8", "--nx", "257", "--compare",
            "--nmax", "64", "--out", str(out)]
    assert len(run_three_times(argv, [out])[out]) == 1


def test_emit_field_follows_render_spec(tmp_path):
    field = CarpetField(grid=SpaceTimeGrid(nx=2, nt=2, x_lo=0.0, x_hi=1.0, t_lo=0.0, t_hi=1.0),
                        values=[[0.0, 1.0], [0.5, 0.25]])
    quantum_carpet.emit_field(field, tmp_path / "f.csv", "csv", {"command": "test"})
    values, _ = read_csv_field(tmp_path / "f.csv")
    assert values.shape == (2, 2)
    quantum_carpet.emit_field(field, tmp_path / "f.ppm", "ppm", {"command": "test"})
    assert (tmp_path / "f.ppm").read_bytes().startswith(b"P6\n2 2\n255\n")
    with pytest.raises(InvalidParameterError):
        quantum_carpet.emit_field(field, tmp_path / "f.png", "png", {"command": "test"})
    assert not (tmp_path / "f.png").exists()


def test_discrete_t_max_from_config(tmp_path, monkeypatch, capsys):
    config = get_config_manager().config
    monkeypatch.setitem(config, "discrete", {**config["discrete"], "t_max": 0.5})
    out = tmp_path / "d.csv"
    assert main(["discrete", "--sites", "8", "--nt", "4", "--format", "csv", "--out", str(out)]) == 0
    fields = parse_fields(capsys.readouterr().out)
    expected = 0.5 * 4.0 * 9 ** 2 / math.pi
    assert math.isclose(float(fields["t_max_over_t0"]), expected, rel_tol=1e-14)


def test_numeric_failure_exit_code(tmp_path, monkeypatch):
    def failing(*args, **kwargs):
        raise NumericAccuracyError("quadrature did not converge")

    monkeypatch.setattr(quantum_carpet, "choose_nmax", failing)
    assert main(["carpet", "--nx", "8", "--nt", "4", "--out", str(tmp_path / "x.ppm")]) == 2


def test_output_error_exit_code(tmp_path):
    blocker = tmp_path / "blocker"
    blocker.write_text("x")
    argv = ["carpet", "--nx", "8", "--nt", "4", "--nmax", "16", "--out", str(blocker / "x.ppm")]
    assert main(argv) == 1


# ==================== 分数复原 ====================
def test_fractional_compare(tmp_path, capsys):
    out = tmp_path / "profile.csv"
    assert main(["fractional", "--alpha", "5", "--beta", "6", "--compare", "--out", str(out)]) == 0
    fields = parse_fields(capsys.readouterr().out)
    assert fields["packets"] == "6"
    assert float(fields["reconstruction_error"]) < 1e-6
    assert math.isclose(float(fields["t_over_T"]), 5 / 12, rel_tol=1e-15)
    header = [line for line in out.read_text(encoding="utf-8").splitlines()
              if not line.startswith("# ")][0]
    assert header == "x,reconstruction,direct"


def test_fractional_reduces_alpha(capsys):
    assert main(["fractional", "--alpha", "13", "--beta", "6"]) == 0
    assert parse_fields(capsys.readouterr().out)["alpha"] == "1"


# ==================== 渠道分解 ====================
def test_canals_explicit_ranges(tmp_path):
    out = tmp_path / "i00.csv"
    argv = ["canals", "--terms", "interference", "--j-min", "0", "--j-max", "0",
            "--k-min", "0", "--k-max", "0", "--nx", "16", "--nt", "4", "--format", "csv",
            "--out", str(out)]
    assert main(argv) == 0
    values, meta = read_csv_field(out)
    assert meta["signed"] == "true"
    assert values.shape == (16, 4)
    assert (values[:, 0] == values[:, 3]).all()


def test_canals_lines_ppm(tmp_path):
    out = tmp_path / "lines.ppm"
    assert main(["canals", "--terms", "lines", "--nx", "32", "--nt", "16", "--out", str(out)]) == 0
    assert out.read_bytes().startswith(b"P6\n16 32\n255\n")


def test_canals_auto_conflict(tmp_path):
    out = tmp_path / "x.ppm"
    assert main(["canals", "--auto", "--j-min", "0", "--j-max", "1", "--out", str(out)]) == 1
    assert not out.exists()


def test_canals_half_range(tmp_path):
    assert main(["canals", "--j-min", "0", "--out", str(tmp_path / "x.ppm")]) == 1


# ==================== 离散链 ====================
def test_discrete_compare(tmp_path, capsys):
    out = tmp_path / "discrete.csv"
    argv = ["discrete", "--nt", "8", "--t-max", "0.002", "--map-from-continuous", "--compare",
            "--nmax", "128", "--format", "csv", "--out", str(out)]
    assert main(argv) == 0
    text = capsys.readouterr().out
    correlations = [float(line.rsplit(": ", 1)[1]) for line in text.splitlines()
                    if line.startswith("correlation")]
    assert len(correlations) == 3
    assert min(correlations) > 0.99
    values, _ = read_csv_field(out)
    assert values.shape == (150, 8)


def test_revival_scan_wide_packet(capsys):
    assert main(["revival-scan", *WIDE_PACKET, "--window", "0.05"]) == 0
    fields = parse_fields(capsys.readouterr().out)
    assert abs(float(fields["relative_offset"])) < 0.01
    assert float(fields["fidelity_peak"]) > 0.99


def test_revival_scan_bad_window():
    assert main(["revival-scan", "--window", "0"]) == 1


# ==================== 图集与清理 ====================
def test_figures(tmp_path, monkeypatch):
    config = get_config_manager().config
    monkeypatch.setitem(config, "grid", {"nx": 32, "nt": 16, "t_max": 1.0})
    monkeypatch.setitem(config, "canals", {"n_sigma": 8.0, "nx": 32, "nt": 16, "line_j_extent": 4})
    monkeypatch.setitem(config, "discrete", {**config["discrete"], "nt": 16})

    out_dir = tmp_path / "figures"
    assert main(["figures", "--out-dir", str(out_dir)]) == 0
    expected = [
        "fig1_carpet.ppm", "fig2_narrow_carpet.ppm", "fig3_fractional_3_8.csv",
        "fig4b_canal_lines.ppm", "fig5a_background_plus_k0.ppm",
        "fig5b_background_minus_k1.ppm", "fig6a_interference_k0.ppm",
        "fig6b_interference_j-3.ppm", "fig7_discrete.ppm",
    ]
    for name in expected:
        assert (out_dir / name).exists(), name
    assert (out_dir / "fig7_discrete.ppm").read_bytes().startswith(b"P6\n16 150\n255\n")
    meta = Path(f"{out_dir / 'fig5a_background_plus_k0.ppm'}.meta").read_text(encoding="utf-8")
    assert "# norm_value:" in meta


def test_clean(tmp_path, capsys):
    stale = tmp_path / "carpets" / "old.ppm"
    stale.parent.mkdir(parents=True)
    stale.write_bytes(b"P6")
    assert main(["clean", "--output-root", str(tmp_path)]) == 0
    assert not stale.exists()
    assert capsys.readouterr().out.count("cleaned: ") == 5


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
