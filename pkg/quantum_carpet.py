#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
量子地毯命令行入口
连续地毯、分数复原、高斯和、渠道分解、离散链与图集复现
"""

import sys
import math
import logging
import argparse
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

# 添加项目根目录到Python路径
project_root = Path(__file__).resolve().parent
sys.path.insert(0, str(project_root))

from src.config import get_config_manager, get_render_config_manager
from src.core.errors import (
    CarpetError, InternalConsistencyError, InvalidParameterError, NumericAccuracyError, OutputError
)
from src.core.model import SpaceTimeGrid, carpet_grid, make_packet, make_well
from src.core.eigenbasis import ModeExpansion, choose_nmax, coeffs_quadrature
from src.core.evolution import carpet, wavefunction_at
from src.core.fractional_revival import (
    count_packets, fractional_reconstruction, gauss_sweep, gauss_table, make_fraction,
    reconstruction_error, revival_time
)
from src.core.canal_decomposition import (
    TermSelection, canal_lines, density_field, figure_canal_lines, term_field
)
from src.core.discrete_chain import (
    DiscreteChain, continuum_correlation, discrete_carpet, map_time, revival_scan
)
from src.render import colorize, field_meta, write_csv, write_ppm, write_profile_csv
from src.utils import OutputCleaner, prepare_output_dir

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERIC = 2
TERM_CHOICES = ("background_plus", "background_minus", "interference", "all", "density", "lines")


class UsageError(Exception):
    """命令行用法错误"""


class CarpetArgumentParser(argparse.ArgumentParser):
    """用法错误抛异常而不是直接退出，由 main 统一映射退出码"""

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# ==================== 通用工具 ====================
def setup_logging(config) -> None:
    """日志写到标准错误，结果文件中不出现时间戳"""
    params = config.get_logging_params()
    logging.basicConfig(
        level=getattr(logging, str(params["log_level"]).upper(), logging.INFO),
        format=params["format"],
        datefmt=params["datefmt"],
        stream=sys.stderr,
    )


def run_meta(args: argparse.Namespace, **derived: Any) -> Dict[str, Any]:
    """按参数名排序回显本次命令的全部参数"""
    meta: Dict[str, Any] = {"command": args.command}
    for key in sorted(vars(args)):
        if key not in ("command", "handler"):
            meta[key] = getattr(args, key)
    meta.update(derived)
    return meta


def build_packet(args: argparse.Namespace):
    well = make_well(args.L)
    packet = make_packet(well, args.xbar, args.sx, args.pbar)
    return well, packet


def resolve_modes(args: argparse.Namespace, well, packet) -> ModeExpansion:
    """--nmax 优先，否则按 --tail-tol 选取"""
    if args.nmax is not None:
        nmax = args.nmax
    else:
        nmax = choose_nmax(well, packet, args.tail_tol, cap=args.nmax_cap,
                           nodes_per_panel=args.nodes_per_panel)
    modes = coeffs_quadrature(well, packet, nmax, args.nodes_per_panel)
    logger.info(f"模式截断 nmax={nmax}，捕获范数 {modes.captured_norm:.15f}")
    return modes


def emit_field(field, out: Path, fmt: str, meta: Dict[str, Any],
               norm_value: Optional[float] = None) -> None:
    """按 RenderSpec 的输出格式写出场；PPM 旁写 .meta"""
    spec = get_render_config_manager().get_render_spec(
        signed=field.signed, norm_value=norm_value, output_format=fmt)
    if spec.output_format == "csv":
        write_csv(field, out, meta)
        return
    write_ppm(colorize(field, spec), out, field_meta(field, meta))


def default_out(config, subdir: str, name: str) -> Path:
    return Path(config.get_full_path("output_dir")) / subdir / name


def add_packet_arguments(parser: argparse.ArgumentParser, packet: Dict[str, Any],
                         well: Dict[str, Any]) -> None:
    parser.add_argument("--L", type=float, default=well["L"], help="势阱宽度")
    parser.add_argument("--xbar", type=float, default=packet["xbar_over_L"], help="x̄/L")
    parser.add_argument("--sx", type=float, default=packet["sx_over_L"], help="s_x/L")
    parser.add_argument("--pbar", type=float, default=packet["pbar_in_hbar_over_L"], help="p̄L/ħ")


def add_mode_arguments(parser: argparse.ArgumentParser, eigen: Dict[str, Any]) -> None:
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--nmax", type=int, default=None, help="固定模式数")
    group.add_argument("--tail-tol", type=float, default=eigen["tail_tol"], help="截断尾部容差")
    parser.set_defaults(nmax_cap=eigen["nmax_cap"], nodes_per_panel=eigen["nodes_per_panel"])


# ==================== 子命令 ====================
def cmd_carpet(args: argparse.Namespace, config) -> int:
    """连续地毯（图1）"""
    well, packet = build_packet(args)
    modes = resolve_modes(args, well, packet)
    grid = carpet_grid(well, args.nx, args.nt, t_max_over_T=args.t_max)
    field = carpet(well, modes, grid, max_workers=config.get_max_workers())

    out = Path(args.out) if args.out else default_out(config, "carpets", f"carpet.{args.format}")
    emit_field(field, out, args.format, run_meta(args, nmax_used=modes.nmax), args.norm_value)
    print(f"nmax: {modes.nmax}")
    print(f"captured_norm: {modes.captured_norm!r}")
    print(f"output: {out}")
    return EXIT_OK


def cmd_fractional(args: argparse.Namespace, config) -> int:
    """分数复原（图2、图3）"""
    well, packet = build_packet(args)
    fraction = make_fraction(args.alpha, args.beta)
    table = gauss_table(fraction)
    x = np.linspace(0.0, well.L, args.nx)
    t = revival_time(fraction, well)
    reconstructed = fractional_reconstruction(well, packet, fraction, x, table)
    density = np.abs(reconstructed) ** 2

    print(f"alpha: {fraction.alpha}")
    print(f"beta: {fraction.beta}")
    print(f"t_over_T: {t / well.T!r}")
    print(f"packets: {count_packets(density, args.threshold)}")

    columns = {"reconstruction": density}
    modes = None
    if args.compare:
        modes = resolve_modes(args, well, packet)
        error = reconstruction_error(well, packet, modes, fraction, x)
        columns["direct"] = np.abs(wavefunction_at(well, modes, x, t)) ** 2
        print(f"nmax: {modes.nmax}")
        print(f"reconstruction_error: {error:.6e}")

    if args.out:
        derived = {"nmax_used": modes.nmax} if modes is not None else {}
        write_profile_csv(x, columns, args.out, run_meta(args, **derived))
        print(f"output: {args.out}")
    return EXIT_OK


def cmd_gauss_sum(args: argparse.Namespace, config) -> int:
    """高斯和表或穷举扫描"""
    if args.sweep is not None:
        report = gauss_sweep(args.sweep, max_workers=config.get_max_workers())
        print(f"beta_max: {report.beta_max}")
        print(f"pairs_checked: {report.pairs_checked}")
        print(f"sums_checked: {report.sums_checked}")
        print(f"max_deviation: {report.max_deviation:.3e}")
        print(f"worst_case (alpha, beta, n): {report.worst_case}")
        for key in sorted(report.by_parity):
            print(f"parity {key}: {report.by_parity[key]:.3e}")
        print(f"violations: {len(report.violations)}")
        return EXIT_OK if report.passed else EXIT_NUMERIC

    fraction = make_fraction(args.alpha, args.beta)
    table = gauss_table(fraction)
    print("n,re_S,im_S,abs_S,theta")
    for n in range(1, fraction.beta + 1):
        value = table.values[n - 1]
        print(",".join([str(n), "%.17g" % value.real, "%.17g" % value.imag,
                        "%.17g" % abs(value), "%.17g" % table.phase(n)]))
    return EXIT_OK


def _canal_ranges(args: argparse.Namespace):
    explicit = [args.j_min, args.j_max, args.k_min, args.k_max]
    if args.auto and any(v is not None for v in explicit):
        raise InvalidParameterError("--auto 不能与显式 j/k 范围同时使用")
    j_range = None
    k_range = None
    if args.j_min is not None or args.j_max is not None:
        if args.j_min is None or args.j_max is None:
            raise InvalidParameterError("--j-min 与 --j-max 必须同时给出")
        j_range = (args.j_min, args.j_max)
    if args.k_min is not None or args.k_max is not None:
        if args.k_min is None or args.k_max is None:
            raise InvalidParameterError("--k-min 与 --k-max 必须同时给出")
        k_range = (args.k_min, args.k_max)
    return j_range, k_range


def cmd_canals(args: argparse.Namespace, config) -> int:
    """渠道分解单项场（图4–图6）"""
    well, packet = build_packet(args)
    j_range, k_range = _canal_ranges(args)
    grid = carpet_grid(well, args.nx, args.nt, t_max_over_T=args.t_max)

    if args.terms == "lines":
        if j_range is None and k_range is None:
            field = figure_canal_lines(well, grid, config.get_canal_params()["line_j_extent"])
        elif j_range is None or k_range is None:
            raise InvalidParameterError("直线族需要同时给出 j 与 k 范围，或都不给")
        else:
            field = canal_lines(well, j_range, k_range, grid)
    elif args.terms == "density":
        field = density_field(well, packet, grid, args.n_sigma)
    else:
        selection = TermSelection(kind=args.terms, j_range=j_range, k_range=k_range)
        field = term_field(well, packet, selection, grid, args.n_sigma)

    out = Path(args.out) if args.out else default_out(config, "canals", f"{args.terms}.{args.format}")
    emit_field(field, out, args.format, run_meta(args), args.norm_value)
    print(f"peak: {float(np.max(np.abs(field.values)))!r}")
    print(f"output: {out}")
    return EXIT_OK


def cmd_discrete(args: argparse.Namespace, config) -> int:
    """离散链地毯（图7）"""
    well, packet = build_packet(args)
    chain = DiscreteChain(N=args.sites, J=args.J)
    if args.t_max is None:
        # 配置值以复原周期 T_d 为单位，映射与否结果相同
        t_max = config.get_discrete_params()["t_max"] * chain.revival_period
    elif args.map_from_continuous:
        t_max = map_time(chain, well, args.t_max * well.T)
    else:
        t_max = args.t_max * chain.t0
    if not t_max > 0:
        raise InvalidParameterError(f"--t-max 必须为正，当前: {args.t_max}")

    times = np.linspace(0.0, t_max, args.nt)
    field = discrete_carpet(chain, well, packet, times, max_workers=config.get_max_workers())
    print(f"t_max_over_t0: {t_max / chain.t0!r}")

    if args.compare:
        modes = resolve_modes(args, well, packet)
        for fraction_of_T in args.compare_at:
            r = continuum_correlation(chain, well, packet, modes, fraction_of_T * well.T)
            print(f"correlation t={fraction_of_T!r}T: {r:.6f}")

    out = Path(args.out) if args.out else default_out(config, "discrete", f"discrete.{args.format}")
    emit_field(field, out, args.format, run_meta(args, t_max_used=t_max), args.norm_value)
    print(f"output: {out}")
    return EXIT_OK


def cmd_revival_scan(args: argparse.Namespace, config) -> int:
    """在映射的复原时间附近扫描保真度"""
    well, packet = build_packet(args)
    chain = DiscreteChain(N=args.sites, J=args.J)
    center = map_time(chain, well, well.T)
    if not args.window > 0:
        raise InvalidParameterError(f"--window 必须为正，当前: {args.window}")
    window = (center * (1.0 - args.window), center * (1.0 + args.window))
    t_peak, fidelity_peak = revival_scan(chain, well, packet, window, args.samples)
    print(f"expected_over_t0: {center / chain.t0!r}")
    print(f"t_peak_over_t0: {t_peak / chain.t0:.6f}")
    print(f"relative_offset: {(t_peak - center) / center:.6e}")
    print(f"fidelity_peak: {fidelity_peak:.9f}")
    return EXIT_OK


def cmd_figures(args: argparse.Namespace, config) -> int:
    """复现全部图像到 --out-dir"""
    out_dir = prepare_output_dir(args.out_dir)
    well = make_well(args.L)
    packet_cfg = config.get_packet_params()
    narrow_cfg = config.get_packet_params(narrow=True)
    packet_default = make_packet(well, packet_cfg["xbar_over_L"], packet_cfg["sx_over_L"],
                                  packet_cfg["pbar_in_hbar_over_L"])
    narrow = make_packet(well, narrow_cfg["xbar_over_L"], narrow_cfg["sx_over_L"],
                         narrow_cfg["pbar_in_hbar_over_L"])
    grid_cfg = config.get_grid_params()
    canal_cfg = config.get_canal_params()
    eigen_cfg = config.get_eigenbasis_params()
    workers = config.get_max_workers()
    base_meta = {"command": "figures", "L": args.L}

    def expand(packet):
        nodes = eigen_cfg["nodes_per_panel"]
        nmax = choose_nmax(well, packet, eigen_cfg["tail_tol"], cap=eigen_cfg["nmax_cap"],
                           nodes_per_panel=nodes)
        return coeffs_quadrature(well, packet, nmax, nodes)

    def write(name: str, field, meta: Dict[str, Any], norm_value: Optional[float] = None):
        emit_field(field, out_dir / name, "ppm", {**base_meta, "figure": name, **meta}, norm_value)
        print(f"output: {out_dir / name}")

    # 图1、图2：两种宽度的完整地毯
    for name, packet in (("fig1_carpet.ppm", packet_default), ("fig2_narrow_carpet.ppm", narrow)):
        modes = expand(packet)
        grid = carpet_grid(well, grid_cfg["nx"], grid_cfg["nt"], t_max_over_T=1.0)
        write(name, carpet(well, modes, grid, max_workers=workers),
              {**packet.to_dict(), "nmax": modes.nmax})

    # 图3：α/β = 3/8 的重构与直接演化剖面
    fraction = make_fraction(3, 8)
    modes = expand(narrow)
    x = np.linspace(0.0, well.L, 2049)
    t = revival_time(fraction, well)
    profile = {
        "reconstruction": np.abs(fractional_reconstruction(well, narrow, fraction, x)) ** 2,
        "direct": np.abs(wavefunction_at(well, modes, x, t)) ** 2,
    }
    write_profile_csv(x, profile, out_dir / "fig3_fractional_3_8.csv",
                      {**base_meta, "alpha": 3, "beta": 8, "nmax": modes.nmax, **narrow.to_dict()})
    print(f"output: {out_dir / 'fig3_fractional_3_8.csv'}")

    canal_grid = carpet_grid(well, canal_cfg["nx"], canal_cfg["nt"], t_max_over_T=1.0)
    n_sigma = canal_cfg["n_sigma"]

    # 图4(b)：x̃ = 0 直线族
    write("fig4b_canal_lines.ppm", figure_canal_lines(well, canal_grid, canal_cfg["line_j_extent"]),
          {"j_extent": canal_cfg["line_j_extent"]})

    # 图5：背景项，两幅共用色标
    backgrounds = {
        "fig5a_background_plus_k0.ppm": term_field(
            well, packet_default, TermSelection("background_plus", k_range=(0, 0)), canal_grid, n_sigma),
        "fig5b_background_minus_k1.ppm": term_field(
            well, packet_default, TermSelection("background_minus", k_range=(1, 1)), canal_grid, n_sigma),
    }
    shared = max(float(np.max(np.abs(f.values))) for f in backgrounds.values()) or 1.0
    for name, field in backgrounds.items():
        write(name, field, {**packet_default.to_dict(), "n_sigma": n_sigma, "norm_value": shared}, shared)

    # 图6：干涉项的斜率（k = 0）与截距（j = −3）
    interference = {
        "fig6a_interference_k0.ppm": TermSelection("interference", k_range=(0, 0)),
        "fig6b_interference_j-3.ppm": TermSelection("interference", j_range=(-3, -3)),
    }
    for name, selection in interference.items():
        write(name, term_field(well, packet_default, selection, canal_grid, n_sigma),
              {**packet_default.to_dict(), "n_sigma": n_sigma})

    # 图7：N = 150 离散地毯，时间轴映射到 [0, T]
    discrete_cfg = config.get_discrete_params()
    chain = DiscreteChain(N=discrete_cfg["sites"], J=discrete_cfg["J"])
    times = np.linspace(0.0, map_time(chain, well, well.T), discrete_cfg["nt"])
    write("fig7_discrete.ppm", discrete_carpet(chain, well, packet_default, times, max_workers=workers),
          {**packet_default.to_dict(), "sites": chain.N, "J": chain.J})
    return EXIT_OK


def cmd_clean(args: argparse.Namespace, config) -> int:
    """清空输出根目录下的分类子目录"""
    root = Path(args.output_root) if args.output_root else Path(config.get_full_path("output_dir"))
    cleaner = OutputCleaner(root)
    if not cleaner.clean_all_outputs():
        raise OutputError(str(root), "部分目录清理失败")
    for directory in cleaner.get_output_directories():
        print(f"cleaned: {directory}")
    return EXIT_OK


# ==================== 解析器 ====================
def build_parser(config) -> CarpetArgumentParser:
    """构建命令行解析器，默认值取自 src/config.json"""
    well = config.get_well_params()
    packet = config.get_packet_params()
    narrow = config.get_packet_params(narrow=True)
    grid = config.get_grid_params()
    eigen = config.get_eigenbasis_params()
    canals = config.get_canal_params()
    discrete = config.get_discrete_params()
    render = config.get_render_params()

    parser = CarpetArgumentParser(
        prog="quantum_carpet.py",
        description="量子地毯模拟与解析分解互验",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog='''
使用示例:
  python quantum_carpet.py carpet --format ppm --out fig1.ppm
  python quantum_carpet.py fractional --alpha 5 --beta 6 --compare
  python quantum_carpet.py gauss-sum --alpha 1 --beta 2
  python quantum_carpet.py gauss-sum --sweep 50
  python quantum_carpet.py canals --terms interference --k-min 0 --k-max 0
  python quantum_carpet.py discrete --sites 150 --map-from-continuous
  python quantum_carpet.py figures --out-dir output/figures
  python quantum_carpet.py clean
        '''
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    def output_arguments(sub):
        sub.add_argument("--out", type=str, default=None, help="输出文件路径")
        sub.add_argument("--format", choices=["ppm", "csv"], default=render["format"], help="输出格式")
        sub.add_argument("--norm-value", type=float, default=None, help="固定归一化值")

    sub = subparsers.add_parser("carpet", help="连续地毯")
    add_packet_arguments(sub, packet, well)
    add_mode_arguments(sub, eigen)
    sub.add_argument("--nx", type=int, default=grid["nx"])
    sub.add_argument("--nt", type=int, default=grid["nt"])
    sub.add_argument("--t-max", type=float, default=grid["t_max"], help="以 T 为单位")
    output_arguments(sub)
    sub.set_defaults(handler=cmd_carpet)

    sub = subparsers.add_parser("fractional", help="分数复原")
    add_packet_arguments(sub, narrow, well)
    add_mode_arguments(sub, eigen)
    sub.add_argument("--alpha", type=int, default=1)
    sub.add_argument("--beta", type=int, default=2)
    sub.add_argument("--nx", type=int, default=2049)
    sub.add_argument("--threshold", type=float, default=0.01, help="计数阈值（相对峰值）")
    sub.add_argument("--compare", action="store_true", help="与直接演化比较")
    sub.add_argument("--out", type=str, default=None, help="剖面 CSV 路径")
    sub.set_defaults(handler=cmd_fractional)

    sub = subparsers.add_parser("gauss-sum", help="高斯和")
    sub.add_argument("--alpha", type=int, default=1)
    sub.add_argument("--beta", type=int, default=2)
    sub.add_argument("--sweep", type=int, default=None, metavar="BETA_MAX", help="穷举检查 |S| = √β")
    sub.set_defaults(handler=cmd_gauss_sum)

    sub = subparsers.add_parser("canals", help="渠道分解")
    add_packet_arguments(sub, packet, well)
    sub.add_argument("--terms", choices=TERM_CHOICES, default="all")
    sub.add_argument("--j-min", type=int, default=None)
    sub.add_argument("--j-max", type=int, default=None)
    sub.add_argument("--k-min", type=int, default=None)
    sub.add_argument("--k-max", type=int, default=None)
    sub.add_argument("--auto", action="store_true", help="自动截断范围")
    sub.add_argument("--n-sigma", type=float, default=canals["n_sigma"])
    sub.add_argument("--nx", type=int, default=canals["nx"])
    sub.add_argument("--nt", type=int, default=canals["nt"])
    sub.add_argument("--t-max", type=float, default=1.0, help="以 T 为单位")
    output_arguments(sub)
    sub.set_defaults(handler=cmd_canals)

    sub = subparsers.add_parser("discrete", help="离散链地毯")
    add_packet_arguments(sub, packet, well)
    add_mode_arguments(sub, eigen)
    sub.add_argument("--sites", type=int, default=discrete["sites"])
    sub.add_argument("--J", type=float, default=discrete["J"])
    sub.add_argument("--t-max", type=float, default=None,
                     help="映射时以 T 为单位，否则以 t0 = ħ/J 为单位；缺省取配置 discrete.t_max·T_d")
    sub.add_argument("--nt", type=int, default=discrete["nt"])
    sub.add_argument("--map-from-continuous", action="store_true", help="时间轴按 T 映射")
    sub.add_argument("--compare", action="store_true", help="输出与连续密度的相关系数")
    sub.add_argument("--compare-at", type=float, nargs="+", default=[0.0, 0.001, 0.002],
                     help="比较时刻，以 T 为单位")
    output_arguments(sub)
    sub.set_defaults(handler=cmd_discrete)

    sub = subparsers.add_parser("revival-scan", help="离散复原扫描")
    add_packet_arguments(sub, packet, well)
    sub.add_argument("--sites", type=int, default=discrete["sites"])
    sub.add_argument("--J", type=float, default=discrete["J"])
    sub.add_argument("--window", type=float, default=discrete["scan_window"],
                     help="相对半宽，围绕映射的 T")
    sub.add_argument("--samples", type=int, default=discrete["scan_samples"])
    sub.set_defaults(handler=cmd_revival_scan)

    sub = subparsers.add_parser("figures", help="复现全部图像")
    sub.add_argument("--out-dir", type=str, required=True)
    sub.add_argument("--L", type=float, default=well["L"])
    sub.set_defaults(handler=cmd_figures)

    sub = subparsers.add_parser("clean", help="清空输出目录")
    sub.add_argument("--output-root", type=str, default=None, help="默认取配置 paths.output_dir")
    sub.set_defaults(handler=cmd_clean)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """主函数，返回退出码"""
    config = get_config_manager()
    setup_logging(config)
    parser = build_parser(config)

    try:
        args = parser.parse_args(argv)
        return args.handler(args, config)
    except UsageError as e:
        print(f"用法错误: {e}", file=sys.stderr)
        return EXIT_USAGE
    except InvalidParameterError as e:
        print(f"参数错误: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericAccuracyError, InternalConsistencyError) as e:
        print(f"数值错误: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except OutputError as e:
        print(f"输出错误: {e}", file=sys.stderr)
        return EXIT_USAGE
    except CarpetError as e:
        print(f"错误: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except KeyboardInterrupt:
        print("\n用户中断", file=sys.stderr)
        return 130


if __name__ == "__main__":
    sys.exit(main())
