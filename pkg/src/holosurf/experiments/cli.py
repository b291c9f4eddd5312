"""Command-line entry point: ``holosurf <subcommand> [--config FILE] [--key value ...]``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from ..coupling import coupling_matrix, transfer_matrix
from ..errors import HolosurfError
from ..geometry import build_ura
from ..radiation import spherical_quadrature
from .config import SUBCOMMANDS, parse_config
from .runners import _pattern, run
from .table import write_matrix_csv

SCHEMAS = {
    "coupling": "pattern,distance,re_c,im_c  (axis Y|Z)\n"
                "pattern,t_y,t_z,re_c,im_c  (axis YZ)",
    "gain-spacing": "pattern,target,L,d,N,G_conv_dB,G_opt_dB,retained_count",
    "gain-direction": "pattern,angle_deg,G_conv_dB@<d>,G_opt_dB@<d>,... (one pair per spacing)",
    "pattern-cut": "phi_deg,<pattern>|<target>|d=<d>|<conv|opt>,...  (dB)\n"
                   "last row: zero_point_beamwidth_deg per column (nan if no deep null)",
    "aperture": "L,target,pattern,G_opt_dB@<coarse>,G_opt_dB@<dense>,delta_dB",
    "csi-mc": "pattern,sigma_deg,G_conv_dB@<d>,G_opt_dB@<d>,...  (dB of linear mean)",
}

EPILOG = """\
Configuration keys (file lines 'key = value', or '--key value' overrides):
  L, d, pattern (iso|dir3gpp|dipole), dipole_length (none: l = d),
  target (normal|endfire), gamma, quad_polar, quad_azimuth, axis, max_distance,
  step, sweep (horizontal|vertical), angle_step, cut_step, trials, sigma, seed.
Lists are comma-separated. Lengths are in wavelengths, angles in degrees.

Output CSV: '# key: value' metadata lines (version, config echo, wall time),
then a header row and data rows.
"""


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="holosurf",
        description="Coupling-aware beamforming sweeps for dense planar arrays.",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, metavar="SUBCOMMAND")
    for name, experiment in SUBCOMMANDS.items():
        p = sub.add_parser(
            name,
            help=f"run {experiment.value}",
            description=f"Run {experiment.value}.\n\nCSV columns:\n  "
                        + SCHEMAS[name].replace("\n", "\n  "),
            epilog=EPILOG,
            formatter_class=argparse.RawDescriptionHelpFormatter,
        )
        p.add_argument("--config", type=Path, help="key = value configuration file")
        p.add_argument("--out", type=Path, help="write CSV here instead of stdout")
    p = sub.add_parser(
        "export-matrix",
        help="dump the coupling or transfer matrix of a URA",
        description="Write C or A for one URA as row-major 're,im' pairs.",
    )
    p.add_argument("--which", choices=("C", "A"), default="C")
    p.add_argument("--L", type=float, required=True)
    p.add_argument("--d", type=float, required=True)
    p.add_argument("--pattern", default="iso")
    p.add_argument("--dipole-length", type=float)
    p.add_argument("--gamma", type=float, default=1e-12)
    p.add_argument("--quad-polar", type=int, default=256)
    p.add_argument("--quad-azimuth", type=int, default=512)
    p.add_argument("--out", type=Path)
    return parser


def _overrides(extra: List[str]) -> dict:
    """Turn ``--key value`` tokens into a dict of raw strings."""
    out = {}
    i = 0
    while i < len(extra):
        tok = extra[i]
        if not tok.startswith("--") or i + 1 >= len(extra):
            raise HolosurfError(f"expected '--key value', got {tok!r}")
        out[tok[2:].replace("-", "_")] = extra[i + 1]
        i += 2
    return out


def _emit(text: str, out: Optional[Path]):
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def _export_matrix(args) -> str:
    from .config import SweepConfig, Experiment

    cfg = SweepConfig(Experiment.GAIN_VS_SPACING, L=args.L, d=args.d, pattern=args.pattern,
                      dipole_length=args.dipole_length, gamma=args.gamma,
                      quad_polar=args.quad_polar, quad_azimuth=args.quad_azimuth)
    geom = build_ura(args.L, args.d)
    pattern = _pattern(cfg, args.pattern, args.d)
    C = coupling_matrix(geom, pattern, spherical_quadrature(args.quad_polar, args.quad_azimuth))
    matrix = C.entries if args.which == "C" else transfer_matrix(C, args.gamma).entries
    return write_matrix_csv(matrix)


def main(argv: Optional[List[str]] = None) -> int:
    parser = _parser()
    args, extra = parser.parse_known_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    try:
        if args.command == "export-matrix":
            if extra:
                raise HolosurfError(f"unrecognized arguments: {' '.join(extra)}")
            _emit(_export_matrix(args), args.out)
            return 0
        text = args.config.read_text() if args.config else ""
        cfg = parse_config(text, _overrides(extra), SUBCOMMANDS[args.command])
        table = run(cfg)
        _emit(table.to_csv(), args.out)
        return 0
    except (HolosurfError, OSError, ValueError) as exc:
        print(f"holosurf: error: {exc}", file=sys.stderr)
        return 2
    except MemoryError:
        print("holosurf: error: out of memory; reduce L/d", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
