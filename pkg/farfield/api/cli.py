"""
Command-line surface: synth, propagate, compare, aperture-study, fresnel
"""
import argparse
from pathlib import Path
from typing import Callable, Dict, List

import numpy as np

from farfield.core.config import Settings
from farfield.core.exceptions import LatticeMismatchError, UsageError
from farfield.core.logging import get_logger
from farfield.models.field import CylindricalBasis, FarFieldRequest, LineField, PlanarField
from farfield.models.grid import Quadrature
from farfield.models.scenario import Method, PairKind
from farfield.services import harness
from farfield.services.field_model import direct_field, fresnel_parameter
from farfield.utils import csvio
from farfield.utils.fieldfile import read_field, write_field

logger = get_logger(__name__)


class CommandParser(argparse.ArgumentParser):
    """ArgumentParser that raises instead of exiting on bad usage"""

    def error(self, message: str):
        raise UsageError(message)


def _sizes(text: str) -> List[int]:
    try:
        sizes = [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not sizes:
        raise argparse.ArgumentTypeError("at least one subset size is required")
    return sizes


def _spectral_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--M", type=int, default=None, help="harmonics per axis (default from settings)")
    p.add_argument("--lmax", type=int, default=None, help="largest azimuthal order kept by FLS/FLT")
    p.add_argument("--kxmax-taper", type=int, default=None, dest="kxmax_taper",
                   help="cutoff taper width in lattice bins")
    p.add_argument("--no-window", action="store_true", dest="no_window",
                   help="disable the Hann window (test mode); the FPS identity round trip "
                        "is exact only on uniformly spaced grids")


def build_parser() -> argparse.ArgumentParser:
    parser = CommandParser(
        prog="farfield",
        description="Far-field prediction from near-field array measurements",
    )
    parser.add_argument("--config", type=Path, default=None, help="YAML settings file")
    parser.add_argument("--log-level", dest="log_level", default=None)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=CommandParser)

    p = sub.add_parser("synth", help="synthesize the two-source near field")
    p.add_argument("--freq", type=float, required=True)
    p.add_argument("--source", choices=[k.value for k in PairKind], default=PairKind.MONOPOLE_PAIR.value)
    p.add_argument("--kind", choices=["planar", "line"], default="planar")
    p.add_argument("--elements", type=int, choices=[21, 22], default=21)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--far-out", type=Path, default=None, dest="far_out",
                   help="analytic far field on the array x lattice at y = 0")
    p.add_argument("--zfar", type=float, default=harness.Z_FAR)
    p.add_argument("--seed", type=int, default=None)

    p = sub.add_parser("propagate", help="predict the far field from a field file")
    p.add_argument("--method", choices=[m.value.lower() for m in Method], required=True)
    p.add_argument("--in", type=Path, required=True, dest="input")
    p.add_argument("--zfar", type=float, required=True)
    p.add_argument("--out", type=Path, required=True)
    _spectral_options(p)
    p.add_argument("--quadrature", choices=[q.value for q in Quadrature], default=None)
    p.add_argument("--basis", choices=[b.value for b in CylindricalBasis],
                   default=CylindricalBasis.ASYMPTOTIC.value)
    p.add_argument("--y0", type=float, default=None, help="planar input: evaluate along x at this y")
    p.add_argument("--exact", action="store_true", help="fpk: full soft-body Kirchhoff integral")
    p.add_argument("--interpolate", action="store_true", help="flt: interpolate |b| between harmonics")
    p.add_argument("--source-diameter", type=float, default=None, dest="source_diameter")
    p.add_argument("--d-yz", type=float, default=None, dest="diameter_yz",
                   help="fls/flt: source extent across the array, enables the azimuthal Fresnel check")

    p = sub.add_parser("compare", help="score a predicted curve against a reference curve")
    p.add_argument("--pred", type=Path, required=True)
    p.add_argument("--oracle", type=Path, required=True)
    p.add_argument("--report", type=Path, required=True)
    p.add_argument("--method", choices=[m.value.lower() for m in Method], default="fls")

    p = sub.add_parser("aperture-study", help="hold-max FLS over shorter subarrays")
    p.add_argument("--in", type=Path, required=True, dest="input")
    p.add_argument("--sizes", type=_sizes, default=list(harness.APERTURE_SIZES))
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--zfar", type=float, default=harness.Z_FAR)
    p.add_argument("--stride", type=int, default=None)
    p.add_argument("--oracle", type=Path, default=None, help="reference curve CSV")
    p.add_argument("--source-diameter", type=float, default=harness.SOURCE_DIAMETER,
                   dest="source_diameter",
                   help="subsets contribute only where they capture the source flux; 0 disables")
    p.add_argument("--report", type=Path, default=None)
    _spectral_options(p)

    p = sub.add_parser("fresnel", help="print the Fresnel parameter λR/D²")
    p.add_argument("--freq", type=float, required=True)
    p.add_argument("--c", type=float, default=None)
    p.add_argument("--R", type=float, required=True)
    p.add_argument("--D", type=float, required=True)

    return parser


def _or(value, default):
    return default if value is None else value


def run_synth(args: argparse.Namespace, settings: Settings) -> int:
    scenario = harness.chamber_scenario(
        args.freq,
        PairKind(args.source),
        n_elements=args.elements,
        sound_speed=settings.sound_speed,
    )
    seed = _or(args.seed, settings.synth_seed)
    scans = harness.synthesize_scans(scenario, seed=seed, jitter=settings.scan_gain_jitter)
    near = harness.normalize_scans(scans)
    field = near if args.kind == "planar" else harness.y0_row(near)
    write_field(field, args.out)
    logger.info("near_field_written", path=str(args.out), kind=args.kind, scenario=scenario.name)

    if args.far_out is not None:
        # Same normalization as the scans: divide by the reference reading.
        reference = direct_field(scenario.model, harness.REFERENCE_POINT)
        x = scenario.near_grid.x_coords
        far = harness.far_oracle(scenario, x, args.zfar) / reference
        csvio.write_curve(args.far_out, x, 0.0, far)
        logger.info("far_oracle_written", path=str(args.far_out), z_far=args.zfar)
    return 0


def run_propagate(args: argparse.Namespace, settings: Settings) -> int:
    field = read_field(args.input)
    method = Method(args.method.upper())
    harmonics = _or(args.M, settings.harmonics)
    windowed = settings.windowed and not args.no_window

    if isinstance(field, PlanarField):
        if method not in (Method.FPS, Method.FPK):
            raise UsageError(f"{method.value.lower()} needs a line field file")
        if args.y0 is None:
            req = FarFieldRequest.on_grid(field.grid, args.zfar)
        else:
            req = FarFieldRequest.on_line(field.grid.x_coords, args.y0, args.zfar)
        values = harness.predict_planar(
            field,
            method,
            req,
            harmonics=harmonics,
            windowed=windowed,
            quadrature=None if args.quadrature is None else Quadrature(args.quadrature),
            exact=args.exact,
            source_diameter=args.source_diameter,
            margin_factor=settings.margin_factor,
            fresnel_warn=settings.fresnel_warn,
        )
        x, y = req.x, req.y
    else:
        if method not in (Method.FLS, Method.FLT):
            raise UsageError(f"{method.value.lower()} needs a planar field file")
        x = field.grid.x_coords
        y = field.grid.y0
        values = harness.predict_line(
            field,
            method,
            x,
            args.zfar,
            harmonics=harmonics,
            windowed=windowed,
            l_max=_or(args.lmax, settings.l_max),
            taper_bins=_or(args.kxmax_taper, settings.taper_bins),
            basis=CylindricalBasis(args.basis),
            interpolate=args.interpolate,
            source_diameter=args.source_diameter,
            fresnel_warn=settings.fresnel_warn,
            diameter_yz=args.diameter_yz,
        )
    csvio.write_curve(args.out, x, y, values)
    logger.info("far_field_written", path=str(args.out), method=method.value, points=len(values))
    return 0


def run_compare(args: argparse.Namespace, settings: Settings) -> int:
    px, py, pabs, _ = csvio.read_curve(args.pred)
    ox, oy, oabs, _ = csvio.read_curve(args.oracle)
    if px.shape != ox.shape or not (np.array_equal(px, ox) and np.array_equal(py, oy)):
        raise LatticeMismatchError("predicted and reference curves use different lattices")
    report = harness.compare_far_field(pabs, oabs, Method(args.method.upper()), x_coords=px)
    csvio.write_reports(args.report, [report])
    print(
        f"{report.method.value}: rms_divergence={report.rms_divergence:.4f} "
        f"peak_ratio={report.peak_ratio:.4g} null_depth_db={report.null_depth_db:.1f}"
    )
    return 0


def run_aperture_study(args: argparse.Namespace, settings: Settings) -> int:
    line = read_field(args.input)
    if not isinstance(line, LineField):
        raise UsageError("aperture-study needs a line field file")
    if args.report is not None and args.oracle is None:
        raise UsageError("--report needs --oracle")

    if args.oracle is not None:
        x, _, oracle, _ = csvio.read_curve(args.oracle)
    else:
        x, oracle = line.grid.x_coords, None

    options = dict(
        harmonics=_or(args.M, settings.harmonics),
        windowed=settings.windowed and not args.no_window,
        l_max=_or(args.lmax, settings.l_max),
        taper_bins=_or(args.kxmax_taper, settings.taper_bins),
        stride=_or(args.stride, settings.aperture_stride),
        source_diameter=args.source_diameter or None,
    )
    curves = harness.hold_max_curves(line, args.sizes, x, args.zfar, **options)
    csvio.write_aperture_curves(args.out, x, line.grid.y0, curves)

    if oracle is not None:
        reports = [
            harness.compare_far_field(curves[size], oracle, Method.FLS, x_coords=x, subset_size=size)
            for size in args.sizes
        ]
        for report in reports:
            print(
                f"size {report.subset_size}: rms_divergence={report.rms_divergence:.4f} "
                f"null_depth_db={report.null_depth_db:.1f}"
            )
        if args.report is not None:
            csvio.write_reports(args.report, reports)
    return 0


def run_fresnel(args: argparse.Namespace, settings: Settings) -> int:
    c = _or(args.c, settings.sound_speed)
    if c <= 0 or args.freq <= 0:
        raise UsageError("--freq and --c must be positive")
    print(f"{fresnel_parameter(c / args.freq, args.R, args.D):.1f}")
    return 0


COMMANDS: Dict[str, Callable[[argparse.Namespace, Settings], int]] = {
    "synth": run_synth,
    "propagate": run_propagate,
    "compare": run_compare,
    "aperture-study": run_aperture_study,
    "fresnel": run_fresnel,
}
