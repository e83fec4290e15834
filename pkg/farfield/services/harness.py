"""
Synthetic reproduction of the two-loudspeaker experiment

Builds the chamber geometry, synthesizes line scans normalized by an immobile
reference microphone, runs the four prediction methods and scores them against
the analytic far field.
"""
import math
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from farfield.core.exceptions import (
    ConfigurationError,
    DomainError,
    LatticeMismatchError,
    NormalizationError,
)
from farfield.core.logging import get_logger
from farfield.models.field import (
    CutoffFilter,
    CylindricalBasis,
    FarFieldRequest,
    LineField,
    PlanarField,
)
from farfield.models.grid import LineGrid, PlanarGrid, Quadrature, SpectralLattice
from farfield.models.scenario import ComparisonReport, Method, PairKind, ScanRecord, Scenario
from farfield.models.source import Medium
from farfield.services.field_model import (
    antiphase_pair,
    direct_field,
    direct_field_many,
    fresnel_parameter,
    sample_line,
)
from farfield.services.linear import (
    aperture_coverage,
    flt_curve,
    fls_decompose,
    fls_propagate,
    hold_max,
    subarray_sweep,
    yz_fresnel_check,
)
from farfield.services.planar import fpk_predict, fps_decompose, fps_propagate, kirchhoff_integral

logger = get_logger(__name__)

# Chamber geometry
SOURCE_DIAMETER = 0.49
Z_NEAR = 0.28
Z_FAR = 2.03
ELEMENT_PITCH = 0.10
PRESET_FREQUENCIES = (500.0, 1500.0)
REFERENCE_POINT = (0.6, 0.9, Z_NEAR)
FAR_LINE_POINTS = 41
APERTURE_SIZES = (6, 10, 14, 22)


def scan_positions() -> np.ndarray:
    """y of the eleven line scans: 0.123 m steps below y = 0, 0.120 m above"""
    return np.concatenate([np.linspace(-0.615, 0.0, 6), np.linspace(0.12, 0.60, 5)])


def array_positions(n_elements: int) -> np.ndarray:
    """x of the microphones: 21 spanning ±1 m or 22 spanning ±1.05 m"""
    if n_elements not in (21, 22):
        raise ConfigurationError(f"array presets have 21 or 22 elements, got {n_elements}")
    half = 0.5 * ELEMENT_PITCH * (n_elements - 1)
    return np.linspace(-half, half, n_elements)


def chamber_scenario(
    frequency: float,
    source_kind: PairKind = PairKind.MONOPOLE_PAIR,
    n_elements: int = 21,
    sound_speed: float = 300.0,
    dipole_axis: Sequence[float] = (0.0, 0.0, 1.0),
) -> Scenario:
    """Antiphase pair D = 0.49 m at z = 0, near grid at 0.28 m, far line at 2.03 m"""
    if float(frequency) not in PRESET_FREQUENCIES:
        logger.warning("nonpreset_frequency", frequency=frequency, presets=list(PRESET_FREQUENCIES))
    model = antiphase_pair(
        source_kind,
        SOURCE_DIAMETER,
        frequency,
        medium=Medium(sound_speed=sound_speed),
        dipole_axis=dipole_axis,
    )
    near_grid = PlanarGrid(
        x_coords=array_positions(n_elements),
        y_coords=scan_positions(),
        z_plane=Z_NEAR,
    )
    far_line = LineGrid(
        x_coords=np.linspace(-1.0, 1.0, FAR_LINE_POINTS),
        y0=0.0,
        z_plane=Z_FAR,
    )
    return Scenario(
        name=f"{PairKind(source_kind).value}-{frequency:g}Hz-{n_elements}el",
        model=model,
        near_grid=near_grid,
        far_line=far_line,
        frequency=frequency,
        source_diameter=SOURCE_DIAMETER,
    )


def scenario_fresnel(scenario: Scenario) -> Tuple[float, float]:
    """Fresnel parameters at the near plane and the far line"""
    wavelength = scenario.model.wavelength
    return (
        fresnel_parameter(wavelength, scenario.z_near, scenario.source_diameter),
        fresnel_parameter(wavelength, scenario.z_far, scenario.source_diameter),
    )


def far_oracle(
    scenario: Scenario,
    x_points: Optional[Iterable[float]] = None,
    z_far: Optional[float] = None,
    y0: float = 0.0,
) -> np.ndarray:
    """Analytic far field along y = y0 (defaults to the scenario far line)"""
    x = scenario.far_line.x_coords if x_points is None else np.asarray(list(x_points), dtype=float)
    z = scenario.z_far if z_far is None else z_far
    points = np.stack([x, np.full(x.size, y0), np.full(x.size, z)], axis=1)
    return direct_field_many(scenario.model, points)


def synthesize_scans(
    scenario: Scenario,
    seed: Optional[int] = None,
    jitter: bool = True,
    reference_point: Sequence[float] = REFERENCE_POINT,
) -> List[ScanRecord]:
    """
    One record per y position; each scan and its reference reading share a
    random complex gain emulating the drift between successive scans.
    """
    rng = np.random.default_rng(seed)
    reference = direct_field(scenario.model, reference_point)
    records = []
    for y in scenario.near_grid.y_coords:
        grid = LineGrid(x_coords=scenario.near_grid.x_coords, y0=float(y), z_plane=scenario.z_near)
        line = sample_line(scenario.model, grid)
        gain = 1.0 + 0.0j
        if jitter:
            gain = rng.uniform(0.5, 2.0) * np.exp(1j * rng.uniform(-math.pi, math.pi))
        records.append(ScanRecord(line=line.scaled(gain), reference_value=reference * gain))
    return records


def normalize_scans(scans: Sequence[ScanRecord], target_ref: complex = 1.0 + 0.0j) -> PlanarField:
    """
    Rescale every scan so the reference reads target_ref, then stack the
    scans by ascending y into a planar field.
    """
    if len(scans) == 0:
        raise DomainError("at least one scan is required")
    first = scans[0].line
    x = first.grid.x_coords
    for record in scans:
        grid = record.line.grid
        if not np.array_equal(grid.x_coords, x):
            raise LatticeMismatchError("scans do not share a common x lattice")
        if grid.z_plane != first.grid.z_plane or record.line.frequency != first.frequency:
            raise LatticeMismatchError("scans differ in plane or frequency")
        if record.reference_value == 0:
            raise NormalizationError(f"scan at y={grid.y0} has a zero reference value")

    ordered = sorted(scans, key=lambda r: r.line.grid.y0)
    y = np.array([r.line.grid.y0 for r in ordered])
    if np.any(np.diff(y) <= 0):
        raise LatticeMismatchError("two scans share the same y position")

    columns = [r.line.values * (target_ref / r.reference_value) for r in ordered]
    return PlanarField(
        grid=PlanarGrid(x_coords=x, y_coords=y, z_plane=first.grid.z_plane),
        values=np.stack(columns, axis=1),
        frequency=first.frequency,
        sound_speed=first.sound_speed,
    )


def synthesize_near_field(
    scenario: Scenario, seed: Optional[int] = None, jitter: bool = True
) -> PlanarField:
    """Planar near field assembled from normalized line scans"""
    return normalize_scans(synthesize_scans(scenario, seed=seed, jitter=jitter))


def _central_indices(n: int, x_coords: Optional[np.ndarray]) -> np.ndarray:
    if x_coords is not None:
        return np.argsort(np.abs(np.asarray(x_coords, dtype=float)), kind="stable")[: min(3, n)]
    center = 0.5 * (n - 1)
    return np.array([i for i in range(n) if abs(i - center) <= 1.0])


def compare_far_field(
    predicted,
    oracle,
    method: Method,
    x_coords=None,
    subset_size: Optional[int] = None,
    label: Optional[str] = None,
) -> ComparisonReport:
    """
    Score a predicted magnitude curve against a reference on the same lattice.

    Both curves are normalized to unit peak. The null depth is the smallest
    normalized prediction among the three points closest to x = 0.
    """
    a = np.abs(np.asarray(predicted)).reshape(-1)
    b = np.abs(np.asarray(oracle)).reshape(-1)
    if a.shape != b.shape:
        raise LatticeMismatchError(f"curves have {a.size} and {b.size} points")
    if x_coords is not None and np.asarray(x_coords).size != a.size:
        raise LatticeMismatchError("x lattice does not match the curves")
    peak_b = float(b.max()) if b.size else 0.0
    if peak_b == 0.0:
        raise NormalizationError("reference curve is identically zero")
    peak_a = float(a.max())
    a_norm = a / peak_a if peak_a > 0 else a
    b_norm = b / peak_b

    rms = float(np.linalg.norm(a_norm - b_norm) / np.linalg.norm(b_norm))
    # A dead prediction resolves no null.
    null = float(a_norm[_central_indices(a.size, x_coords)].min()) if peak_a > 0 else 1.0
    return ComparisonReport(
        method=method,
        rms_divergence=rms,
        peak_ratio=peak_a / peak_b,
        null_depth_db=20.0 * math.log10(max(null, 1e-15)),
        subset_size=subset_size,
        label=label,
    )


def line_filter(grid: LineGrid, k: float, harmonics: int, l_max: int, taper_bins: int) -> CutoffFilter:
    """Band filter for a line array; taper width given in lattice bins"""
    dkx = SpectralLattice.spacing(harmonics, grid.dx)
    return CutoffFilter.for_band(k, l_max, grid.z_plane, taper_width=taper_bins * dkx)


def predict_line(
    line: LineField,
    method: Method,
    x_points,
    z_far: float,
    harmonics: int = 200,
    windowed: bool = True,
    l_max: int = 1,
    taper_bins: int = 2,
    basis: CylindricalBasis = CylindricalBasis.ASYMPTOTIC,
    interpolate: bool = False,
    source_diameter: Optional[float] = None,
    fresnel_warn: float = 3.0,
    diameter_yz: Optional[float] = None,
) -> np.ndarray:
    """
    Far field from one array position (FLS complex pressures, FLT magnitudes).

    diameter_yz, the source extent across the array, enables the azimuthal
    Fresnel check before decomposition.
    """
    method = Method(method)
    if method not in (Method.FLS, Method.FLT):
        raise ConfigurationError(f"{method.value} needs a planar field")
    if diameter_yz is not None:
        yz_fresnel_check(line.wavelength, line.grid.z_plane, diameter_yz, fresnel_warn)
    spec = fls_decompose(line, harmonics, windowed)
    band = line_filter(line.grid, line.wavenumber, harmonics, l_max, taper_bins)
    z_near = line.grid.z_plane
    if method == Method.FLS:
        return fls_propagate(spec, band, x_points, z_near, z_far, basis=basis)
    return flt_curve(
        spec,
        x_points,
        z_near,
        z_far,
        filter=band,
        interpolate=interpolate,
        source_diameter=source_diameter,
        fresnel_warn=fresnel_warn,
    )


def predict_planar(
    field: PlanarField,
    method: Method,
    req: FarFieldRequest,
    harmonics: int = 200,
    windowed: bool = True,
    quadrature: Optional[Quadrature] = None,
    exact: bool = False,
    source_diameter: Optional[float] = None,
    margin_factor: float = 3.0,
    fresnel_warn: float = 3.0,
) -> np.ndarray:
    """Far field from a planar near field by FPS or FPK"""
    method = Method(method)
    if method == Method.FPS:
        spec = fps_decompose(field, harmonics, windowed, quadrature)
        return fps_propagate(spec, req, margin_factor=margin_factor)
    if method == Method.FPK:
        if exact:
            return kirchhoff_integral(field, req, windowed, quadrature)
        return fpk_predict(
            field,
            req,
            windowed,
            quadrature,
            source_diameter=source_diameter,
            fresnel_warn=fresnel_warn,
        )
    raise ConfigurationError(f"{method.value} needs a line field")


def y0_row(field: PlanarField) -> LineField:
    """The scan at y = 0"""
    index = np.flatnonzero(field.grid.y_coords == 0.0)
    if index.size == 0:
        raise LatticeMismatchError("near grid has no scan at y = 0")
    return field.row(int(index[0]))


def method_report(
    scenario: Scenario,
    method: Method,
    near: Optional[PlanarField] = None,
    x_points=None,
    z_far: Optional[float] = None,
    **options,
) -> ComparisonReport:
    """Predict the far line with one method and score it against the oracle"""
    near = synthesize_near_field(scenario, jitter=False) if near is None else near
    x = scenario.far_line.x_coords if x_points is None else np.asarray(x_points, dtype=float)
    z = scenario.z_far if z_far is None else z_far
    method = Method(method)
    if method in (Method.FPS, Method.FPK):
        predicted = predict_planar(near, method, FarFieldRequest.on_line(x, 0.0, z), **options)
    else:
        predicted = predict_line(y0_row(near), method, x, z, **options)
    oracle = far_oracle(scenario, x, z)
    return compare_far_field(predicted, oracle, method, x_coords=x, label=scenario.name)


def fpk_far_sweep(
    scenario: Scenario,
    z_fars: Sequence[float] = (Z_FAR, 6.0, 20.0),
    **options,
) -> List[ComparisonReport]:
    """
    FPK against the oracle at increasing far distances.

    The far line is stretched with distance so it spans the same angles as
    the scenario line at its own z_far.
    """
    near = synthesize_near_field(scenario, jitter=False)
    reports = []
    for z in z_fars:
        stretch = (z - scenario.z_near) / (scenario.z_far - scenario.z_near)
        x = scenario.far_line.x_coords * stretch
        report = method_report(scenario, Method.FPK, near=near, x_points=x, z_far=z, **options)
        reports.append(report.model_copy(update={"label": f"{scenario.name}@{z:g}m"}))
    return reports


def flt_vs_fls(
    scenario: Scenario,
    max_angle_deg: float = 25.0,
    n_angles: int = 51,
    harmonics: int = 200,
    l_max: int = 1,
    taper_bins: int = 2,
    interpolate: bool = False,
) -> ComparisonReport:
    """FLT scored against FLS over ±max_angle_deg along the far line"""
    alpha = np.radians(np.linspace(-max_angle_deg, max_angle_deg, n_angles))
    x = scenario.z_far * np.tan(alpha)
    line = sample_line(scenario.model, scenario.near_line)
    options = dict(harmonics=harmonics, l_max=l_max, taper_bins=taper_bins)
    fls = predict_line(line, Method.FLS, x, scenario.z_far, **options)
    flt = predict_line(line, Method.FLT, x, scenario.z_far, interpolate=interpolate, **options)
    return compare_far_field(flt, fls, Method.FLT, x_coords=x, label=f"{scenario.name} FLT vs FLS")


def hold_max_curves(
    line: LineField,
    sizes: Sequence[int],
    x_points,
    z_far: float,
    harmonics: int = 200,
    windowed: bool = True,
    l_max: int = 1,
    taper_bins: int = 2,
    stride: int = 3,
    basis: CylindricalBasis = CylindricalBasis.ASYMPTOTIC,
    source_diameter: Optional[float] = None,
) -> Dict[int, np.ndarray]:
    """
    FLS over every subset of each size, combined by hold-max.

    Given the source diameter, each subset only contributes at the far points
    whose energy flux it captures (see aperture_coverage).
    """
    curves = {}
    for size in sizes:
        subsets = subarray_sweep(line, size, stride)
        runs = [
            predict_line(
                subset,
                Method.FLS,
                x_points,
                z_far,
                harmonics=harmonics,
                windowed=windowed,
                l_max=l_max,
                taper_bins=taper_bins,
                basis=basis,
            )
            for subset in subsets
        ]
        coverage = None
        if source_diameter is not None:
            coverage = [
                aperture_coverage(s.grid, x_points, z_far, source_diameter, line.wavelength)
                for s in subsets
            ]
        curves[size] = hold_max(runs, coverage=coverage)
        logger.debug(
            "hold_max_computed",
            subset_size=size,
            runs=len(runs),
            uncovered=0 if coverage is None else int(np.sum(~np.any(coverage, axis=0))),
        )
    return curves


def line_aperture_study(
    line: LineField,
    sizes: Sequence[int],
    oracle,
    x_points,
    z_far: float,
    **options,
) -> List[ComparisonReport]:
    """Per-size hold-max FLS curves scored against a reference curve"""
    curves = hold_max_curves(line, sizes, x_points, z_far, **options)
    return [
        compare_far_field(curves[size], oracle, Method.FLS, x_coords=x_points, subset_size=size)
        for size in sizes
    ]


def aperture_study(
    scenario: Scenario,
    sizes: Sequence[int] = APERTURE_SIZES,
    **options,
) -> List[ComparisonReport]:
    """Hold-max FLS of shorter subarrays against the oracle, one report per size"""
    if len(sizes) == 0:
        return []
    line = sample_line(scenario.model, scenario.near_line)
    x = scenario.far_line.x_coords
    oracle = far_oracle(scenario, x)
    options.setdefault("source_diameter", scenario.source_diameter)
    return line_aperture_study(line, sizes, oracle, x, scenario.z_far, **options)
