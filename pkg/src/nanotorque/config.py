"""Scan configuration: flat ``key = value`` text with dotted sections.

Grammar (one assignment per line; ``#`` starts a comment)::

    fiber.radius_nm    = 350          # core radius a
    fiber.n1           = 1.4537
    fiber.n2           = 1.0          # optional, default 1
    atom.lambda_nm     = 780
    atom.gamma0_mhz    = 6.065        # gamma0 / 2 pi
    atom.q             = +1, 0, -1    # optional, default all three
    drive.mode         = HE21         # or a list: HE11, TE01, TM01, HE21
    drive.f            = +1           # optional, default +1
    drive.p            = +1           # hybrid modes; ignored for TE/TM
    drive.power_pw     = 1
    drive.detuning_mhz = 0            # Delta / 2 pi, optional
    scan.r_over_a      = 1.02:3.0:200 # start:stop:points, start > 1
    scan.tol           = 1e-6         # optional quadrature tolerance
    am.r_over_a        = 0.1:5:50     # optional grid for am-analysis
    output.path        = torque.csv   # optional
    output.format      = csv          # csv | plotdata
    output.figure      = fig2         # fig2 | fig3 | fig4 (plotdata only)
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from scipy.constants import c as C_LIGHT

from .errors import ConfigError
from .fiber_modes import Family, FiberSpec, GuidedModeId, ModeKind

FORMATS = ("csv", "plotdata")
FIGURES = ("fig2", "fig3", "fig4")

_REQUIRED = (
    "fiber.radius_nm", "fiber.n1", "atom.lambda_nm", "atom.gamma0_mhz",
    "drive.mode", "drive.power_pw", "scan.r_over_a",
)
_OPTIONAL = {
    "fiber.n2": "1.0",
    "atom.q": "+1, 0, -1",
    "drive.f": "+1",
    "drive.p": "+1",
    "drive.detuning_mhz": "0",
    "scan.tol": "1e-6",
    "am.r_over_a": "0.1:5:50",
    "output.path": "",
    "output.format": "csv",
    "output.figure": "",
}


@dataclass(frozen=True)
class DriveMode:
    kind: ModeKind
    f: int
    p: int

    def mode_id(self, omega: float) -> GuidedModeId:
        return GuidedModeId(omega, self.kind, self.f, self.p)

    @property
    def label(self) -> str:
        return self.kind.label


@dataclass(frozen=True)
class RadialGrid:
    start: float
    stop: float
    points: int

    def values(self) -> list[float]:
        step = (self.stop - self.start) / (self.points - 1)
        return [self.start + i * step for i in range(self.points)]


@dataclass(frozen=True)
class ScanConfig:
    fiber: FiberSpec
    lambda0: float
    gamma0: float
    q_values: tuple[int, ...]
    drives: tuple[DriveMode, ...]
    power_P: float
    detuning: float
    scan: RadialGrid
    am_grid: RadialGrid
    tol: float = 1e-6
    out_path: str = ""
    out_format: str = "csv"
    figure: str = ""
    source_lines: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def omega0(self) -> float:
        return 2 * math.pi * C_LIGHT / self.lambda0


def _read_pairs(text: str) -> tuple[dict, dict]:
    values, lines = {}, {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("expected 'key = value'", line=lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _REQUIRED and key not in _OPTIONAL:
            raise ConfigError("unknown key", line=lineno, field=key)
        if key in values:
            raise ConfigError(f"duplicate key (first set on line {lines[key]})", line=lineno, field=key)
        if not value:
            raise ConfigError("empty value", line=lineno, field=key)
        values[key], lines[key] = value, lineno
    for key in _REQUIRED:
        if key not in values:
            raise ConfigError("missing required key", field=key)
    return values, lines


class _Reader:
    def __init__(self, values, lines):
        self.values, self.lines = values, lines

    def raw(self, key):
        return self.values.get(key, _OPTIONAL.get(key, ""))

    def fail(self, key, message):
        raise ConfigError(message, line=self.lines.get(key), field=key)

    def number(self, key, positive=False, minimum=None):
        try:
            val = float(self.raw(key))
        except ValueError:
            self.fail(key, f"not a number: {self.raw(key)!r}")
        if not math.isfinite(val):
            self.fail(key, "must be finite")
        if positive and not val > 0:
            self.fail(key, "must be positive")
        if minimum is not None and val < minimum:
            self.fail(key, f"must be >= {minimum}")
        return val

    def sign(self, key):
        text = self.raw(key)
        if text not in ("+1", "1", "-1"):
            self.fail(key, f"must be +1 or -1, got {text!r}")
        return int(text)

    def grid(self, key, start_above=None):
        parts = self.raw(key).split(":")
        if len(parts) != 3:
            self.fail(key, "expected start:stop:points")
        try:
            start, stop, pts = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError:
            self.fail(key, "expected start:stop:points with numeric values")
        if pts < 2:
            self.fail(key, "need at least 2 points")
        if not stop > start:
            self.fail(key, "stop must exceed start")
        if start_above is not None and not start > start_above:
            self.fail(key, f"start must be > {start_above:g} (atom outside the fiber)")
        if start <= 0:
            self.fail(key, "start must be positive")
        return RadialGrid(start, stop, pts)


def parse_config(text: str) -> ScanConfig:
    values, lines = _read_pairs(text)
    rd = _Reader(values, lines)
    a = rd.number("fiber.radius_nm", positive=True) * 1e-9
    n1 = rd.number("fiber.n1", minimum=1.0)
    n2 = rd.number("fiber.n2", minimum=1.0)
    if n1 <= n2:
        rd.fail("fiber.n1", "core index must exceed cladding index")
    fiber = FiberSpec(a, n1, n2)

    q_values = []
    for item in rd.raw("atom.q").split(","):
        item = item.strip()
        if item not in ("+1", "1", "0", "-1"):
            rd.fail("atom.q", f"q must be -1, 0 or +1, got {item!r}")
        if int(item) in q_values:
            rd.fail("atom.q", f"repeated q = {item}")
        q_values.append(int(item))

    f = rd.sign("drive.f")
    p = rd.sign("drive.p")
    drives = []
    for label in rd.raw("drive.mode").split(","):
        try:
            kind = ModeKind.parse(label)
        except ValueError as exc:
            rd.fail("drive.mode", str(exc))
        drives.append(DriveMode(kind, f, p if kind.family in (Family.HE, Family.EH) else 0))
    if len({d.kind for d in drives}) != len(drives):
        rd.fail("drive.mode", "repeated mode")

    out_format = rd.raw("output.format")
    if out_format not in FORMATS:
        rd.fail("output.format", f"must be one of {', '.join(FORMATS)}")
    figure = rd.raw("output.figure")
    if figure and figure not in FIGURES:
        rd.fail("output.figure", f"must be one of {', '.join(FIGURES)}")
    if out_format == "plotdata" and not figure:
        rd.fail("output.figure", "plotdata output needs a figure style")

    return ScanConfig(
        fiber=fiber,
        lambda0=rd.number("atom.lambda_nm", positive=True) * 1e-9,
        gamma0=2 * math.pi * 1e6 * rd.number("atom.gamma0_mhz", positive=True),
        q_values=tuple(q_values),
        drives=tuple(drives),
        power_P=rd.number("drive.power_pw", minimum=0.0) * 1e-12,
        detuning=2 * math.pi * 1e6 * rd.number("drive.detuning_mhz"),
        scan=rd.grid("scan.r_over_a", start_above=1.0),
        am_grid=rd.grid("am.r_over_a"),
        tol=rd.number("scan.tol", positive=True),
        out_path=rd.raw("output.path"),
        out_format=out_format,
        figure=figure,
        source_lines=dict(lines),
    )


def load_config(path) -> ScanConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())
