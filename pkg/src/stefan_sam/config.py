"""Experiment configuration: flat ``key = value`` files with dotted keys."""

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .model import CoefficientModel, Custom, ExactAtTime, PiecewiseLinear, ProblemSpec
from .solver import DT_FACTOR, EPS_FACTOR, SCHEME_KINDS, SchemeSpec
from .tracker import STENCILS

AMR_SUFFIX = "_amr"

DEFAULTS = {
    "experiment": "custom",
    "output_dir": "out",
    "problem.k_max": "1.0",
    "problem.k_min": "0.0",
    "problem.p_star": "0.5",
    "problem.x_lo": "0.0",
    "problem.x_hi": "1.0",
    "problem.bc_left": "1.0",
    "problem.bc_right": "0.0",
    "problem.t_end": "0.05",
    "ic.kind": "exact",
    "ic.x_front": "0.2",
    "ic.k_min_gen": "0.01",
    "ic.x_knee": "0.5",
    "grids": "25,50,100,200",
    "schemes": "sam_jump",
    "scheme.eps_factor": repr(EPS_FACTOR),
    "scheme.dt_factor": repr(DT_FACTOR),
    "scheme.p_right_stencil": "zero",
    "amr.n_inner": "10",
    "probes": "0.32",
    "snapshot_times": "",
    "output.stride": "1",
    "jobs": "1",
}

KNOWN_KEYS = set(DEFAULTS) | {"ic.t0", "ic.file"}


class ConfigError(ValueError):
    """Invalid configuration; ``diagnostics`` lists every problem found."""

    def __init__(self, diagnostics):
        super().__init__("; ".join(diagnostics))
        self.diagnostics = list(diagnostics)


@dataclass(frozen=True)
class RunSpec:
    """One (scheme, grid) job of an experiment."""

    label: str
    scheme: SchemeSpec
    n_cells: int
    amr: bool = False


@dataclass(frozen=True)
class ExperimentConfig:
    problem: ProblemSpec
    grids: tuple
    schemes: tuple
    probes: tuple
    snapshot_times: tuple
    output_dir: Path
    experiment: str = "custom"
    n_inner: int = 10
    stride: int = 1
    jobs: int = 1
    raw: dict = field(default_factory=dict, compare=False)

    def runs(self):
        """Expanded job list in a fixed order."""
        out = []
        multi_dt = len({s.dt_factor for s, _ in self.schemes}) > 1
        for scheme, amr in self.schemes:
            label = scheme.kind + (AMR_SUFFIX if amr else "")
            if multi_dt:
                label += f"_dt{1.0 / scheme.dt_factor:g}"
            for n in self.grids:
                out.append(RunSpec(label, scheme, n, amr))
        return out


def parse_config_text(text):
    """Parse ``key = value`` lines; '#' starts a comment."""
    raw = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError([f"line {lineno}: expected 'key = value'"])
        key, value = (s.strip() for s in line.split("=", 1))
        if not key:
            raise ConfigError([f"line {lineno}: empty key"])
        raw[key] = value
    return raw


def load_config_file(path):
    path = Path(path)
    raw = parse_config_text(path.read_text())
    raw["_base_dir"] = str(path.parent)
    return raw


def _floats(value):
    return tuple(float(v) for v in value.replace(";", ",").split(",") if v.strip())


def _ints(value):
    return tuple(int(v) for v in value.replace(";", ",").split(",") if v.strip())


def validate_config(raw):
    """List of diagnostics, each naming the offending key; empty if valid."""
    if isinstance(raw, ExperimentConfig):
        raw = raw.raw
    diags = []
    cfg = dict(DEFAULTS)
    cfg.update(raw)
    for key in raw:
        if key not in KNOWN_KEYS and not key.startswith("_"):
            diags.append(f"{key}: unknown key")

    def num(key, kind=float):
        try:
            return kind(cfg[key])
        except (TypeError, ValueError):
            diags.append(f"{key}: not a number ({cfg[key]!r})")
            return None

    k_max, k_min, p_star = num("problem.k_max"), num("problem.k_min"), num("problem.p_star")
    x_lo, x_hi = num("problem.x_lo"), num("problem.x_hi")
    bc_l, bc_r, t_end = num("problem.bc_left"), num("problem.bc_right"), num("problem.t_end")
    if None not in (k_max, k_min):
        if not k_max > 0:
            diags.append("problem.k_max: must be positive")
        if not 0 <= k_min < k_max:
            diags.append("problem.k_min: need k_max > k_min >= 0")
    if None not in (p_star, bc_l, bc_r) and not bc_l > p_star > bc_r:
        diags.append("problem.p_star: must lie strictly between bc_right and bc_left")
    if None not in (x_lo, x_hi) and not x_hi > x_lo:
        diags.append("problem.x_hi: domain must satisfy x_lo < x_hi")
    if t_end is not None and t_end < 0:
        diags.append("problem.t_end: must be >= 0")

    kind = cfg["ic.kind"]
    if kind == "exact":
        if (bc_l, bc_r) != (1.0, 0.0):
            diags.append("ic.kind: exact initial data needs bc_left = 1 and bc_right = 0")
        if "ic.t0" in cfg:
            t0 = num("ic.t0")
            if t0 is not None and not t0 > 0:
                diags.append("ic.t0: ExactAtTime requires t0 > 0")
        else:
            xf = num("ic.x_front")
            if None not in (xf, x_lo, x_hi) and not x_lo < xf < x_hi:
                diags.append("ic.x_front: must lie inside the domain")
        kg = num("ic.k_min_gen")
        if kg is not None and kg < 0:
            diags.append("ic.k_min_gen: must be >= 0")
    elif kind == "piecewise_linear":
        xk = num("ic.x_knee")
        if None not in (xk, x_lo, x_hi) and not x_lo < xk < x_hi:
            diags.append("ic.x_knee: PiecewiseLinear requires x_lo < x_knee < x_hi")
    elif kind == "custom":
        if "ic.file" not in cfg:
            diags.append("ic.file: custom initial data needs a file with x,p columns")
    else:
        diags.append(f"ic.kind: unknown initial condition {kind!r}")

    try:
        grids = _ints(cfg["grids"])
        if not grids or min(grids) < 4:
            diags.append("grids: need at least one grid with N >= 4")
    except ValueError:
        diags.append(f"grids: not a list of integers ({cfg['grids']!r})")

    names = [s.strip() for s in cfg["schemes"].split(",") if s.strip()]
    if not names:
        diags.append("schemes: empty scheme list")
    for name in names:
        base = name[: -len(AMR_SUFFIX)] if name.endswith(AMR_SUFFIX) else name
        if base not in SCHEME_KINDS:
            diags.append(f"schemes: unknown scheme {name!r}")
        elif name.endswith(AMR_SUFFIX) and base.startswith("sam_"):
            diags.append(f"schemes: refinement is only available for averaging schemes ({name!r})")
        if base == "sam_exact" and kind != "exact":
            diags.append("schemes: sam_exact needs exact initial data")

    try:
        dt_factors = _floats(cfg["scheme.dt_factor"])
    except ValueError:
        dt_factors = ()
        diags.append(f"scheme.dt_factor: not a number ({cfg['scheme.dt_factor']!r})")
    eps = num("scheme.eps_factor")
    for dtf in dt_factors:
        if not dtf > 0:
            diags.append("scheme.dt_factor: must be positive")
        elif k_max is not None and dtf * k_max > 0.5:
            diags.append(
                f"scheme.dt_factor: stability: dt_factor exceeds explicit limit "
                f"({dtf:g} > 1/(2 k_max) = {0.5 / k_max:g})"
            )
        elif eps is not None and k_max is not None and any(n.startswith("sam_") for n in names):
            if eps < 2 * k_max * dtf * (1 - 1e-12):
                diags.append(
                    f"scheme.eps_factor: stability: eps_factor {eps:g} below 2 k_max dt_factor "
                    f"= {2 * k_max * dtf:g}"
                )
    if eps is not None and not 0 < eps < 0.5:
        diags.append("scheme.eps_factor: must lie in (0, 0.5)")
    if cfg["scheme.p_right_stencil"] not in STENCILS:
        diags.append(f"scheme.p_right_stencil: unknown stencil {cfg['scheme.p_right_stencil']!r}")

    n_inner = num("amr.n_inner", int)
    if n_inner is not None and n_inner < 1:
        diags.append("amr.n_inner: must be >= 1")
    stride = num("output.stride", int)
    if stride is not None and stride < 1:
        diags.append("output.stride: must be >= 1")
    jobs = num("jobs", int)
    if jobs is not None and jobs < 1:
        diags.append("jobs: must be >= 1")

    try:
        probes = _floats(cfg["probes"])
    except ValueError:
        probes = ()
        diags.append(f"probes: not a list of numbers ({cfg['probes']!r})")
    for x in probes:
        if None not in (x_lo, x_hi) and not x_lo < x < x_hi:
            diags.append(f"probes: probe outside domain (x={x:g})")
    try:
        snaps = _floats(cfg["snapshot_times"])
    except ValueError:
        snaps = ()
        diags.append(f"snapshot_times: not a list of numbers ({cfg['snapshot_times']!r})")
    for ts in snaps:
        if t_end is not None and not 0 <= ts <= t_end * (1 + 1e-12):
            diags.append(f"snapshot_times: time {ts:g} outside [0, t_end]")
    return diags


def _custom_ic(cfg):
    path = Path(cfg["ic.file"])
    if not path.is_absolute():
        path = Path(cfg.get("_base_dir", ".")) / path
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return Custom(tuple(data[:, 0]), tuple(data[:, 1]))


def build_config(raw, output_dir=None):
    """Validated ExperimentConfig from a raw key/value mapping."""
    diags = validate_config(raw)
    if diags:
        raise ConfigError(diags)
    cfg = dict(DEFAULTS)
    cfg.update(raw)
    f = lambda k: float(cfg[k])  # noqa: E731
    model = CoefficientModel(f("problem.k_max"), f("problem.k_min"), f("problem.p_star"))
    kind = cfg["ic.kind"]
    if kind == "exact":
        t0 = float(cfg["ic.t0"]) if "ic.t0" in cfg else None
        ic = ExactAtTime(x_front=f("ic.x_front"), k_min_gen=f("ic.k_min_gen"), t0=t0)
    elif kind == "piecewise_linear":
        ic = PiecewiseLinear(f("ic.x_knee"))
    else:
        try:
            ic = _custom_ic(cfg)
        except (OSError, ValueError, IndexError) as err:
            raise ConfigError([f"ic.file: cannot read tabulated data ({err})"]) from err
    try:
        problem = ProblemSpec(
            model, f("problem.x_lo"), f("problem.x_hi"), f("problem.bc_left"),
            f("problem.bc_right"), ic, f("problem.t_end"),
        )
    except ValueError as err:
        raise ConfigError([f"problem: {err}"]) from err
    schemes = []
    for name in (s.strip() for s in cfg["schemes"].split(",") if s.strip()):
        amr = name.endswith(AMR_SUFFIX)
        base = name[: -len(AMR_SUFFIX)] if amr else name
        for dtf in _floats(cfg["scheme.dt_factor"]):
            spec = SchemeSpec(base, f("scheme.eps_factor"), dtf, cfg["scheme.p_right_stencil"])
            schemes.append((spec, amr))
    out = Path(output_dir) if output_dir is not None else Path(cfg["output_dir"])
    return ExperimentConfig(
        problem=problem,
        grids=_ints(cfg["grids"]),
        schemes=tuple(schemes),
        probes=_floats(cfg["probes"]),
        snapshot_times=_floats(cfg["snapshot_times"]),
        output_dir=out,
        experiment=cfg["experiment"],
        n_inner=int(cfg["amr.n_inner"]),
        stride=int(cfg["output.stride"]),
        jobs=int(cfg["jobs"]),
        raw=dict(raw),
    )


PRESETS = {
    "table-appendix-b": (
        "Error norms and orders for N = 25..200 at t = 0.05",
        """\
experiment = table-appendix-b
output_dir = out/table-appendix-b
problem.t_end = 0.05
ic.kind = exact
grids = 25,50,100,200
schemes = arithmetic,integral,sam_jump
probes = 0.32
snapshot_times = 0.05
""",
    ),
    "fig-intro": (
        "Probe series at x = 0.32 for all four face treatments, dx = 0.04",
        """\
experiment = fig-intro
output_dir = out/fig-intro
problem.t_end = 0.1
ic.kind = exact
grids = 25
schemes = arithmetic,harmonic,integral,sam_jump
probes = 0.32
snapshot_times = 0.05
""",
    ),
    "waiting-time": (
        "Piecewise-linear start: the front waits at x = 0.5, then moves",
        """\
experiment = waiting-time
output_dir = out/waiting-time
problem.t_end = 0.2
ic.kind = piecewise_linear
ic.x_knee = 0.5
grids = 100
schemes = sam_jump,integral,arithmetic
scheme.p_right_stencil = two_cells_right
probes = 0.32,0.55
snapshot_times = 0,0.02,0.04,0.06,0.08,0.1,0.12,0.14,0.16,0.18,0.2
""",
    ),
    "sam-exact": (
        "SAM driven by the closed-form front, N = 25..200",
        """\
experiment = sam-exact
output_dir = out/sam-exact
problem.t_end = 0.05
ic.kind = exact
grids = 25,50,100,200
schemes = sam_exact
probes = 0.32
snapshot_times = 0.05
""",
    ),
    "shock-position": (
        "Tracked front against the closed form: jump ODE and level set",
        """\
experiment = shock-position
output_dir = out/shock-position
problem.t_end = 0.05
ic.kind = exact
grids = 25,50,100
schemes = sam_jump,sam_levelset
probes = 0.32
snapshot_times = 0.05
""",
    ),
    "harmonic-locking": (
        "Harmonic average with k_min = 0: the front never moves",
        """\
experiment = harmonic-locking
output_dir = out/harmonic-locking
problem.t_end = 0.1
ic.kind = exact
grids = 50,100
schemes = harmonic
probes = 0.32
snapshot_times = 0,0.1
""",
    ),
    "arithmetic-dt": (
        "Arithmetic average at N = 50 with dt = dx^2/32 and dx^2/64",
        """\
experiment = arithmetic-dt
output_dir = out/arithmetic-dt
problem.t_end = 0.1
ic.kind = exact
grids = 50
schemes = arithmetic
scheme.dt_factor = 0.03125,0.015625
probes = 0.32
snapshot_times = 0.1
""",
    ),
    "amr": (
        "Integral average with a moving refined window (n_inner = 10)",
        """\
experiment = amr
output_dir = out/amr
problem.t_end = 0.06
ic.kind = exact
grids = 100
schemes = integral,integral_amr
amr.n_inner = 10
probes = 0.32
snapshot_times = 0.06
output.stride = 10
""",
    ),
}


def preset_raw(name):
    if name not in PRESETS:
        raise ConfigError([f"experiment: unknown preset {name!r}"])
    return parse_config_text(PRESETS[name][1])
