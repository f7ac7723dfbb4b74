"""Error sweeps over 1D and 2D grids, with deterministic CSV output.

Grid points are independent; with ``threads > 1`` they are farmed out to a
process pool and reassembled in grid order, so the output does not depend on
the worker count.
"""
from __future__ import annotations

import ast
import configparser
import hashlib
import logging
import math
import operator
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .composite import GateSequence, build_sequence, manifest, target_gate
from .dynamics import (
    ErrorModel,
    IntegrationError,
    IntegratorSettings,
    evolve_sequence,
    propagator_numeric,
    vacuum_columns,
)
from .hilbert import HilbertConfig, basis_state
from .metrics import bell_target, gate_fidelity, state_infidelity
from .presets import preset_sequence, yb171_preset

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1
MAX_FAILURE_FRACTION = 0.10


class SweepAborted(RuntimeError):
    pass


# --- small expression parser for config values such as "pi/4" or "0:2pi" ---

_OPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
        ast.Div: operator.truediv, ast.USub: operator.neg, ast.UAdd: operator.pos,
        ast.Pow: operator.pow}


def parse_number(text) -> float:
    """Evaluate arithmetic on numbers and ``pi`` (``"3pi/2"``, ``"-0.1"``, ``"2*pi"``)."""
    if isinstance(text, (int, float)):
        return float(text)
    src = str(text).strip().replace("π", "pi")
    src = re.sub(r"(\d)\s*pi", r"\1*pi", src)

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.operand))
        raise ValueError(f"cannot parse numeric expression {text!r}")

    try:
        return ev(ast.parse(src, mode="eval"))
    except SyntaxError:
        raise ValueError(f"cannot parse numeric expression {text!r}") from None


def parse_window(text) -> tuple[float, float]:
    if isinstance(text, (tuple, list)):
        return float(text[0]), float(text[1])
    parts = str(text).split(":")
    if len(parts) != 2:
        raise ValueError(f"window must look like 'start:stop', got {text!r}")
    return parse_number(parts[0]), parse_number(parts[1])


# --- sweep description ---

@dataclass(frozen=True)
class Axis:
    channel: str
    start: float
    stop: float
    points: int

    def __post_init__(self):
        if self.channel not in ErrorModel.CHANNELS:
            raise ValueError(f"unknown error channel {self.channel!r}; choose from {ErrorModel.CHANNELS}")
        if self.points < 2:
            raise ValueError("an axis needs at least 2 points")
        if not self.start < self.stop:
            raise ValueError(f"axis needs start < stop, got {self.start} .. {self.stop}")

    @classmethod
    def parse(cls, text: str) -> "Axis":
        """``channel:from:to:points``."""
        parts = text.split(":")
        if len(parts) != 4:
            raise ValueError(f"axis must look like 'channel:from:to:points', got {text!r}")
        return cls(parts[0], parse_number(parts[1]), parse_number(parts[2]), int(parts[3]))

    @property
    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.points)


@dataclass(frozen=True)
class SequenceSpec:
    """How to build the swept sequence."""

    kind: str = "B2"
    shape: str = "sin32"
    theta: float = math.pi / 4
    eps: float | None = None
    window: tuple | None = None
    preset: str | None = None

    def build(self) -> GateSequence:
        if self.preset:
            if self.preset != "yb171":
                raise ValueError(f"unknown preset {self.preset!r}")
            return preset_sequence(yb171_preset())
        return build_sequence(self.kind, self.theta, self.shape, self.eps, self.window)

    def default_n_fock(self) -> int:
        return 14 if (self.kind == "single" and not self.preset) else 40


@dataclass(frozen=True)
class SweepSpec:
    axis1: Axis
    axis2: Axis | None = None
    fixed: ErrorModel = ErrorModel()
    sequence: SequenceSpec = SequenceSpec()
    metric: str = "gate"
    n_fock: int | None = None
    settings: IntegratorSettings = IntegratorSettings()
    output_path: str | None = None
    threads: int = 1

    def __post_init__(self):
        if self.metric not in ("gate", "state"):
            raise ValueError(f"metric must be 'gate' or 'state', got {self.metric!r}")
        if self.axis2 is not None and self.axis2.channel == self.axis1.channel:
            raise ValueError("the two axes must sweep different channels")

    @property
    def axes(self) -> tuple:
        return (self.axis1,) if self.axis2 is None else (self.axis1, self.axis2)

    @property
    def cfg(self) -> HilbertConfig:
        return HilbertConfig(self.n_fock or self.sequence.default_n_fock())


@dataclass
class SweepResult:
    axis_names: tuple
    rows: list
    metadata: dict = field(default_factory=dict)

    @property
    def infidelities(self) -> np.ndarray:
        """Infidelity grid shaped by the axis point counts."""
        shape = self.metadata.get("grid_shape")
        vals = np.array([r[-1] for r in self.rows], dtype=float)
        return vals.reshape(shape) if shape else vals


def evaluate_point(seq: GateSequence, err: ErrorModel, metric: str, cfg: HilbertConfig,
                   settings: IntegratorSettings) -> float:
    """Fidelity of ``seq`` under ``err`` (gate: vacuum block, state: Bell state from ``|00>``)."""
    if metric == "gate":
        U = propagator_numeric(seq, err, settings, cfg, columns=vacuum_columns(cfg))
        return gate_fidelity(target_gate(seq.theta_total), U, cfg).fidelity
    psi = evolve_sequence(basis_state("00", 0, cfg), seq, err, settings, cfg)
    return state_infidelity(bell_target(cfg), psi).fidelity


def _point_task(args):
    seq, err, metric, cfg, settings = args
    try:
        return evaluate_point(seq, err, metric, cfg, settings), None
    except IntegrationError as exc:
        return math.nan, str(exc)


def _digest(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]


def run_sweep(spec: SweepSpec, sequence: GateSequence | None = None) -> SweepResult:
    seq = sequence if sequence is not None else spec.sequence.build()
    cfg = spec.cfg
    grids = [ax.values for ax in spec.axes]
    points = [(v,) for v in grids[0]] if len(grids) == 1 else \
        [(v1, v2) for v1 in grids[0] for v2 in grids[1]]
    tasks = []
    for vals in points:
        err = spec.fixed.with_(**{ax.channel: float(v) for ax, v in zip(spec.axes, vals)})
        tasks.append((seq, err, spec.metric, cfg, spec.settings))

    if spec.threads > 1:
        with ProcessPoolExecutor(max_workers=spec.threads) as pool:
            outcomes = list(pool.map(_point_task, tasks, chunksize=max(1, len(tasks) // (4 * spec.threads))))
    else:
        outcomes = [_point_task(t) for t in tasks]

    failures = [msg for _, msg in outcomes if msg is not None]
    if len(failures) > MAX_FAILURE_FRACTION * len(tasks):
        raise SweepAborted(f"{len(failures)} of {len(tasks)} grid points failed; first: {failures[0]}")
    for msg in failures:
        logger.warning("grid point failed: %s", msg)

    rows = [tuple(float(v) for v in vals) + (fid, 1.0 - fid) for vals, (fid, _) in zip(points, outcomes)]
    settings_text = repr((asdict(spec.settings), cfg.n_fock, asdict(spec.fixed), spec.metric))
    metadata = {
        "format_version": FORMAT_VERSION,
        "sequence": seq.label,
        "shape": seq.shape,
        "metric": spec.metric,
        "n_fock": cfg.n_fock,
        "rel_tol": spec.settings.rel_tol,
        "abs_tol": spec.settings.abs_tol,
        "fixed": ",".join(f"{k}={v:.12g}" for k, v in asdict(spec.fixed).items() if v),
        "settings_hash": _digest(settings_text),
        "manifest_digest": _digest(manifest(seq)),
        "failures": len(failures),
        "grid_shape": tuple(ax.points for ax in spec.axes),
    }
    return SweepResult(tuple(ax.channel for ax in spec.axes), rows, metadata)


def _fmt(v) -> str:
    if isinstance(v, float):
        return "nan" if math.isnan(v) else format(v, ".12g")
    return str(v)


def write_csv(result: SweepResult, path) -> None:
    """Write ``# key=value`` metadata, a header and one row per grid point."""
    path = Path(path)
    lines = [f"# {k}={_fmt(v) if not isinstance(v, tuple) else 'x'.join(map(str, v))}"
             for k, v in result.metadata.items()]
    lines.append(",".join(result.axis_names + ("fidelity", "infidelity")))
    lines += [",".join(_fmt(v) for v in row) for row in result.rows]
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write sweep CSV to {path}: {exc}") from exc


def read_csv(path):
    """Parse a sweep CSV back into ``(metadata, header, rows)``."""
    meta, header, rows = {}, None, []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("# "):
                key, _, value = line[2:].partition("=")
                meta[key] = value
            elif header is None:
                header = line.split(",")
            else:
                rows.append(tuple(float(x) for x in line.split(",")))
    return meta, header, rows


# --- config files ---

CONFIG_KEYS = {"format_version", "sequence", "shape", "eps", "window", "theta", "n_fock", "rel_tol",
               "abs_tol", "metric", "preset", "out", "axis1", "axis2", "fixed", "threads"}


def spec_from_section(section, base_dir: Path | None = None) -> SweepSpec:
    unknown = set(section.keys()) - CONFIG_KEYS
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    version = int(section.get("format_version", "0"))
    if version != FORMAT_VERSION:
        raise ValueError(f"unsupported format_version {version}; expected {FORMAT_VERSION}")
    seq = SequenceSpec(
        kind=section.get("sequence", "B2"),
        shape=section.get("shape", "sin32"),
        theta=parse_number(section.get("theta", "pi/4")),
        eps=parse_number(section["eps"]) if "eps" in section else None,
        window=parse_window(section["window"]) if "window" in section else None,
        preset=section.get("preset") or None,
    )
    fixed = ErrorModel()
    for item in filter(None, (s.strip() for s in section.get("fixed", "").split(","))):
        key, _, value = item.partition("=")
        if key.strip() not in ErrorModel.CHANNELS:
            raise ValueError(f"unknown error channel {key!r}")
        fixed = fixed.with_(**{key.strip(): parse_number(value)})
    settings = IntegratorSettings(rel_tol=float(section.get("rel_tol", 1e-10)),
                                  abs_tol=float(section.get("abs_tol", 1e-12)))
    out = section.get("out")
    if out and base_dir is not None and not Path(out).is_absolute():
        out = str(base_dir / out)
    return SweepSpec(
        axis1=Axis.parse(section["axis1"]),
        axis2=Axis.parse(section["axis2"]) if section.get("axis2") else None,
        fixed=fixed,
        sequence=seq,
        metric=section.get("metric", "gate"),
        n_fock=int(section["n_fock"]) if "n_fock" in section else None,
        settings=settings,
        output_path=out,
        threads=int(section.get("threads", 1)),
    )


def load_config(path, out_dir=None) -> dict[str, SweepSpec]:
    """Read an INI recipe; every ``[sweep]`` or ``[sweep.NAME]`` section is one sweep.

    Relative ``out`` paths resolve against ``out_dir`` (default: the current directory).
    """
    parser = configparser.ConfigParser(interpolation=None)
    with open(path, encoding="utf-8") as fh:
        parser.read_file(fh)
    defaults = dict(parser.defaults())
    specs = {}
    for name in parser.sections():
        if name == "sweep" or name.startswith("sweep."):
            section = {k: v for k, v in parser[name].items()}
            section = {**defaults, **section}
            specs[name] = spec_from_section(section, Path(out_dir) if out_dir else None)
    if not specs:
        raise ValueError(f"{path} contains no [sweep] sections")
    return specs
