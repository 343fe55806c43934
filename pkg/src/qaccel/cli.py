"""Configuration-driven verification runner.

Two modes share one flat configuration (file and/or flags):

* scenario run - sweep a time grid for a named scenario (or a custom
  constant field), computing speed, both acceleration estimates, both
  bounds, slacks, and the saturation classification per sample;
* random sweep (``--sweep-dim`` / ``--sweep-count``) - draw random
  smooth fields and states, checking the Robertson,
  Robertson-Schrodinger and bound-chain inequalities sample by sample.

Output is a CSV (fixed column set, 17 significant digits, byte-stable
for a fixed config and seed) or a JSON document; ``--plots`` also
renders matplotlib figures next to the output file.

Exit codes: 0 ok, 1 a bound/inequality was violated beyond tolerance,
2 configuration error, 3 numerical error (Hermiticity or degeneracy
cascade).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field, asdict
from pathlib import Path
from typing import Optional

import numpy as np

from . import uncertainty
from .bloch import BlochFrame, classify, decompose_field
from .dynamics import TimeField, bloch_to_state, evolve_state, field_to_operator, state_to_bloch
from .errors import ConfigError, QaccelError
from .limits import Convention, LimitSample, limit_sample
from .opsalg import HermitianOperator, StateVector
from .scenarios import build_scenario

CSV_COLUMNS = [
    "t", "v", "a_analytic", "a_fd", "bound_loose", "bound_tight",
    "slack_loose", "slack_tight", "a_dot_h", "hperp_cross_hdotperp_norm",
    "tag", "degenerate_flag",
]

BOUND_TOL = 1e-6      # tolerance for analytic-bound violations
FD_BOUND_TOL = 1e-5   # looser tolerance for the finite-difference estimate
CONVENTIONS = ("pati", "alsing-cafaro")
FORMATS = ("csv", "json")


@dataclass(frozen=True)
class RunConfig:
    """One run's worth of settings; every key is also a CLI flag."""

    scenario: str = "example1"
    params: dict = field(default_factory=dict)
    t0: float = 0.0
    t1: float = 2.0 * math.pi
    samples: int = 201
    dt_propagate: float = 1e-4
    convention: str = "alsing-cafaro"
    hbar: float = 1.0
    output_format: str = "csv"
    output_path: str = "report.csv"
    seed: int = 0
    sweep_dim: Optional[int] = None
    sweep_count: Optional[int] = None
    plots: bool = False

    def validate(self) -> None:
        if not self.t1 > self.t0:
            raise ConfigError(f"need t1 > t0, got [{self.t0}, {self.t1}]")
        if self.samples < 2:
            raise ConfigError(f"need samples >= 2, got {self.samples}")
        if not self.dt_propagate > 0.0:
            raise ConfigError(f"need dt > 0, got {self.dt_propagate}")
        if self.convention not in CONVENTIONS:
            raise ConfigError(f"unknown convention {self.convention!r}; pick from {CONVENTIONS}")
        if self.output_format not in FORMATS:
            raise ConfigError(f"unknown format {self.output_format!r}; pick from {FORMATS}")
        if not self.hbar > 0.0:
            raise ConfigError(f"need hbar > 0, got {self.hbar}")
        if self.convention == "alsing-cafaro" and self.hbar != 1.0:
            raise ConfigError("the alsing-cafaro convention fixes hbar = 1")

    def make_convention(self) -> Convention:
        if self.convention == "pati":
            return Convention.pati(hbar=self.hbar)
        return Convention.alsing_cafaro()

    @property
    def sweep_mode(self) -> bool:
        return self.sweep_dim is not None or self.sweep_count is not None


@dataclass(frozen=True)
class SampleRow:
    """One output row. Optional entries serialize as empty CSV fields."""

    t: float
    v: float
    a_analytic: Optional[float]
    a_fd: Optional[float]
    bound_loose: float
    bound_tight: Optional[float]
    slack_loose: Optional[float]
    slack_tight: Optional[float]
    a_dot_h: Optional[float]
    hperp_cross_hdotperp_norm: Optional[float]
    tag: str
    degenerate: bool


@dataclass(frozen=True)
class ReportSummary:
    """Aggregates recomputable from the row list (see :func:`summarize`).

    The worst uncertainty-relation slacks are extras filled in by the
    random sweep; they live in the per-sample inequality checks, not in
    the rows.
    """

    max_fd_deviation: Optional[float]
    min_slack_loose: Optional[float]
    min_slack_tight: Optional[float]
    tag_histogram: dict
    degenerate_count: int
    violations: int
    worst_robertson_slack: Optional[float] = None
    worst_rs_slack: Optional[float] = None
    uncertainty_violations: int = 0


@dataclass(frozen=True)
class VerificationReport:
    config: RunConfig
    rows: list
    summary: ReportSummary

    @property
    def total_violations(self) -> int:
        return self.summary.violations + self.summary.uncertainty_violations


def count_row_violations(row: SampleRow) -> int:
    """Bound-chain violations in one row, at the documented tolerances."""
    if row.degenerate:
        return 0
    bad = 0
    if row.slack_loose is not None and row.slack_loose < -BOUND_TOL:
        bad += 1
    if row.slack_tight is not None and row.slack_tight < -BOUND_TOL:
        bad += 1
    if row.a_fd is not None:
        if abs(row.a_fd) > row.bound_loose + FD_BOUND_TOL:
            bad += 1
        if row.bound_tight is not None and abs(row.a_fd) > row.bound_tight + FD_BOUND_TOL:
            bad += 1
    return bad


def summarize(rows: list) -> ReportSummary:
    """Recompute the summary block from a row list."""
    devs = [
        abs(r.a_fd - r.a_analytic)
        for r in rows
        if r.a_fd is not None and r.a_analytic is not None
    ]
    loose = [r.slack_loose for r in rows if r.slack_loose is not None]
    tight = [r.slack_tight for r in rows if r.slack_tight is not None]
    histogram: dict[str, int] = {}
    for r in rows:
        if r.tag:
            histogram[r.tag] = histogram.get(r.tag, 0) + 1
    return ReportSummary(
        max_fd_deviation=max(devs) if devs else None,
        min_slack_loose=min(loose) if loose else None,
        min_slack_tight=min(tight) if tight else None,
        tag_histogram=histogram,
        degenerate_count=sum(1 for r in rows if r.degenerate),
        violations=sum(count_row_violations(r) for r in rows),
    )


def _qubit_geometry(frame: BlochFrame) -> tuple[float, float, str]:
    """Per-row Bloch diagnostics: a . h, |h_perp x hdot_perp|, tag string."""
    a_dot_h = float(frame.a @ frame.h)
    _, h_perp, _, hd_perp = decompose_field(frame)
    cross_norm = float(np.linalg.norm(np.cross(h_perp, hd_perp)))
    tag = classify(frame)
    return a_dot_h, cross_norm, tag.cls.value


def _row_from_sample(
    ls: LimitSample, frame: Optional[BlochFrame]
) -> SampleRow:
    if frame is not None:
        a_dot_h, cross_norm, tag = _qubit_geometry(frame)
    else:
        a_dot_h, cross_norm, tag = None, None, ""
    return SampleRow(
        t=ls.t, v=ls.v, a_analytic=ls.a_analytic, a_fd=ls.a_fd,
        bound_loose=ls.bound_loose, bound_tight=ls.bound_tight,
        slack_loose=ls.slack_loose, slack_tight=ls.slack_tight,
        a_dot_h=a_dot_h, hperp_cross_hdotperp_norm=cross_norm,
        tag=tag, degenerate=ls.degenerate,
    )


def _grid(config: RunConfig) -> list[float]:
    span = config.t1 - config.t0
    return [config.t0 + span * i / (config.samples - 1) for i in range(config.samples)]


def _custom_state0(params: dict) -> StateVector:
    theta = params.get("theta", math.pi / 2.0)
    phi = params.get("phi", 0.0)
    return StateVector(
        [math.cos(theta / 2.0), complex(math.cos(phi), math.sin(phi)) * math.sin(theta / 2.0)]
    )


def _run_custom(config: RunConfig, conv: Convention) -> list[SampleRow]:
    """Constant field H = h0 + (hx, hy, hz) . sigma from a propagated state."""
    known = {"hx", "hy", "hz", "h0", "theta", "phi"}
    unknown = set(config.params) - known
    if unknown:
        raise ConfigError(f"unknown parameter(s) for custom: {sorted(unknown)}")
    h = np.array([config.params.get(k, 0.0) for k in ("hx", "hy", "hz")])
    h0 = config.params.get("h0", 0.0)
    zero = np.zeros(3)
    tf = TimeField.from_vectors(lambda t: h, lambda t: zero, lambda t: h0)
    psi = _custom_state0(config.params)
    rows = []
    prev_t = config.t0
    for t in _grid(config):
        if t > prev_t:
            psi = evolve_state(tf, psi, prev_t, t, config.dt_propagate).state
            prev_t = t
        ls = limit_sample(tf, psi, t, conv, fd_dt=config.dt_propagate)
        frame = BlochFrame(a=state_to_bloch(psi), h=h, hdot=zero, h0=h0)
        rows.append(_row_from_sample(ls, frame))
    return rows


def run(config: RunConfig) -> VerificationReport:
    """Scenario (or custom-field) time-grid run; writes the output file."""
    config.validate()
    conv = config.make_convention()
    if config.scenario == "custom":
        rows = _run_custom(config, conv)
    else:
        scn = build_scenario(config.scenario, config.params)
        tf = scn.time_field()
        rows = []
        for t in _grid(config):
            psi = scn.state_at(t)
            ls = limit_sample(tf, psi, t, conv, fd_dt=config.dt_propagate)
            rows.append(_row_from_sample(ls, scn.frame_at(t)))
    report = VerificationReport(config=config, rows=rows, summary=summarize(rows))
    write_report(report)
    return report


def _random_sine_field(
    base: HermitianOperator, drive: HermitianOperator, omega: float, phase: float
) -> TimeField:
    """Smooth random field H(t) = base + sin(omega t + phase) drive."""

    def ham(t: float) -> HermitianOperator:
        return HermitianOperator(base.matrix + math.sin(omega * t + phase) * drive.matrix)

    def deriv(t: float) -> HermitianOperator:
        return HermitianOperator(omega * math.cos(omega * t + phase) * drive.matrix)

    return TimeField(hamiltonian_at=ham, derivative_at=deriv)


def _operator_to_field_vector(op: HermitianOperator) -> tuple[float, np.ndarray]:
    """Inverse of field_to_operator for 2x2 operators: (h0, h)."""
    m = op.matrix
    h0 = 0.5 * (m[0, 0].real + m[1, 1].real)
    return h0, np.array([m[0, 1].real, -m[0, 1].imag, 0.5 * (m[0, 0].real - m[1, 1].real)])


def random_sweep(config: RunConfig) -> VerificationReport:
    """Random (field, state) sweep checking the inequality suite."""
    config.validate()
    conv = config.make_convention()
    dim = config.sweep_dim if config.sweep_dim is not None else 2
    if dim < 2:
        raise ConfigError(f"need sweep dimension >= 2, got {dim}")
    count = config.sweep_count if config.sweep_count is not None else config.samples
    if count <= 0:
        raise ConfigError(f"need a positive sweep count, got {count}")
    rng = np.random.default_rng(config.seed)
    rows = []
    worst_rob = math.inf
    worst_rs = math.inf
    bad_inequalities = 0
    for _ in range(count):
        base = uncertainty.random_hermitian(rng, dim)
        drive = uncertainty.random_hermitian(rng, dim)
        omega = rng.uniform(0.5, 2.0)
        phase = rng.uniform(0.0, 2.0 * math.pi)
        psi = uncertainty.random_state(rng, dim)
        t = rng.uniform(0.0, 1.0)
        tf = _random_sine_field(base, drive, omega, phase)
        h_op = tf.operator_at(t)
        hd_op = tf.derivative_operator_at(t)
        rob = uncertainty.robertson(h_op, hd_op, psi)
        rs = uncertainty.robertson_schrodinger(h_op, hd_op, psi)
        worst_rob = min(worst_rob, rob.slack)
        worst_rs = min(worst_rs, rs.slack)
        bad_inequalities += (not rob.satisfied) + (not rs.satisfied)
        ls = limit_sample(tf, psi, t, conv, fd_dt=config.dt_propagate)
        frame = None
        if dim == 2:
            h0, h = _operator_to_field_vector(h_op)
            _, hdot = _operator_to_field_vector(hd_op)
            frame = BlochFrame(a=state_to_bloch(psi), h=h, hdot=hdot, h0=h0)
        rows.append(_row_from_sample(ls, frame))
    base_summary = summarize(rows)
    summary = ReportSummary(
        max_fd_deviation=base_summary.max_fd_deviation,
        min_slack_loose=base_summary.min_slack_loose,
        min_slack_tight=base_summary.min_slack_tight,
        tag_histogram=base_summary.tag_histogram,
        degenerate_count=base_summary.degenerate_count,
        violations=base_summary.violations,
        worst_robertson_slack=worst_rob,
        worst_rs_slack=worst_rs,
        uncertainty_violations=bad_inequalities,
    )
    report = VerificationReport(config=config, rows=rows, summary=summary)
    write_report(report)
    return report


def _fmt(value) -> str:
    if value is None:
        return ""
    return f"{value:.17g}"


def render_csv(report: VerificationReport) -> str:
    """Fixed-schema CSV text (17 significant digits, LF line endings)."""
    lines = [",".join(CSV_COLUMNS)]
    for r in report.rows:
        lines.append(
            ",".join(
                [
                    _fmt(r.t), _fmt(r.v), _fmt(r.a_analytic), _fmt(r.a_fd),
                    _fmt(r.bound_loose), _fmt(r.bound_tight),
                    _fmt(r.slack_loose), _fmt(r.slack_tight),
                    _fmt(r.a_dot_h), _fmt(r.hperp_cross_hdotperp_norm),
                    r.tag, "1" if r.degenerate else "0",
                ]
            )
        )
    return "\n".join(lines) + "\n"


def render_json(report: VerificationReport) -> str:
    doc = {
        "config": asdict(report.config),
        "samples": [asdict(r) for r in report.rows],
        "summary": asdict(report.summary),
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def write_report(report: VerificationReport) -> Path:
    path = Path(report.config.output_path)
    try:
        if report.config.output_format == "json":
            path.write_text(render_json(report))
        else:
            path.write_text(render_csv(report))
    except OSError as exc:
        raise ConfigError(f"cannot write output file {path}: {exc}") from exc
    if report.config.plots:
        from .plots import render_report_figures

        render_report_figures(report, path)
    return path


# ---------------------------------------------------------------------------
# configuration file + flag plumbing

_KEY_ALIASES = {
    "scenario": "scenario",
    "t0": "t0",
    "t1": "t1",
    "samples": "samples",
    "dt": "dt_propagate",
    "convention": "convention",
    "hbar": "hbar",
    "format": "output_format",
    "out": "output_path",
    "seed": "seed",
    "sweep-dim": "sweep_dim",
    "sweep-count": "sweep_count",
    "plots": "plots",
}

_CASTS = {
    "t0": float, "t1": float, "samples": int, "dt_propagate": float,
    "hbar": float, "seed": int, "sweep_dim": int, "sweep_count": int,
}


def parse_config_file(path: str) -> dict:
    """Flat ``key = value`` file with # comments.

    Keys matching CLI flag names set those settings; any other key is
    taken as a scenario parameter (a real number).
    """
    settings: dict = {"params": {}}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        norm = key.replace("_", "-").lower()
        if norm in _KEY_ALIASES:
            attr = _KEY_ALIASES[norm]
            if attr == "plots":
                settings[attr] = value.lower() in ("1", "true", "yes", "on")
            elif attr in _CASTS:
                try:
                    settings[attr] = _CASTS[attr](value)
                except ValueError as exc:
                    raise ConfigError(f"{path}:{lineno}: bad value for {key}: {value!r}") from exc
            else:
                settings[attr] = value
        else:
            try:
                settings["params"][key] = float(value)
            except ValueError as exc:
                raise ConfigError(
                    f"{path}:{lineno}: parameter {key} must be a real number, got {value!r}"
                ) from exc
    return settings


def _parse_param_flags(pairs) -> dict:
    params = {}
    for item in pairs or []:
        if "=" not in item:
            raise ConfigError(f"--param expects key=value, got {item!r}")
        key, value = item.split("=", 1)
        try:
            params[key.strip()] = float(value)
        except ValueError as exc:
            raise ConfigError(f"--param {key}: not a real number: {value!r}") from exc
    return params


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qaccel",
        description=(
            "Verify speed/acceleration bounds of driven quantum evolution on a "
            "time grid or over random (field, state) sweeps."
        ),
    )
    parser.add_argument("--config", help="flat key = value config file (# comments)")
    parser.add_argument("--scenario", help="example1 | example2 | example3 | custom")
    parser.add_argument(
        "--param", action="append", metavar="KEY=VALUE",
        help="scenario parameter (repeatable)",
    )
    parser.add_argument("--t0", type=float, help="grid start time")
    parser.add_argument("--t1", type=float, help="grid end time")
    parser.add_argument("--samples", type=int, help="number of grid samples (>= 2)")
    parser.add_argument("--dt", type=float, help="propagation / finite-difference step")
    parser.add_argument("--convention", choices=CONVENTIONS, help="speed normalization")
    parser.add_argument("--hbar", type=float, help="Planck constant (pati convention only)")
    parser.add_argument("--format", choices=FORMATS, help="output format")
    parser.add_argument("--out", help="output file path")
    parser.add_argument("--seed", type=int, help="RNG seed for random sweeps")
    parser.add_argument("--sweep-dim", type=int, help="random sweep: Hilbert dimension")
    parser.add_argument("--sweep-count", type=int, help="random sweep: number of samples")
    parser.add_argument("--plots", action="store_true", default=None,
                        help="also render figures next to the output file")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    settings: dict = {"params": {}}
    if args.config:
        settings.update(parse_config_file(args.config))
    flag_map = {
        "scenario": args.scenario, "t0": args.t0, "t1": args.t1,
        "samples": args.samples, "dt_propagate": args.dt,
        "convention": args.convention, "hbar": args.hbar,
        "output_format": args.format, "output_path": args.out,
        "seed": args.seed, "sweep_dim": args.sweep_dim,
        "sweep_count": args.sweep_count, "plots": args.plots,
    }
    for key, value in flag_map.items():
        if value is not None:
            settings[key] = value
    settings["params"] = {**settings.get("params", {}), **_parse_param_flags(args.param)}
    return RunConfig(**settings)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = config_from_args(args)
        report = random_sweep(config) if config.sweep_mode else run(config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except QaccelError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3
    s = report.summary
    print(f"wrote {report.config.output_path} ({len(report.rows)} samples)")
    if s.max_fd_deviation is not None:
        print(f"max |a_fd - a_analytic| = {s.max_fd_deviation:.3e}")
    if s.min_slack_loose is not None:
        print(f"min slack: loose {s.min_slack_loose:.3e}, tight {s.min_slack_tight:.3e}")
    if s.worst_robertson_slack is not None:
        print(
            f"worst uncertainty slack: robertson {s.worst_robertson_slack:.3e}, "
            f"robertson-schrodinger {s.worst_rs_slack:.3e}"
        )
    if s.tag_histogram:
        counts = ", ".join(f"{k}: {v}" for k, v in sorted(s.tag_histogram.items()))
        print(f"classification: {counts}")
    print(f"degenerate samples: {s.degenerate_count}")
    if report.total_violations:
        print(f"BOUND VIOLATIONS: {report.total_violations}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
