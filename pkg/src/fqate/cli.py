"""Command line entry point.

    fqate spectrum       --config parabolic --out out/
    fqate schedule       --config parabolic
    fqate ate run        --config parabolic --jobs 4
    fqate structopt run  --config h2plus --seed 1
    fqate check

Exit status is 0 on success, 2 for configuration errors and 3 for
numerical failures.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from fqate.ate import AteRun, evolve, sweep_over_n
from fqate.config import RunConfig, parse_config
from fqate.errors import ConfigError, DimensionCapError, NumericalError
from fqate.experiments import Experiment, build_experiment
from fqate.scheduling import linear_schedule, optimal_schedule
from fqate.structopt import sample_measurements

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
SCHEDULE_POINTS = 257


def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    return "%.12g" % value


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence], comments: Sequence[str]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        for line in comments:
            fh.write(f"# {line}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def write_summary(path: Path, summary: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8")


class Runner:
    def __init__(self, cfg: RunConfig, out: Path, jobs: int) -> None:
        self.cfg = cfg
        self.out = out
        self.jobs = jobs
        self.digest = cfg.digest()
        try:
            self.exp: Experiment = build_experiment(cfg)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        self._table = None

    @property
    def table(self):
        if self._table is None:
            self._table = self.exp.indicator(self.jobs)
        return self._table

    def _optimal(self):
        try:
            return optimal_schedule(self.table.a, self.table.f)
        except ValueError as exc:
            raise NumericalError(f"optimal schedule: {exc}") from None

    def _summary(self, command: str, oracle_optional: bool = False, **extra) -> dict:
        try:
            c, f_max = self._optimal().c, self.table.f_max
        except DimensionCapError:
            if not oracle_optional:
                raise
            c = f_max = None
        out = {
            "command": command,
            "config_sha256": self.digest,
            "c": c,
            "f_max": f_max,
            "final_delta": None,
            "J_star": None,
        }
        out.update(extra)
        return out

    def spectrum(self) -> dict:
        t = self.table
        rows = zip(t.a, t.f, t.gap1, t.e0, t.e1)
        write_csv(self.out / "spectrum.csv", ["A", "f", "gap1", "e0", "e1"], rows, [f"config_sha256={self.digest}"])
        summary = self._summary("spectrum")
        write_summary(self.out / "summary.json", summary)
        return summary

    def schedule(self) -> dict:
        sched = self._optimal()
        s = np.linspace(0.0, 1.0, SCHEDULE_POINTS)
        rows = zip(s, linear_schedule()(s), sched(s))
        comments = [f"config_sha256={self.digest}", f"c={_fmt(sched.c)}"]
        write_csv(self.out / "schedule.csv", ["s", "A_lin", "A_opt"], rows, comments)
        summary = self._summary("schedule")
        write_summary(self.out / "summary.json", summary)
        return summary

    def _sweeps(self, oracle_optional: bool = False):
        cfg = self.cfg
        try:
            target = self.exp.target()
        except DimensionCapError:
            # past the dense cap the structure search still reports weights
            if not oracle_optional:
                raise
            target = None
        for kind in cfg.schedules:
            sched = linear_schedule() if kind == "linear" else self._optimal()
            rows = sweep_over_n(self.exp.problem, sched, cfg.dt, cfg.steps, self.exp.initial, target, self.jobs)
            yield kind, rows

    def ate(self) -> dict:
        k = self.exp.configs.count if self.exp.configs else self.exp.problem.layout.nuclear_dimension
        has_weights = self.exp.problem.layout.nuclear_qubits > 0
        header = ["N", "t_f", "delta_N"] + ([f"w_{j}" for j in range(k)] if has_weights else [])
        finals = {}
        for kind, rows in self._sweeps():
            body = [[r.steps, r.final_time, r.delta] + (list(r.weights[:k]) if has_weights else []) for r in rows]
            write_csv(self.out / f"ate_{kind}.csv", header, body, [f"config_sha256={self.digest}", f"schedule={kind}"])
            finals[kind] = rows[-1].delta
        summary = self._summary("ate", final_delta=finals[self.cfg.schedules[0]], final_delta_by_schedule=finals)
        write_summary(self.out / "summary.json", summary)
        return summary

    def structopt(self, seed: int) -> dict:
        if self.exp.problem.layout.nuclear_qubits == 0:
            raise ConfigError("structopt run needs a config with a nuclear register")
        k = self.exp.configs.count if self.exp.configs else self.exp.problem.layout.nuclear_dimension
        header = ["N"] + [f"w_{j}" for j in range(k)] + ["J_star", "delta_N"]
        finals, stars, counts = {}, {}, {}
        for kind, rows in self._sweeps(oracle_optional=True):
            body = []
            for r in rows:
                weights = np.asarray(r.weights)
                body.append([r.steps, *weights[:k], int(np.argmax(weights)), "" if r.delta is None else r.delta])
            write_csv(self.out / f"structopt_{kind}.csv", header, body, [f"config_sha256={self.digest}", f"schedule={kind}"])
            finals[kind] = rows[-1].delta
            stars[kind] = int(np.argmax(rows[-1].weights))
            if self.cfg.shots:
                counts[kind] = self._sample(kind, seed)
        primary = self.cfg.schedules[0]
        extra = {"final_delta": finals[primary], "J_star": stars[primary], "final_delta_by_schedule": finals}
        if counts:
            extra.update(seed=seed, shots=self.cfg.shots, counts=counts)
        summary = self._summary("structopt", oracle_optional=True, **extra)
        write_summary(self.out / "summary.json", summary)
        return summary

    def _sample(self, kind: str, seed: int) -> list[int]:
        cfg = self.cfg
        sched = linear_schedule() if kind == "linear" else self._optimal()
        final = evolve(AteRun(self.exp.problem, sched, cfg.dt, cfg.steps[-1], checkpoint_steps=()), self.exp.initial)
        return [int(c) for c in sample_measurements(final, cfg.shots, seed)]


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config path or a bundled name (parabolic, h2plus)")
    common.add_argument("--out", type=Path, help="output directory (default: config output_dir)")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")
    common.add_argument("--seed", type=int, help="seed for measurement sampling; overrides the config")

    parser = argparse.ArgumentParser(prog="fqate", description="First-quantized adiabatic state preparation")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("spectrum", parents=[common], help="indicator f(A), gap and lowest levels")
    sub.add_parser("schedule", parents=[common], help="linear and optimal schedules")
    ate = sub.add_parser("ate", help="adiabatic evolution sweeps")
    ate.add_subparsers(dest="action", required=True).add_parser("run", parents=[common])
    so = sub.add_parser("structopt", help="structure search over nuclear configurations")
    so.add_subparsers(dest="action", required=True).add_parser("run", parents=[common])
    sub.add_parser("check", parents=[common], help="invariant suite on small instances")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    if args.command == "check":
        from fqate.checks import run_checks

        results = run_checks()
        for r in results:
            print(r.line())
        return EXIT_OK if all(r.passed for r in results) else EXIT_NUMERICAL
    try:
        if args.jobs < 1:
            raise ConfigError("--jobs must be >= 1")
        if args.seed is not None and not 0 <= args.seed < 2**64:
            raise ConfigError("--seed must fit in an unsigned 64-bit integer")
        default = "h2plus" if args.command == "structopt" else "parabolic"
        cfg = parse_config(args.config or default)
        seed = cfg.seed if args.seed is None else args.seed
        runner = Runner(cfg, args.out or Path(cfg.output_dir), args.jobs)
        if args.command == "spectrum":
            summary = runner.spectrum()
        elif args.command == "schedule":
            summary = runner.schedule()
        elif args.command == "ate":
            summary = runner.ate()
        else:
            summary = runner.structopt(seed)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    print(json.dumps(summary, sort_keys=True))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
