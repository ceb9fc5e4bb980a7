"""Command-line entry point: ``spacetimelab CONFIG`` or ``spacetimelab --experiment NAME --set k=v ...``.

Configs are ``key = value`` lines with ``#`` comments. Every run writes CSV
files whose header comments echo the experiment, seed and parameters, so a
file alone is enough to reproduce it. Exit status: 0 success, 1 experiment
assertion failed, 2 configuration error.
"""

from __future__ import annotations

import argparse
import ast
import csv
import io
import math
import operator
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from . import acceptance, causal, frames, propagation, quantum_scales as qs, substrate
from .substrate import fmt

OUTPUT_ENV = "SPACETIMELAB_OUTPUT_DIR"
DEFAULT_OUTPUT = "results"
EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2
REQUIRED = object()


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# value parsers


_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv}


def _eval_number(node):
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) and not isinstance(node.value, bool):
        return float(node.value)
    if isinstance(node, ast.Name) and node.id == "pi":
        return math.pi
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval_number(node.operand)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        return _BINOPS[type(node.op)](_eval_number(node.left), _eval_number(node.right))
    raise ValueError("not a number")


def parse_float(text: str) -> float:
    """Plain float, or simple arithmetic on numbers and ``pi`` (``3*pi/4``)."""
    try:
        return float(text)
    except ValueError:
        pass
    try:
        v = _eval_number(ast.parse(text, mode="eval").body)
    except (SyntaxError, ValueError, ZeroDivisionError):
        raise ValueError(f"expected a number, got {text!r}") from None
    return v


def parse_int(text: str) -> int:
    try:
        return int(text.replace("_", ""), 0)
    except ValueError:
        raise ValueError(f"expected an integer, got {text!r}") from None


def parse_bool(text: str) -> bool:
    t = text.lower()
    if t in ("true", "yes", "1", "on"):
        return True
    if t in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"expected true/false, got {text!r}")


def parse_ints(text: str) -> tuple[int, ...]:
    items = [s.strip() for s in text.split(",") if s.strip()]
    if not items:
        raise ValueError("expected a comma-separated list of integers")
    return tuple(parse_int(s) for s in items)


def parse_hops(text: str) -> tuple[tuple[int, float], ...]:
    """``d:kappa`` pairs separated by commas, e.g. ``1:1,2:0.5``."""
    out = []
    for item in text.split(","):
        d, sep, k = item.partition(":")
        if not sep:
            raise ValueError(f"hop {item.strip()!r} must look like distance:stiffness")
        out.append((parse_int(d.strip()), parse_float(k.strip())))
    return tuple(out)


def parse_str(text: str) -> str:
    return text


# ---------------------------------------------------------------------------
# config


@dataclass(frozen=True)
class Param:
    parse: Callable[[str], object]
    default: object = REQUIRED


COMMON = {
    "experiment": Param(parse_str),
    "seed": Param(parse_int, 0),
    "output": Param(parse_str, DEFAULT_OUTPUT),
}

SCHEMAS: dict[str, dict[str, Param]] = {
    "dispersion": {
        "hops": Param(parse_hops),
        "mass": Param(parse_float, 1.0),
        "spacing": Param(parse_float, 1.0),
        "n_k": Param(parse_int, propagation.GRID_POINTS),
    },
    "harmonics": {
        "hop": Param(parse_int),
        "kappa": Param(parse_float, 1.0),
        "mass": Param(parse_float, 1.0),
        "spacing": Param(parse_float, 1.0),
        "n_sites": Param(parse_int, 4000),
        "reach": Param(parse_float, 1500.0),
        "tolerance": Param(parse_float, 0.05),
    },
    "phased-array": {
        "c_mult": Param(parse_ints),
        "n_sites": Param(parse_int, 7),
        "max_tick": Param(parse_int, -1),
        "simulate": Param(parse_bool, False),
        "hop": Param(parse_int, 1),
        "chain_sites": Param(parse_int, 1200),
        "n_ticks": Param(parse_int, 200),
        "ticks_per_unit": Param(parse_int, 20),
        "impulse": Param(parse_float, 1.0),
    },
    "frames": {
        "vA": Param(parse_float, 0.0),
        "vB": Param(parse_float),
        "c_s": Param(parse_float, 1.0),
        "epsilon": Param(parse_float, 0.5),
        "n_events": Param(parse_int, 20),
        "half_width": Param(parse_float, 1.0),
        "tolerance": Param(parse_float, 1e-6),
    },
    "causal-check": {
        "map": Param(parse_str, "similarity"),
        "v": Param(parse_float, 0.0),
        "dilation": Param(parse_float, 1.0),
        "shift_t": Param(parse_float, 0.0),
        "shift_x": Param(parse_float, 0.0),
        "scale_x": Param(parse_float, 2.0),
        "amplitude": Param(parse_float, 0.1),
        "c_s": Param(parse_float, 1.0),
        "relation": Param(parse_str, causal.CHRONOLOGICAL),
        "n_events": Param(parse_int, 100),
        "n_trials": Param(parse_int, 10_000),
    },
    "bell": {
        "theta_a": Param(parse_float),
        "theta_b": Param(parse_float),
        "n": Param(parse_int, 1_000_000),
        "borel_k": Param(parse_int, 0),
    },
    "clock": {
        "ticks": Param(parse_int, qs.CAESIUM_HZ),
    },
    "ca": {
        "n": Param(parse_int, 101),
        "radius": Param(parse_int, 1),
        "rule": Param(parse_str, "or"),
        "steps": Param(parse_int, 50),
        "init": Param(parse_str, "center"),
    },
    "perm-dist": {
        "p": Param(parse_ints),
        "q": Param(parse_ints),
    },
    "acceptance": {
        "criterion": Param(parse_str, "all"),
    },
}

MAP_KINDS = ("similarity", "anisotropic", "quadratic", "random-quadratic")


@dataclass(frozen=True)
class RunConfig:
    experiment: str
    params: dict[str, str] = field(default_factory=dict)
    seed: int = 0
    output: str = DEFAULT_OUTPUT

    def values(self) -> dict[str, object]:
        """Parameters coerced to their types, defaults filled in."""
        return coerce_params(self.experiment, self.params)


def coerce_params(experiment: str, params: dict[str, str]) -> dict[str, object]:
    if experiment not in SCHEMAS:
        raise ConfigError(f"unknown experiment {experiment!r}; choose from {', '.join(SCHEMAS)}")
    schema = SCHEMAS[experiment]
    out = {}
    for key, spec in schema.items():
        if key in params:
            try:
                out[key] = spec.parse(params[key])
            except ValueError as exc:
                raise ConfigError(f"key {key!r}: {exc}") from None
        elif spec.default is REQUIRED:
            raise ConfigError(f"missing required key {key!r} for experiment {experiment!r}")
        else:
            out[key] = spec.default
    unknown = sorted(set(params) - set(schema))
    if unknown:
        raise ConfigError(f"unknown key {unknown[0]!r} for experiment {experiment!r}")
    return out


def _split_lines(text: str) -> list[tuple[int, str, str]]:
    rows = []
    seen: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        if key in seen:
            raise ConfigError(f"line {lineno}: duplicate key {key!r} (first set on line {seen[key]})")
        seen[key] = lineno
        rows.append((lineno, key, value))
    return rows


def parse_config(text: str) -> RunConfig:
    """Parse and validate a ``key = value`` config; errors name the offending line."""
    rows = _split_lines(text)
    where = {key: lineno for lineno, key, _ in rows}
    values = {key: value for _, key, value in rows}
    if "experiment" not in values:
        raise ConfigError("missing required key 'experiment'")
    name = values["experiment"]
    if name not in SCHEMAS:
        raise ConfigError(f"line {where['experiment']}: unknown experiment {name!r}; choose from {', '.join(SCHEMAS)}")
    schema = SCHEMAS[name]
    for lineno, key, value in rows:
        spec = COMMON.get(key) or schema.get(key)
        if spec is None:
            raise ConfigError(f"line {lineno}: unknown key {key!r} for experiment {name!r}")
        try:
            spec.parse(value)
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: key {key!r}: {exc}") from None
    for key, spec in schema.items():
        if spec.default is REQUIRED and key not in values:
            raise ConfigError(f"missing required key {key!r} for experiment {name!r}")
    params = {k: v for k, v in values.items() if k not in COMMON}
    seed = parse_int(values["seed"]) if "seed" in values else 0
    if not 0 <= seed < 1 << 64:
        raise ConfigError(f"line {where['seed']}: seed must fit in 64 unsigned bits")
    return RunConfig(name, params, seed, values.get("output", DEFAULT_OUTPUT))


# ---------------------------------------------------------------------------
# output


class Outcome:
    """CSV files and a pass/fail verdict collected by one experiment."""

    def __init__(self, config: RunConfig):
        self.config = config
        self.files: dict[str, str] = {}
        self.failures: list[str] = []
        self.messages: list[str] = []

    def header(self, extra: dict[str, object] | None = None) -> str:
        lines = [f"# experiment = {self.config.experiment}", f"# seed = {self.config.seed}"]
        lines += [f"# {k} = {self.config.params[k]}" for k in sorted(self.config.params)]
        lines += [f"# {k} = {v}" for k, v in (extra or {}).items()]
        return "\n".join(lines) + "\n"

    def table(self, name: str, columns, rows, extra: dict[str, object] | None = None) -> None:
        buf = io.StringIO()
        buf.write(self.header(extra))
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([_cell(x) for x in row])
        self.files[name] = buf.getvalue()

    def raw(self, name: str, body: str, extra: dict[str, object] | None = None) -> None:
        self.files[name] = self.header(extra) + body

    def require(self, ok: bool, message: str) -> None:
        if not ok:
            self.failures.append(message)

    def say(self, message: str) -> None:
        self.messages.append(message)


def _cell(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return fmt(float(x))
    return str(x)


# ---------------------------------------------------------------------------
# experiments


def _dispersion(cfg: RunConfig, p: dict, out: Outcome) -> None:
    profile = substrate.CouplingProfile(p["hops"], p["mass"], p["spacing"])
    curve = propagation.dispersion_curve(profile, p["n_k"])
    out.raw("dispersion.csv", curve.to_csv())
    vmax = propagation.max_signal_speed(profile)
    out.table("dispersion_summary.csv", ["max_signal_speed", "long_wave_speed", "max_frequency", "max_step"],
              [(vmax, propagation.long_wave_speed(profile), propagation.max_frequency(profile),
                substrate.max_step(profile))])
    out.say(f"max signal speed {vmax:.12g}")


def _harmonics(cfg: RunConfig, p: dict, out: Outcome) -> None:
    profile = substrate.CouplingProfile.single(p["hop"], p["kappa"], p["mass"], p["spacing"])
    base = propagation.max_signal_speed(substrate.CouplingProfile.single(1, p["kappa"], p["mass"], p["spacing"]))
    analytic = propagation.max_signal_speed(profile)
    fit = acceptance.harmonic_front(p["hop"], p["n_sites"], p["kappa"], p["mass"], p["spacing"], p["reach"])
    expected = p["hop"] * base
    rel = abs(fit.speed - expected) / expected
    ok = rel < p["tolerance"]
    out.table("harmonics.csv",
              ["hop", "baseline_speed", "analytic_speed", "expected_speed", "fitted_speed", "relative_error", "pass"],
              [(p["hop"], base, analytic, expected, fit.speed, rel, ok)])
    out.raw("harmonics_front.csv", fit.to_csv(), {"threshold": fmt(fit.threshold)})
    out.require(ok, f"fitted speed {fit.speed:.6g} is {rel:.3%} from {expected:.6g}")
    out.say(f"hop {p['hop']}: fitted front speed {fit.speed:.6g} (expected {expected:.6g})")


def _phased_array(cfg: RunConfig, p: dict, out: Outcome) -> None:
    max_tick = None if p["max_tick"] < 0 else p["max_tick"]
    summary = []
    for c in p["c_mult"]:
        sched = propagation.table1_schedule(c, p["n_sites"], max_tick)
        out.raw(f"phased_array_c{c}.csv", sched.to_csv())
        if not p["simulate"]:
            continue
        profile = substrate.CouplingProfile.single(p["hop"])
        n = p["chain_sites"]
        origin = n // 10
        long_sched = propagation.table1_schedule(c, n - origin - n // 10, p["n_ticks"])
        dt = substrate.max_step(profile)
        hist = propagation.drive(substrate.new_chain(n, profile), long_sched, p["impulse"], dt,
                                 p["ticks_per_unit"], n_ticks=p["n_ticks"], origin=origin)
        tick = dt * p["ticks_per_unit"]
        try:
            fit = propagation.estimate_front_speed(hist, source=origin, side="forward")
            speed = fit.speed
        except propagation.InsufficientSignalError:
            speed = math.nan
        summary.append((c, p["hop"], long_sched.drive_speed / tick, speed,
                        propagation.max_signal_speed(profile)))
        out.say(f"c_mult {c}: drive locus {long_sched.drive_speed / tick:.6g}, fitted front {speed:.6g}")
    if summary:
        out.table("phased_array_drive.csv",
                  ["c_mult", "hop", "drive_speed", "front_speed", "max_signal_speed"], summary)


def _frames(cfg: RunConfig, p: dict, out: Outcome) -> None:
    c = p["c_s"]
    a = frames.ObserverFrame(p["vA"], c, epsilon=p["epsilon"])
    b = frames.ObserverFrame(p["vB"], c, epsilon=p["epsilon"])
    rng = qs.philox(cfg.seed)
    events = frames.random_events(p["n_events"], rng, c, p["half_width"])
    rows = []
    for i, e in enumerate(events):
        rows.append((i, *frames.radar_coordinates(e, a), *frames.radar_coordinates(e, b)))
    out.table("frames.csv", ["event_id", "tA", "xiA", "tB", "xiB"], rows)
    fit = frames.fit_transformation(events, a, b)
    out.table("frames_matrix.csv", ["m00", "m01", "m10", "m11", "b0", "b1"], [fit.entries()],
              {"residual": fmt(fit.residual)})
    if p["epsilon"] == 0.5:
        exact = frames.lorentz(frames.compose_velocity(p["vA"], p["vB"], c), c).matrix
        err = float(np.abs(fit.matrix - exact).max() / np.abs(exact).max())
        out.require(err <= p["tolerance"], f"fitted matrix differs from the boost by {err:.3g}")
        out.say(f"max relative deviation from analytic boost {err:.3g}")
    else:
        out.say(f"epsilon={p['epsilon']}: fit residual {fit.residual:.3g} (no boost comparison)")


def _build_map(p: dict, rng: np.random.Generator):
    kind, c = p["map"], p["c_s"]
    if kind == "similarity":
        return causal.SimilarityMap(p["v"], (p["shift_t"], p["shift_x"]), p["dilation"], c)
    if kind == "anisotropic":
        return causal.anisotropic(p["scale_x"])
    if kind == "quadratic":
        return causal.quadratic_time_shear(p["amplitude"], c)
    if kind == "random-quadratic":
        return causal.random_quadratic(rng, p["amplitude"], p["amplitude"], c)
    raise ConfigError(f"map must be one of {', '.join(MAP_KINDS)}, got {kind!r}")


def _causal_check(cfg: RunConfig, p: dict, out: Outcome) -> None:
    ccfg = causal.CausalConfig(p["c_s"], p["relation"])
    rng = qs.philox(cfg.seed)
    fn = _build_map(p, rng)
    events = frames.random_events(p["n_events"], rng, p["c_s"])
    verdict = causal.preserves_order(fn, events, ccfg)
    probe = causal.find_violation(fn, ccfg, p["n_trials"], seed=cfg.seed)
    extra = {
        "verdict": "preserved" if verdict.preserved else "violated",
        "pairs": verdict.n_pairs,
        "violations": len(verdict.violations),
        "first_probe_violation": "none" if probe is None else probe[0],
    }
    out.table("causal_check.csv", ["t1", "x1", "t2", "x2", "before_p", "before_q", "after_p", "after_q"],
              [v.row() for v in verdict.violations], extra)
    if p["map"] == "similarity":
        out.require(verdict.preserved and probe is None, "a similarity map changed the causal order")
    out.say(f"{p['map']}: {len(verdict.violations)} of {verdict.n_pairs} pairs violated; "
            f"probe {'found none' if probe is None else f'hit at trial {probe[0]}'}")


def _bell(cfg: RunConfig, p: dict, out: Outcome) -> None:
    ta, tb, n = p["theta_a"], p["theta_b"], p["n"]
    if n < 1:
        raise ConfigError("n must be positive")
    a_bits, b_bits = qs.singlet_outcomes(ta, tb, n, cfg.seed)
    c = qs.singlet_sample(ta, tb, n, cfg.seed)
    e = qs.correlation(c)
    err = qs.correlation_stderr(c)
    out.table("bell.csv", ["theta_a", "theta_b", "n", "E", "stderr"], [(ta, tb, n, e, err)],
              {"expected_E": fmt(qs.expected_correlation(ta, tb))})
    sigma = math.sqrt(max(1 - math.cos(ta - tb) ** 2, 0.0) / n)
    dev = abs(e - qs.expected_correlation(ta, tb))
    out.require(dev <= 4 * sigma or dev == 0, f"correlation {e:.6g} is more than 4 sigma from {-math.cos(ta - tb):.6g}")
    if p["borel_k"] > 0:
        rep = qs.borel_block_test(a_bits, p["borel_k"])
        out.table("bell_borel.csv", ["k", "block", "freq", "expected", "pass"],
                  [(r.k, r.block, r.freq, r.expected, r.passed) for r in rep.rows])
    out.say(f"E = {e:.6g} +/- {err:.2g} (singlet prediction {qs.expected_correlation(ta, tb):.6g})")


def _clock(cfg: RunConfig, p: dict, out: Outcome) -> None:
    secs = qs.ticks_to_seconds(p["ticks"])
    ratio, rounded = qs.metre_in_ticks()
    out.table("clock.csv", ["ticks", "seconds_exact", "seconds", "metre_ticks_exact", "metre_ticks", "metre_ticks_rounded"],
              [(p["ticks"], str(secs), float(secs), str(ratio), float(ratio), rounded)])
    out.say(f"{p['ticks']} ticks = {secs} s; one metre of light travel = {float(ratio):.10g} ticks")


def _ca(cfg: RunConfig, p: dict, out: Outcome) -> None:
    n, r = p["n"], p["radius"]
    rule = substrate.or_rule if p["rule"] == "or" else parse_int(p["rule"])
    if p["init"] == "center":
        bits = np.zeros(n, dtype=np.uint8)
        bits[n // 2] = 1
    elif p["init"] == "random":
        bits = qs.philox(cfg.seed).integers(0, 2, n).astype(np.uint8)
    else:
        raise ConfigError(f"init must be 'center' or 'random', got {p['init']!r}")
    start = substrate.new_ca(n, r, rule, bits)
    layers = substrate.record_ca(start, p["steps"] + 1)
    out.raw("ca.csv", substrate.ca_history_csv(layers))
    end = substrate.run_ca(start, p["steps"])
    back = substrate.swap_layers(substrate.run_ca(substrate.swap_layers(end), p["steps"]))
    out.require(back.same_layers(start), "backward evolution did not recover the initial layers")
    if p["init"] == "center":
        for t in range(layers.shape[0]):
            s = substrate.support(layers[t], n // 2)
            out.require(s is None or max(-s[0], s[1]) <= r * t, f"tick {t}: support escapes the light cone")
    out.say(f"{p['steps']} steps forward and back: {'bit-exact' if back.same_layers(start) else 'MISMATCH'}")


def _perm_dist(cfg: RunConfig, p: dict, out: Outcome) -> None:
    try:
        a, b = qs.Permutation(p["p"]), qs.Permutation(p["q"])
        rows = [(m, qs.permutation_distance(a, b, m)) for m in qs.METRICS]
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    out.table("perm_dist.csv", ["metric", "distance"], rows)
    out.say(", ".join(f"{m} {d}" for m, d in rows))


def _acceptance(cfg: RunConfig, p: dict, out: Outcome) -> None:
    sel = p["criterion"]
    if sel == "all":
        which = sorted(acceptance.CRITERIA)
    else:
        try:
            which = list(parse_ints(sel))
        except ValueError:
            raise ConfigError(f"criterion must be 'all' or numbers 1-12, got {sel!r}") from None
        bad = [i for i in which if i not in acceptance.CRITERIA]
        if bad:
            raise ConfigError(f"no criterion {bad[0]}")
    rows = []
    for res in acceptance.run_criteria(which):
        for ch in res.checks:
            rows.append((res.number, ch.name, ch.value, ch.threshold, ch.passed))
        out.require(res.passed, res.summary())
        out.say(res.summary())
    # runtimes stay on stdout so the CSV is reproducible
    out.table("acceptance.csv", ["criterion", "check", "value", "threshold", "pass"], rows)


EXPERIMENTS: dict[str, Callable[[RunConfig, dict, Outcome], None]] = {
    "dispersion": _dispersion,
    "harmonics": _harmonics,
    "phased-array": _phased_array,
    "frames": _frames,
    "causal-check": _causal_check,
    "bell": _bell,
    "clock": _clock,
    "ca": _ca,
    "perm-dist": _perm_dist,
    "acceptance": _acceptance,
}


def output_dir(config: RunConfig) -> Path:
    return Path(os.environ.get(OUTPUT_ENV) or config.output)


def run(config: RunConfig, quiet: bool = False, dest: Path | None = None) -> int:
    """Run one experiment and write its CSV files; returns the exit status.

    ``dest`` overrides both the config's output path and the environment.
    """
    say = (lambda *_: None) if quiet else (lambda m: print(m))
    err = (lambda *_: None) if quiet else (lambda m: print(m, file=sys.stderr))
    out = Outcome(config)
    try:
        values = config.values()
        EXPERIMENTS[config.experiment](config, values, out)
    except (ConfigError, substrate.ConfigurationError, frames.FrameError, frames.RankError,
            substrate.StepSizeError) as exc:
        err(f"configuration error: {exc}")
        return EXIT_CONFIG
    except ValueError as exc:
        err(f"configuration error: {exc}")
        return EXIT_CONFIG
    dest = Path(dest) if dest is not None else output_dir(config)
    dest.mkdir(parents=True, exist_ok=True)
    for name, body in out.files.items():
        (dest / name).write_text(body, encoding="utf-8", newline="")
    for m in out.messages:
        say(m)
    say(f"wrote {', '.join(sorted(out.files))} to {dest}")
    if out.failures:
        for f in out.failures:
            err(f"FAILED: {f}")
        return EXIT_FAIL
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="spacetimelab", description=__doc__.splitlines()[0])
    ap.add_argument("config", nargs="?", help="path to a key = value config file")
    ap.add_argument("--experiment", help="experiment name, instead of or on top of a config file")
    ap.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="set or override a parameter")
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.config is None and args.experiment is None:
        print("error: give a config path or --experiment", file=sys.stderr)
        return EXIT_CONFIG
    text = ""
    if args.config is not None:
        try:
            text = Path(args.config).read_text(encoding="utf-8")
        except OSError as exc:
            print(f"configuration error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
    overrides = {}
    if args.experiment is not None:
        overrides["experiment"] = args.experiment
    for item in args.set:
        key, sep, value = item.partition("=")
        if not sep:
            print(f"configuration error: --set {item!r} must be KEY=VALUE", file=sys.stderr)
            return EXIT_CONFIG
        overrides[key.strip()] = value.strip()
    if overrides:
        lines = [ln for ln in text.splitlines() if ln.split("#", 1)[0].partition("=")[0].strip() not in overrides]
        text = "\n".join(lines + [f"{k} = {v}" for k, v in overrides.items()])
    try:
        config = parse_config(text)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
