"""Scaling benchmarks: trace length (four request/grant formulas) and window width."""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

from .core import Specification, Trace
from .dense import evaluate_dense
from .discrete import DiscreteMonitor, evaluate_discrete
from .parser import parse_formula
from .rewrite import pastify

FORMULAS = {
    "phi1": "req >= 3",
    "phi2": "req >= 3 implies gnt >= 3",
    "phi3": "req >= 3 implies eventually[0:5](gnt >= 3)",
    "phi4": "historically((req >= 3) implies ((not (req >= 3)) until[0:5] (gnt >= 3)))",
}

WINDOW_FORMULA = "always[0:{k}](a + b >= -2)"

COLUMNS = ("suite", "formula", "mode", "n", "reps", "mean_seconds")


@dataclass
class BenchConfig:
    sizes: tuple = (10**3, 10**4, 10**5, 10**6)
    reps: int = 50
    modes: tuple = ("discrete", "dense")
    windows: tuple = (10**2, 10**3, 10**4, 10**5, 10**6)
    window_samples: int = 2 * 10**6
    seed: int = 0
    formulas: tuple = field(default_factory=lambda: tuple(FORMULAS))


def synthetic_trace(names, n: int, seed: int = 0, lo: int = -5, hi: int = 5) -> Trace:
    rng = random.Random(seed)
    times = range(n)
    return Trace.from_columns(times, {v: [rng.randint(lo, hi) for _ in times] for v in names})


def _time(fn, reps: int) -> float:
    total = 0.0
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        total += time.perf_counter() - t0
    return total / reps


def formula_scaling(cfg: BenchConfig):
    """Offline evaluation time of each formula against trace length."""
    for n in cfg.sizes:
        trace = synthetic_trace(("req", "gnt"), n, cfg.seed)
        for name in cfg.formulas:
            spec = Specification.from_formula(parse_formula(FORMULAS[name]), period=1)
            for mode in cfg.modes:
                if mode == "discrete":
                    fn = lambda: evaluate_discrete(spec, trace)
                else:
                    fn = lambda: evaluate_dense(spec, trace)
                yield ("formula-scaling", name, mode, n, cfg.reps, _time(fn, cfg.reps))


def run_window(k: int, values_a, values_b) -> float:
    """Online run of the pastified window formula; returns wall time in seconds."""
    f = pastify(parse_formula(WINDOW_FORMULA.format(k=k)))
    mon = DiscreteMonitor(Specification.from_formula(f, period=1))
    update = mon.update
    env = {}
    t0 = time.perf_counter()
    for a, b in zip(values_a, values_b):
        env["a"] = a
        env["b"] = b
        update(env)
    return time.perf_counter() - t0


def window_scaling(cfg: BenchConfig):
    """Online per-trace time of ``always[0:k](a + b >= -2)`` for growing ``k``."""
    rng = random.Random(cfg.seed)
    n = cfg.window_samples
    a = [float(rng.randint(-2, 2)) for _ in range(n)]
    b = [float(rng.randint(-2, 2)) for _ in range(n)]
    for k in cfg.windows:
        mean = sum(run_window(k, a, b) for _ in range(cfg.reps)) / cfg.reps
        yield ("window-scaling", f"k={k}", "discrete-online", n, cfg.reps, mean)


SUITES = {"formula-scaling": formula_scaling, "window-scaling": window_scaling}


def run_suite(suite: str, cfg: BenchConfig = None):
    cfg = cfg or BenchConfig()
    return list(SUITES[suite](cfg))


def per_sample(rows):
    return {r[1]: r[5] / r[3] for r in rows}


__all__ = ["BenchConfig", "FORMULAS", "COLUMNS", "run_suite", "run_window", "per_sample",
           "synthetic_trace"]
