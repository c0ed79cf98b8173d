"""Evaluate the four request/grant interface scenarios under all three semantics.

Traces are constructed so the request exceeds its threshold by the stated
margin and the grant behaves as each scenario describes.
"""
import argparse

from stlrob.core import Trace
from stlrob.dense import evaluate_dense
from stlrob.discrete import evaluate_discrete
from stlrob.iastl import input_vacuity, output_robustness
from stlrob.parser import parse_specification

SPEC = """name req_gnt
input float req
output float gnt
output float rob
period 1 s
rob = always(req >= 3 implies eventually[0:5](gnt >= 3))
"""

N = 12


def pad(prefix):
    return prefix + [0] * (N - len(prefix))


SCENARIOS = {
    "a: grant in time": (pad([0, 0, 6]), pad([0, 0, 0, 0, 6])),
    "b: no request": ([2] * N, [0] * N),
    "c: grant too weak": (pad([0, 0, 5]), pad([0, 1, 0, 1])),
    "d: weak request, weak grant": (pad([0, 0, 4]), pad([0, 1, 0, 1])),
}


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--time", choices=("discrete", "dense"), default="discrete")
    args = p.parse_args()
    spec = parse_specification(SPEC)
    run = evaluate_discrete if args.time == "discrete" else evaluate_dense

    def at0(s):
        return s.at(0) if args.time == "discrete" else s.value_at(0)

    print(f"{'scenario':30s} {'classic':>8s} {'out-rob':>8s} {'in-vac':>8s}")
    for name, (req, gnt) in SCENARIOS.items():
        tr = Trace.from_columns(range(N), {"req": req, "gnt": gnt})
        vals = (run(spec, tr), output_robustness(spec, tr, args.time),
                input_vacuity(spec, tr, args.time))
        print(f"{name:30s} " + " ".join(f"{at0(v):8g}" for v in vals))


if __name__ == "__main__":
    main()
