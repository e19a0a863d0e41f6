"""Time the submodule counting kernel with and without numba.

    python benchmarks/bench_hall_kernel.py [--q 7] [--repeat 3]

Each mode runs in its own subprocess because the numba switch is read at
import time.  The compiled mode is timed after one warm-up call.
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys

CASES = [
    # (n, entries) of nilpotent representations, smallest first
    (2, [[1, 2, 2]]),
    (2, [[1, 2, 1], [2, 3, 1], [1, 3, 1]]),
    (3, [[1, 2, 1], [2, 3, 1], [3, 5, 1]]),
    (2, [[1, 3, 2], [2, 3, 2]]),
]

_WORKER = """
import json, sys, time
from qloop import _gfq
from qloop.afmat import PerMatrix
from qloop.hall import count_submodules, total_dim

q, repeat = int(sys.argv[1]), int(sys.argv[2])
out = {"numba": _gfq.HAVE_NUMBA, "cases": []}
for n, entries in json.loads(sys.argv[3]):
    C = PerMatrix.from_json({"n": n, "entries": entries})
    t0 = time.perf_counter()
    count_submodules(C, q)
    first = time.perf_counter() - t0
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        res = count_submodules(C, q)
        best = min(best, time.perf_counter() - t0)
    out["cases"].append({"dim": total_dim(C), "first": first, "best": best,
                         "total": sum(res.values())})
print(json.dumps(out))
"""


def run(disable: bool, q: int, repeat: int) -> dict:
    env = dict(os.environ)
    if disable:
        env["QLOOP_DISABLE_NUMBA"] = "1"
    else:
        env.pop("QLOOP_DISABLE_NUMBA", None)
    proc = subprocess.run([sys.executable, "-c", _WORKER, str(q), str(repeat), json.dumps(CASES)],
                          env=env, capture_output=True, text=True, check=True)
    return json.loads(proc.stdout)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--q", type=int, default=7)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    fast = run(False, args.q, args.repeat)
    slow = run(True, args.q, args.repeat)
    if not fast["numba"]:
        print("numba is not importable; both columns use the Python kernel")
    print(f"q = {args.q}, best of {args.repeat}")
    print(f"{'case':<40} {'dim':>3} {'numba s':>9} {'python s':>9} {'speedup':>8}")
    for (n, entries), a, b in zip(CASES, fast["cases"], slow["cases"]):
        assert a["total"] == b["total"], "kernels disagree"
        label = f"n={n} {entries}"
        print(f"{label:<40} {a['dim']:>3} {a['best']:>9.4f} {b['best']:>9.4f} {b['best'] / a['best']:>7.1f}x")
    first = sum(c["first"] - c["best"] for c in fast["cases"])
    print(f"numba compile and cache load overhead: {first:.2f}s")


if __name__ == "__main__":
    main()
