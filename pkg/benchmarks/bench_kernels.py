"""Compare the compiled arithmetic kernel with the pure-Python fallback.

Each workload runs in a fresh interpreter so the kernel choice made at import
time is clean. Usage::

    python3 benchmarks/bench_kernels.py [--repeat N] [--json]
"""

import argparse
import json
import os
import subprocess
import sys

WORKLOADS = {
    "scalar_mul_r7": """
from cqsl2.scalar import root_of_unity
ctx = root_of_unity(7)
x = ctx.from_coeffs([1, -2, 3, 0, 5, 1])
y = ctx.from_coeffs([2, 1, 0, -1, 1, 3])
for _ in range(50000):
    z = x * y + x
    z = z - y
""",
    "rank_r5_dirac": """
from cqsl2.dirac import assemble
from cqsl2.scalar import root_of_unity
op = assemble(root_of_unity(5), normalized=True, include_connection=True)
op.matrix.rank()
""",
    "spectrum_r5": """
from cqsl2.dirac import spectrum
from cqsl2.scalar import root_of_unity
spectrum(root_of_unity(5))
""",
    "connection_general_r5": """
from cqsl2.connection import solve_general
from cqsl2.scalar import root_of_unity
solve_general(root_of_unity(5))
""",
}

RUNNER = """
import time, sys
t0 = time.perf_counter()
import cqsl2
{body}
sys.stdout.write(cqsl2.IMPLEMENTATION + " " + repr(time.perf_counter() - t0))
"""


def run(body: str, pure: bool):
    env = dict(os.environ)
    if pure:
        env["CQSL2_PURE_PYTHON"] = "1"
    else:
        env.pop("CQSL2_PURE_PYTHON", None)
    out = subprocess.run([sys.executable, "-c", RUNNER.format(body=body)], env=env,
                         capture_output=True, text=True, check=True).stdout.split()
    return out[0], float(out[1])


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)

    rows = []
    for name, body in WORKLOADS.items():
        best = {}
        for pure in (False, True):
            times = [run(body, pure) for _ in range(args.repeat)]
            impl = times[0][0]
            best[impl if not pure else "python"] = min(t for _, t in times)
        fast = best.get("cython")
        rows.append({"workload": name, "cython": fast, "python": best["python"],
                     "speedup": (best["python"] / fast) if fast else None})

    if args.json:
        print(json.dumps(rows, indent=2))
        return
    if all(r["cython"] is None for r in rows):
        print("compiled kernel not built; only the fallback was timed")
    print(f"{'workload':24s} {'cython s':>10s} {'python s':>10s} {'speedup':>8s}")
    for r in rows:
        c = f"{r['cython']:.3f}" if r["cython"] else "-"
        s = f"{r['speedup']:.2f}x" if r["speedup"] else "-"
        print(f"{r['workload']:24s} {c:>10s} {r['python']:10.3f} {s:>8s}")


if __name__ == "__main__":
    main()
