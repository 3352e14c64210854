"""Compare the compiled kernels with the pure-Python fallback.

Each workload runs in a fresh interpreter per backend so the import-time
selection in ``agt.kernels`` is exercised for real.

    python3 bench/bench_kernels.py [--repeat 3] [--json]
"""

import argparse
import json
import os
import subprocess
import sys

WORKLOADS = {
    "word_problem": """
from agt.constructions import corpus_machine
from agt.dynamics import is_identity
from itertools import product
g = corpus_machine("grigorchuk")
letters = [(q, 1) for q in "abcd"]
for w in product(letters, repeat=6):
    is_identity(g, w)
""",
    "relations_aleshin_7": """
from agt.constructions import corpus_machine
from agt.dynamics import find_relations
find_relations(corpus_machine("aleshin"), 7)
""",
    "periodic_orbit_aleshin": """
from agt.constructions import corpus_machine
from agt.dynamics import PeriodicPoint, periodic_orbit
m = corpus_machine("aleshin")
periodic_orbit(m, PeriodicPoint.canonical((), (("a", 1), ("b", -1))), 3000)
""",
    "chi_aleshin_7": """
from agt.constructions import corpus_machine
from agt.dynamics import growth_chi
growth_chi(corpus_machine("aleshin"), 7, 10**6)
""",
}

TIMER = """
import time, sys
t = time.perf_counter()
exec(compile(sys.argv[1], "<workload>", "exec"))
from agt import kernels
print(kernels.BACKEND, time.perf_counter() - t)
"""


def time_once(code: str, pure: bool) -> tuple[str, float]:
    env = dict(os.environ)
    env.pop("AGT_PURE_PYTHON", None)
    if pure:
        env["AGT_PURE_PYTHON"] = "1"
    out = subprocess.run([sys.executable, "-c", TIMER, code], capture_output=True, text=True, env=env, check=True)
    backend, secs = out.stdout.split()
    return backend, float(secs)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", action="store_true")
    ap.add_argument("--only", nargs="*", choices=sorted(WORKLOADS))
    args = ap.parse_args()
    rows = []
    for name in args.only or WORKLOADS:
        code = WORKLOADS[name]
        res = {}
        for pure in (False, True):
            runs = [time_once(code, pure) for _ in range(args.repeat)]
            res["python" if pure else runs[0][0]] = min(t for _, t in runs)
        compiled = [k for k in res if k != "python"][0]
        speedup = res["python"] / res[compiled] if res[compiled] else float("inf")
        rows.append({"workload": name, "compiled_backend": compiled, "compiled_s": res[compiled],
                     "python_s": res["python"], "speedup": speedup})
    if args.json:
        for r in rows:
            print(json.dumps(r))
        return
    print(f"{'workload':<26}{'compiled s':>12}{'python s':>12}{'speedup':>10}")
    for r in rows:
        print(f"{r['workload']:<26}{r['compiled_s']:>12.3f}{r['python_s']:>12.3f}{r['speedup']:>9.1f}x")
    if any(r["compiled_backend"] == "python" for r in rows):
        print("note: the compiled extension is not built; both columns use the fallback")


if __name__ == "__main__":
    main()
