"""Compare the compiled and pure-Python kernels on the hot loops.

    python benchmarks/bench_kernels.py [--repeat 3] [--json]

Every workload is checked for identical results across backends before it
is timed.
"""

import argparse
import itertools
import json
import random
import timeit

from ringcast import kernels
from ringcast.equilibrium import scaled_costs
from ringcast.sequential import random_ring


def workloads(seed: int):
    rng = random.Random(seed)
    out = []
    for n in (10, 12, 14):
        costs, _ = scaled_costs(random_ring(n, rng, high=1000), n + 1)
        out.append((f"profile_table n={n}", lambda c=costs, n=n, b=None:
                    kernels.profile_table(c, n, backend=b)))
    for n in (6, 7, 8):
        costs, _ = scaled_costs(random_ring(n, rng, high=1000), n)
        orders = list(itertools.permutations(range(n)))
        out.append((f"sequential_batch n={n} ({len(orders)} orders)",
                    lambda c=costs, o=orders, b=None: kernels.sequential_batch(c, o, False, backend=b)))
    return out


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--json", action="store_true")
    args = parser.parse_args()

    backends = kernels.available_backends()
    rows = []
    for name, run in workloads(args.seed):
        results = {b: run(b=b) for b in backends}
        first = results[backends[0]]
        if any(r != first for r in results.values()):
            raise SystemExit(f"backends disagree on {name}")
        row = {"workload": name}
        for b in backends:
            row[b] = min(timeit.repeat(lambda: run(b=b), number=1, repeat=args.repeat))
        if "cython" in row:
            row["speedup"] = row["python"] / row["cython"]
        rows.append(row)

    if args.json:
        print(json.dumps(rows, indent=2))
        return
    print(f"{'workload':<38}" + "".join(f"{b:>12}" for b in backends)
          + ("     speedup" if "cython" in backends else ""))
    for row in rows:
        line = f"{row['workload']:<38}" + "".join(f"{row[b]:>11.4f}s" for b in backends)
        if "speedup" in row:
            line += f"{row['speedup']:>11.1f}x"
        print(line)


if __name__ == "__main__":
    main()
