#!/usr/bin/env python3
"""Compare the compiled and pure-Python habit-store kernels.

Two workloads:

* engine: full simulation runs on a generated scenario, which is what a
  user actually experiences (tick loop overhead included);
* kernel: a tight loop of pressure queries and strength updates on one
  store, which isolates the code the extension replaces.

Both backends must produce byte-identical logs; the script refuses to
print timings if they do not.

Usage:
    python3 benchmarks/bench_backends.py [--ticks N] [--agents N] [--repeats N]
"""

from __future__ import annotations

import argparse
import random
import sys
import time

from sopra import World, build_scenario, events_csv, metrics_csv
from sopra._kernel import available_backends
from sopra.testing import random_scenario_document


def time_best(fn, repeats: int) -> float:
    return min(timeit_once(fn) for _ in range(repeats))


def timeit_once(fn) -> float:
    t0 = time.perf_counter()
    fn()
    return time.perf_counter() - t0


def bench_engine(backend: str, scenario, ticks: int, seed: int):
    world = World(scenario, seed=seed, backend=backend)
    events, metrics = world.run(ticks)
    return events_csv(events), metrics_csv(metrics, scenario.index.atomic_ids)


def bench_kernel(store_cls, queries: int, rng_seed: int) -> list[float]:
    # A synthetic element forest: 12 chains of depth 1..3 over 24 elements.
    rng = random.Random(rng_seed)
    chain_data: list[int] = []
    chain_start = [0]
    parents = [None, 0, 1, None, 3, None, 5, 6, None, None, 9, None,
               11, 12, None, 14, None, None, 17, None, 19, 20, None, 22]
    for e in range(len(parents)):
        node, chain = e, [e]
        while parents[node] is not None:
            node = parents[node]
            chain.append(node)
        chain_data.extend(chain)
        chain_start.append(len(chain_data))
    store = store_cls(chain_data, chain_start)
    n_acts = 16
    for _ in range(160):
        store.set_views(rng.randrange(n_acts), rng.randrange(len(parents)),
                        rng.random(), rng.random(), rng.random())
    acts = list(range(n_acts))
    out: list[float] = []
    for i in range(queries):
        ctx = rng.sample(range(len(parents)), 5)
        p = store.pressures(acts, ctx, 0.5, 0)
        out.append(max(p))
        store.habit_tick(i % n_acts, ctx, 0.1, 0.01, True)
        store.track_personal(0.3)
    return out


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--ticks", type=int, default=400)
    ap.add_argument("--agents", type=int, default=12)
    ap.add_argument("--locations", type=int, default=3)
    ap.add_argument("--queries", type=int, default=20_000)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args(argv)

    backends = available_backends()
    if len(backends) == 1:
        print("note: compiled kernel not built, timing pure Python only",
              file=sys.stderr)

    doc = random_scenario_document(
        random.Random(args.seed),
        n_agents=args.agents,
        n_locations=args.locations,
        max_activities=14,
    )
    scenario = build_scenario(doc)

    logs = {}
    engine_times = {}
    for name in sorted(backends):
        logs[name] = bench_engine(name, scenario, args.ticks, args.seed)
        engine_times[name] = time_best(
            lambda n=name: bench_engine(n, scenario, args.ticks, args.seed),
            args.repeats,
        )
    if len(set(logs.values())) != 1:
        print("error: backends disagree on engine output", file=sys.stderr)
        return 1

    kernel_out = {}
    kernel_times = {}
    for name, cls in sorted(backends.items()):
        kernel_out[name] = bench_kernel(cls, args.queries, args.seed)
        kernel_times[name] = time_best(
            lambda c=cls: bench_kernel(c, args.queries, args.seed),
            args.repeats,
        )
    if len({tuple(v) for v in kernel_out.values()}) != 1:
        print("error: backends disagree on kernel output", file=sys.stderr)
        return 1

    n_events = args.ticks * args.agents
    print(f"engine workload: {args.agents} agents x {args.ticks} ticks "
          f"({n_events} events), identical logs across backends")
    for name in sorted(engine_times):
        t = engine_times[name]
        print(f"  {name:<8} {t * 1e3:8.1f} ms   {n_events / t:10.0f} events/s")
    if len(engine_times) == 2:
        print(f"  speedup  {engine_times['python'] / engine_times['cython']:.2f}x")

    print(f"kernel workload: {args.queries} pressure+update rounds, "
          f"identical outputs across backends")
    for name in sorted(kernel_times):
        t = kernel_times[name]
        print(f"  {name:<8} {t * 1e3:8.1f} ms   {args.queries / t:10.0f} rounds/s")
    if len(kernel_times) == 2:
        print(f"  speedup  {kernel_times['python'] / kernel_times['cython']:.2f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
