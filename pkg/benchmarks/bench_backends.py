#!/usr/bin/env python3
"""Benchmark the compiled geometry kernel against the pure-Python one.

Times the raw ray-cast primitive and a full 180 s mission under each
backend, and verifies the two agree bit for bit along the way.

    python benchmarks/bench_backends.py
"""

import math
import random
import time

import exploresim.geometry as geometry
from exploresim import _geompure

try:
    from exploresim import _geomcore
except ImportError:
    _geomcore = None

ARENA_BOXES = [(2.0, 2.0, 3.0, 3.0), (4.5, 1.0, 5.0, 2.2), (1.0, 4.0, 1.8, 4.6)]
N_RAYS = 200_000


def bench_rays(core) -> float:
    rng = random.Random(1)
    cases = []
    while len(cases) < 2000:
        x = rng.uniform(0.05, 6.45)
        y = rng.uniform(0.05, 5.45)
        if not core.point_free(x, y):
            continue
        h = rng.uniform(-math.pi, math.pi)
        cases.append((x, y, math.cos(h), math.sin(h)))
    ray = core.ray_distance
    t0 = time.perf_counter()
    acc = 0.0
    for _ in range(N_RAYS // len(cases)):
        for x, y, dx, dy in cases:
            acc += ray(x, y, dx, dy)
    elapsed = time.perf_counter() - t0
    assert acc > 0.0
    return elapsed


def bench_mission(geom_cls) -> tuple[float, int]:
    from exploresim.arena import default_arena
    from exploresim.harness import RunConfig, run_single

    geometry.GeomCore = geom_cls
    cfg = RunConfig(arena=default_arena(), policy="pseudo-random", seed=12345)
    t0 = time.perf_counter()
    res = run_single(cfg)
    return time.perf_counter() - t0, res.digest


def main():
    print(f"selected backend at import: {geometry.BACKEND}")
    backends = [("pure", _geompure.GeomCore)]
    if _geomcore is not None:
        backends.append(("compiled", _geomcore.GeomCore))
    else:
        print("compiled kernel not built; benchmarking the pure backend only")

    print(f"\nray_distance, {N_RAYS} casts over 3 obstacle boxes:")
    ray_times = {}
    for name, cls in backends:
        core = cls(6.5, 5.5, ARENA_BOXES)
        ray_times[name] = bench_rays(core)
        rate = N_RAYS / ray_times[name] / 1e6
        print(f"  {name:>8}: {ray_times[name]:6.3f} s  ({rate:5.2f} M casts/s)")
    if len(ray_times) == 2:
        print(f"  speedup : {ray_times['pure'] / ray_times['compiled']:.1f}x")

    print("\nfull 180 s pseudo-random mission (50 Hz control loop):")
    digests = set()
    mission_times = {}
    original = geometry.GeomCore
    try:
        for name, cls in backends:
            mission_times[name], digest = bench_mission(cls)
            digests.add(digest)
            print(f"  {name:>8}: {mission_times[name] * 1000:6.1f} ms")
    finally:
        geometry.GeomCore = original
    if len(mission_times) == 2:
        print(f"  speedup : {mission_times['pure'] / mission_times['compiled']:.2f}x")
        status = "bit-identical" if len(digests) == 1 else "DIVERGED"
        print(f"  trajectory digests across backends: {status}")


if __name__ == "__main__":
    main()
