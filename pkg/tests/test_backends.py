"""The compiled and pure geometry kernels must agree bit for bit."""

import math
import random

import pytest

import exploresim.geometry as geometry
from exploresim import _geompure

compiled = pytest.importorskip(
    "exploresim._geomcore", reason="compiled geometry kernel not built")


def random_geoms(n_arenas=8, seed=99):
    rng = random.Random(seed)
    for _ in range(n_arenas):
        boxes = []
        for _ in range(rng.randint(0, 5)):
            x0 = rng.uniform(0.2, 5.0)
            y0 = rng.uniform(0.2, 4.0)
            boxes.append((x0, y0, x0 + rng.uniform(0.1, 1.3), y0 + rng.uniform(0.1, 1.3)))
        yield 6.5, 5.5, boxes, rng


def test_ray_distance_bit_identical():
    for w, h, boxes, rng in random_geoms():
        fast = compiled.GeomCore(w, h, boxes)
        pure = _geompure.GeomCore(w, h, boxes)
        checked = 0
        while checked < 400:
            x = rng.uniform(0.01, w - 0.01)
            y = rng.uniform(0.01, h - 0.01)
            if not pure.point_free(x, y):
                continue
            heading = rng.uniform(-math.pi, math.pi)
            dx, dy = math.cos(heading), math.sin(heading)
            assert fast.ray_distance(x, y, dx, dy) == pure.ray_distance(x, y, dx, dy)
            checked += 1


def test_point_free_and_disc_blocked_agree():
    for w, h, boxes, rng in random_geoms(seed=123):
        fast = compiled.GeomCore(w, h, boxes)
        pure = _geompure.GeomCore(w, h, boxes)
        for _ in range(400):
            x = rng.uniform(-0.2, w + 0.2)
            y = rng.uniform(-0.2, h + 0.2)
            assert fast.point_free(x, y) == pure.point_free(x, y)
            assert fast.disc_blocked(x, y, 0.05) == pure.disc_blocked(x, y, 0.05)


def test_axis_parallel_rays_agree():
    boxes = [(2.0, 2.0, 3.0, 3.0)]
    fast = compiled.GeomCore(6.5, 5.5, boxes)
    pure = _geompure.GeomCore(6.5, 5.5, boxes)
    for dx, dy in ((1.0, 0.0), (0.0, 1.0), (0.0, -1.0), (-1.0, 0.0)):
        for y in (1.0, 2.5, 2.0):  # includes a ray grazing the box edge
            assert fast.ray_distance(0.5, y, dx, dy) == pure.ray_distance(0.5, y, dx, dy)


def test_full_mission_digest_matches_across_backends(monkeypatch):
    from exploresim.arena import default_arena
    from exploresim.harness import RunConfig, run_single
    from exploresim.policies import PolicyConfig

    def mission_digest():
        cfg = RunConfig(arena=default_arena(), policy="pseudo-random",
                        policy_cfg=PolicyConfig(cruise_speed=0.5),
                        duration=30.0, seed=2718)
        return run_single(cfg).digest

    monkeypatch.setattr(geometry, "GeomCore", compiled.GeomCore)
    fast_digest = mission_digest()
    monkeypatch.setattr(geometry, "GeomCore", _geompure.GeomCore)
    pure_digest = mission_digest()
    assert fast_digest == pure_digest


def test_backend_reports_a_known_name():
    assert geometry.BACKEND in ("compiled", "pure")
