"""Instrumented mini control loop for policy behavior tests.

Mirrors the control task of the run loop (no detector) while exposing
every intermediate: handy for asserting on FSM transitions, emitted
set-points and sensor frames tick by tick.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from exploresim.policies import initial_state, policy_step
from exploresim.seeding import derive_seed
from exploresim.sensing import TofBank, TofConfig
from exploresim.vehicle import VehicleState, step


@dataclass
class Tick:
    t: float
    state: VehicleState   # state the policy saw (pre-step)
    frame: object
    ps: object            # policy state after the step
    sp: object


def drive(arena, kind, cfg, start, duration, seed=0, dt=0.02, tof=None):
    """Run the control loop only; returns the per-tick trace."""
    x0, y0, h0 = start
    state = VehicleState(x0, y0, h0)
    ps = initial_state(kind, cfg, h0, arena)
    bank = TofBank(tof or TofConfig())
    rng = random.Random(derive_seed(seed, "policy"))
    trace = []
    n = int(round(duration / dt))
    for i in range(n):
        t = i * dt
        frame = bank.sample(arena, state, rng, t)
        ps, sp = policy_step(kind, ps, frame, state.heading, dt, cfg, rng)
        trace.append(Tick(t, state, frame, ps, sp))
        state = step(state, sp, dt)
        assert not arena.disc_blocked(state.x, state.y, 0.05), \
            f"collision at t={state.t:.2f} ({state.x:.2f}, {state.y:.2f})"
    return trace
