"""Random small instances shared by the solver and acceptance tests."""

import os

import numpy as np

from lotsizer import PartSpec, PlanningInstance

DEFAULT_SEED = 20240


def seed() -> int:
    return int(os.environ.get("LOTSIZER_SEED", DEFAULT_SEED))


def n_pairs(parts, horizon) -> int:
    return sum((horizon - p.lead_time) * (horizon - p.lead_time + 1) // 2 for p in parts)


def random_instance(rng: np.random.Generator, max_parts=2, max_horizon=6, max_pairs=20, fractional=False):
    """Integer-valued instance small enough for both brute-force oracles.

    Demand in [0, 20], ordering/holding cost in [0, 20], prices in [1, 100],
    safety stock in [0, 5].  Periods inside the lead time carry a surplus
    that exactly cancels the safety stock, so every instance is feasible.
    """
    while True:
        P = int(rng.integers(1, max_parts + 1))
        T = int(rng.integers(1, max_horizon + 1))
        parts = []
        for i in range(P):
            L = int(rng.integers(0, min(T - 1, 3) + 1))
            if fractional:
                A, h = rng.uniform(0, 20), rng.uniform(0, 20)
            else:
                A, h = int(rng.integers(0, 21)), int(rng.integers(0, 21))
            parts.append(PartSpec(i + 1, L, A, h, 0.0))
        if n_pairs(parts, T) <= max_pairs:
            break
    if fractional:
        demand = rng.uniform(0, 20, size=(P, T))
        prices = rng.uniform(1, 100, size=(P, T))
        ss = rng.uniform(0, 5, size=P)
    else:
        demand = rng.integers(0, 21, size=(P, T)).astype(float)
        prices = rng.integers(1, 101, size=(P, T)).astype(float)
        ss = rng.integers(0, 6, size=P).astype(float)
    # sparse zero demand now and then so skip transitions get exercised
    demand[rng.random((P, T)) < 0.25] = 0.0
    for k, p in enumerate(parts):
        demand[k, : p.lead_time] = -ss[k]
    return PlanningInstance.from_arrays(parts, demand, prices, ss)


def instances(n, rng=None, **kw):
    rng = rng or np.random.default_rng(seed())
    return [random_instance(rng, **kw) for _ in range(n)]
