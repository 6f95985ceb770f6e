import math

import pytest
from scipy.stats import norm

from lotsizer import PartSpec, ServicePolicy, UnitOfMeasure, safety_stock, z_from_service_level
from lotsizer.safety_stock import Rounding, part_safety_stock, safety_stock_grid


@pytest.mark.parametrize("p, z", [(0.5, 0.0), (0.95, 1.645), (0.975, 1.960)])
def test_z_table_values(p, z):
    assert abs(z_from_service_level(p) - z) <= 1e-3


@pytest.mark.parametrize("p", [0.001, 0.01, 0.2, 0.5, 0.8, 0.9, 0.99, 0.999])
def test_z_matches_scipy(p):
    assert abs(z_from_service_level(p) - norm.ppf(p)) <= 1e-3


@pytest.mark.parametrize("p", [0.0, 1.0, -0.1, 1.5, float("nan")])
def test_z_domain(p):
    with pytest.raises(ValueError):
        z_from_service_level(p)


def test_safety_stock_examples():
    assert safety_stock(1.645, 7.28, 2, "nearest-integer") == 17
    assert abs(safety_stock(1.645, 86.58, 2, "two-decimals") - 201.41) <= 0.05
    assert safety_stock(2.3, 0.0, 5, "none") == 0.0
    assert safety_stock(1.645, 10.0, 0) == 0.0


def test_safety_stock_domain():
    with pytest.raises(ValueError):
        safety_stock(1.645, -1.0, 1)
    with pytest.raises(ValueError):
        safety_stock(1.645, 1.0, -1)


def test_rounding_half_away_from_zero():
    # 0.5 and 2.5 would go to the even neighbour under banker's rounding
    assert safety_stock(1.0, 0.5, 1, Rounding.NEAREST_INTEGER) == 1
    assert safety_stock(1.0, 2.5, 1, Rounding.NEAREST_INTEGER) == 3
    assert safety_stock(1.0, 0.125, 1, Rounding.TWO_DECIMALS) == 0.13


def test_policy_defaults():
    pol = ServicePolicy()
    assert pol.z_value == 1.645
    assert abs(ServicePolicy(0.975).z_value - 1.95996) < 1e-4
    assert ServicePolicy(0.9, z_value=1.0).z_value == 1.0
    with pytest.raises(ValueError):
        ServicePolicy(1.2)


def test_rounding_follows_unit_of_measure():
    kg = PartSpec(11, 2, 0.5, 0.75, 54.42, UnitOfMeasure.KG)
    unit = PartSpec(3, 2, 0.5, 0.5, 7.28, UnitOfMeasure.UNIT)
    assert part_safety_stock(unit) == 17.0
    assert part_safety_stock(kg) == round(1.645 * 54.42 * math.sqrt(2), 2)


def test_grid_repeats_per_period():
    grid = safety_stock_grid([PartSpec(1, 1, 0, 0, 2.56)], 4)
    assert grid.shape == (1, 4) and set(grid[0]) == {4.0}
