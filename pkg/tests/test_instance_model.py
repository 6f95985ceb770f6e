import numpy as np
import pytest

from lotsizer import PartSpec, PlanningInstance, PriceSchedule, big_m, net_demand, validate
from lotsizer.instance_model import part_big_m

PART3_RAW = [-17, -17, 50, 72, 72, 66, 66, 66, 66, 12, 0, -17]


@pytest.mark.parametrize(
    "raw, ss, expected",
    [
        (50, 17, 67),
        (-17, 17, 0),
        (0, 0, 0),
        (0, 17, 17),
        (-4, 17, 13),
        (-30, 17, 0),
    ],
)
def test_net_demand(raw, ss, expected):
    assert net_demand(raw, ss) == expected


def test_net_demand_rejects_negative_safety_stock():
    with pytest.raises(ValueError):
        net_demand(5, -1)


def test_net_demand_vectorised():
    assert list(net_demand(PART3_RAW, 17)) == [0, 0, 67, 89, 89, 83, 83, 83, 83, 29, 17, 0]


def test_net_demand_cancels_float_surplus():
    # -126.58 + 126.58 must be exactly zero, not a stray 1e-14
    assert net_demand(-126.58, 126.58) == 0.0
    assert net_demand(-0.1 - 0.2, 0.3) == 0.0


def _one_part(L, T, demand, A=1.0, h=1.0):
    return PlanningInstance.from_arrays([PartSpec(1, L, A, h)], [demand], [[10.0] * T])


def test_validate_window_boundary():
    demand = [0, 0, 5] + [0] * 9
    assert validate(_one_part(2, 12, demand)).ok


def test_validate_unserviceable():
    demand = [0, 5] + [0] * 10
    report = validate(_one_part(2, 12, demand))
    assert not report.ok
    (v,) = report.violations
    assert (v.rule, v.part_id, v.period) == ("unserviceable demand", 1, 2)


def test_validate_lead_time_covers_horizon():
    report = validate(_one_part(3, 3, [0, 0, 0]))
    assert "lead time" in {v.rule for v in report.violations}


def test_validate_negative_costs_and_missing_price():
    inst = PlanningInstance.from_arrays(
        [PartSpec(1, 0, -1.0, float("inf"))], [[1, 1]], [[np.nan, np.nan]], fill_prices=False
    )
    rules = {v.rule for v in validate(inst).violations}
    assert {"ordering cost", "holding cost", "missing price"} <= rules


def test_validate_duplicate_part_ids():
    parts = [PartSpec(1, 0, 1, 1), PartSpec(1, 0, 1, 1)]
    inst = PlanningInstance.from_arrays(parts, [[1], [1]], [[1], [1]])
    assert "duplicate part" in {v.rule for v in validate(inst).violations}


def test_validate_is_idempotent(case_study):
    assert validate(case_study) == validate(case_study)


def test_case_study_validates(case_study):
    assert validate(case_study).ok
    assert case_study.n_parts == 22 and case_study.horizon == 12


def test_price_fill_forward_then_backward():
    ps = PriceSchedule.from_sparse([[np.nan, 2.0, np.nan, np.nan, 3.0, np.nan]])
    assert list(ps.price[0]) == [2.0, 2.0, 2.0, 2.0, 3.0, 3.0]
    strict = PriceSchedule.from_sparse([[np.nan, 2.0]], fill=False)
    assert strict.missing_cells() == [(0, 1)]


def test_instance_arrays_are_read_only(case_study):
    with pytest.raises(ValueError):
        case_study.demand.raw[0, 0] = 1.0


def test_big_m_examples():
    listed = [0, 0, 67, 89, 89, 89, 89, 83, 83, 29, 17, 0]
    oracle = 0
    for q in listed:
        oracle += q
    inst = PlanningInstance.from_arrays([PartSpec(1, 2, 1, 1)], [listed], [[1.0] * 12])
    assert big_m(inst) == oracle == 635

    zero = PlanningInstance.from_arrays([PartSpec(1, 0, 1, 1)], [[0, 0, 0]], [[1, 1, 1]])
    assert big_m(zero) == 1.0

    two = PlanningInstance.from_arrays(
        [PartSpec(1, 0, 1, 1), PartSpec(2, 0, 1, 1)], [[50, 50], [200, 50]], [[1, 1], [1, 1]]
    )
    assert big_m(two) == 250
    assert list(part_big_m(two)) == [100, 250]


def test_big_m_dominates_every_cell(case_study):
    assert big_m(case_study) >= case_study.net.max()
