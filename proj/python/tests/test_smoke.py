import json

import pytest

import capround

TINY_LINE = """CAPKM v1
problem ckm
facilities 2
clients 3
capacity 2
budget 2
fcost 1 1
metric euclidean 1
0
10
0
1
10
"""


def test_tiny_a_round_trip():
    inst = capround.parse(TINY_LINE)
    assert inst.num_facilities == 2
    assert inst.num_clients == 3
    assert inst.distance(1, 2) == 0.0
    again = capround.parse(inst.to_text())
    assert again.facility_costs == [1.0, 1.0]


def test_solve_tiny_a():
    inst = capround.parse(TINY_LINE)
    sol = capround.solve(inst, 1.0, assign="integral")
    assert sol.verdict
    assert sol.l == 5
    assert sol.budget_used <= inst.budget + 1e-9
    assert sol.cost <= sol.cost_bound + 1e-7
    assert capround.exact(inst)["cost"] == pytest.approx(1.0)
    assert capround.lp_value(inst) <= 1.0 + 1e-9
    x = sol.assignment()
    for j in range(inst.num_clients):
        assert sum(row[j] for row in x) == pytest.approx(1.0)
    manifest = json.loads(sol.manifest("tiny", 1.0))
    assert manifest["verdict"]["ok_budget"] is True
    assert sol.csv_row("tiny").startswith("tiny,")


@pytest.mark.parametrize("problem", ["ckm", "cflp", "ckflp"])
def test_generated_instances(problem):
    inst = capround.generate(problem, facilities=6, clients=12, capacity=3, seed=3)
    eps = 0.25 if problem == "cflp" else 1.0
    sol = capround.solve(inst, eps)
    assert sol.problem == problem
    assert sol.verdict
    assert capround.csv_header(problem).split(",")[0] == "instance"


def test_errors():
    with pytest.raises(capround.ParseError):
        capround.parse("not an instance")
    inst = capround.parse(TINY_LINE).with_problem("cflp")
    with pytest.raises(capround.UsageError):
        capround.solve(inst, 0.6)
    with pytest.raises(ValueError):
        capround.solve(inst, 0.25, assign="rounded")
