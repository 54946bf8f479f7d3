import pytest
from hypothesis import given, settings, strategies as st

from tt_grouper.exact import brute_force_oracle
from tt_grouper.heuristic import (LocalSearchConfig, construct_greedy, ffd_groups,
                                  local_search, merge_same_interval)
from tt_grouper.instance import make_instance
from tt_grouper.schedule import check_solution, evaluate
from tt_grouper.suites import micro_instance, large_instance


def test_greedy_instance_a(inst_a):
    sol = construct_greedy(inst_a)
    assert check_solution(inst_a, sol).ok
    assert evaluate(inst_a, sol).cmax <= 6


def test_greedy_packs_unit_tasks():
    inst = make_instance([("a", 4, 1), ("b", 4, 1), ("c", 4, 1)], [4], 1, 5)
    sol = construct_greedy(inst)
    assert len(sol.nonempty()) == 1
    assert evaluate(inst, sol).cmax == 4 == brute_force_oracle(inst).cmax


def test_greedy_empty():
    inst = make_instance([], [4, 8], 1, 4)
    sol = construct_greedy(inst)
    assert sol.nonempty() == [] and evaluate(inst, sol).cmax == 0


def test_ffd_order_and_capacity():
    inst = make_instance([("a", 4, 3), ("b", 4, 5), ("c", 4, 3), ("d", 4, 2)], [4], 1, 7)
    bins = ffd_groups(list(inst.tasks), 1, 7)
    assert [[t.id for t in b] for b in bins] == [["b"], ["a", "c"], ["d"]]


def test_local_search_improves_instance_a(inst_a):
    start = construct_greedy(inst_a)
    assert evaluate(inst_a, start).cmax == 6
    best = local_search(inst_a, start)
    assert evaluate(inst_a, best).cmax == 5


def test_local_search_keeps_optimum(inst_a):
    opt = brute_force_oracle(inst_a).solution
    assert evaluate(inst_a, local_search(inst_a, opt)).cmax == 5


def test_zero_budget_returns_start(inst_a):
    start = construct_greedy(inst_a)
    assert local_search(inst_a, start, LocalSearchConfig(iterations=0)) is start


def test_config_validation():
    with pytest.raises(ValueError):
        LocalSearchConfig(iterations=-1)


@pytest.mark.parametrize("toggle", ["task_move", "task_swap", "group_move", "merge_split"])
def test_single_neighbourhood_still_valid(toggle):
    inst = micro_instance(5)
    flags = dict(task_move=False, task_swap=False, group_move=False, merge_split=False)
    flags[toggle] = True
    start = construct_greedy(inst)
    out = local_search(inst, start, LocalSearchConfig(**flags))
    assert check_solution(inst, out).ok
    assert evaluate(inst, out).cmax <= evaluate(inst, start).cmax


@settings(max_examples=80)
@given(seed=st.integers(0, 10 ** 6))
def test_valid_and_non_worsening(seed):
    inst = micro_instance(seed)
    start = construct_greedy(inst)
    assert check_solution(inst, start).ok
    out = local_search(inst, start, LocalSearchConfig(seed=seed))
    assert check_solution(inst, out).ok
    assert evaluate(inst, out).cmax <= evaluate(inst, start).cmax


@settings(max_examples=5)
@given(seed=st.integers(0, 10 ** 4))
def test_large_valid(seed):
    inst = large_instance(seed)
    start = construct_greedy(inst)
    out = local_search(inst, start, LocalSearchConfig(iterations=20))
    assert check_solution(inst, out).ok
    assert evaluate(inst, out).cmax <= evaluate(inst, start).cmax


def test_merge_same_interval(inst_a):
    sol = brute_force_oracle(inst_a.replace(max_group_size=100)).solution
    merged = merge_same_interval(inst_a, sol)
    keys = [(g.period_index, merged.assignment[g.key]) for g in merged.nonempty()]
    assert len(keys) == len(set(keys))
