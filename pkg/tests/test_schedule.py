import random

import pytest
from hypothesis import given, strategies as st

from tt_grouper.heuristic import construct_greedy
from tt_grouper.instance import GeneratorParams, generate_instance, make_instance
from tt_grouper.schedule import (GroupRecord, InvalidSolutionError, Solution, check_solution,
                                 evaluate, expand_start_times, group_size, parse_solution,
                                 serialize_solution, timeline_consistency)
from tt_grouper.suites import micro_instance


def s_star():
    # t1 alone at period 4; t2 and t3 in singleton groups in intervals 0 and 1
    return Solution.from_groups([(0, ["t1"], 0), (1, ["t2"], 0), (1, ["t3"], 1)])


def test_group_size(inst_a, four_period):
    assert group_size([], inst_a) == 0
    assert group_size(["c"], four_period) == 150
    assert group_size(["t2", "t3"], inst_a) == 3
    with pytest.raises(KeyError):
        group_size(["nope"], inst_a)


def test_check_solution_accepts_s_star(inst_a):
    assert check_solution(inst_a, s_star()).ok


def test_check_mixed_period(inst_a):
    sol = Solution.from_groups([(0, ["t1", "t2"], 0), (1, ["t3"], 0)])
    assert "MIXED_PERIOD_GROUP" in check_solution(inst_a, sol).codes


def test_check_group_too_large(inst_a):
    big = make_instance([("a", 4, 2), ("b", 4, 2)], [4], 1, 4)
    sol = Solution.from_groups([(0, ["a", "b"], 0)])   # size 5 = Smax + 1
    assert check_solution(big, sol).codes == {"GROUP_TOO_LARGE"}


def test_check_partition_and_intervals(inst_a):
    missing = Solution.from_groups([(0, ["t1"], 0), (1, ["t2"], 0)])
    assert "NOT_PARTITION" in check_solution(inst_a, missing).codes
    dup = Solution.from_groups([(0, ["t1"], 0), (1, ["t2", "t3"], 0), (1, ["t3"], 1)])
    assert "NOT_PARTITION" in check_solution(inst_a, dup).codes
    out = Solution.from_groups([(0, ["t1"], 0), (1, ["t2", "t3"], 2)])
    assert check_solution(inst_a, out).codes == {"INTERVAL_OUT_OF_RANGE"}
    unassigned = Solution((GroupRecord(0, 1, ("t1",)), GroupRecord(1, 1, ("t2", "t3"))),
                          {(0, 1): 0})
    assert check_solution(inst_a, unassigned).codes == {"UNASSIGNED_NONEMPTY_GROUP"}


def test_evaluate_s_star(inst_a):
    ev = evaluate(inst_a, s_star())
    assert ev.period_loads == ((3,), (2, 2))
    assert ev.row_totals == (5, 5)
    assert ev.cmax == 5
    assert not ev.feasible and ev.margin == -1


def test_evaluate_grouped(inst_a):
    ev = evaluate(inst_a, Solution.from_groups([(0, ["t1"], 0), (1, ["t2", "t3"], 0)]))
    assert ev.row_totals == (6, 3) and ev.cmax == 6


def test_evaluate_empty_instance():
    inst = make_instance([], [4, 8], 1, 4)
    ev = evaluate(inst, Solution(()))
    assert ev.cmax == 0 and ev.feasible


def test_evaluate_rejects_invalid(inst_a):
    with pytest.raises(InvalidSolutionError):
        evaluate(inst_a, Solution.from_groups([(0, ["t1"], 0)]))


def test_expand_s_star(inst_a):
    tl = expand_start_times(inst_a, s_star())
    starts = {(o.period_index, o.group_id, o.index): (o.start, o.end) for o in tl.occurrences}
    assert starts == {(0, 1, 0): (0, 3), (0, 1, 1): (4, 7), (1, 1, 0): (3, 5), (1, 2, 0): (7, 9)}
    assert timeline_consistency(inst_a, s_star())


def test_expand_single_group_single_period():
    inst = make_instance([("a", 5, 2)], [5], 1, 10)
    tl = expand_start_times(inst, Solution.from_groups([(0, ["a"], 0)]))
    assert [(o.row, o.start) for o in tl.occurrences] == [(0, 0)]


def test_same_interval_tie_break():
    inst = make_instance([("a", 4, 1), ("b", 8, 1), ("c", 8, 2)], [4, 8], 1, 3)
    sol = Solution.from_groups([(0, ["a"], 0), (1, ["c"], 1), (1, ["b"], 1)])
    tl = expand_start_times(inst, sol)
    row1 = [o for o in tl.occurrences if o.row == 1]
    assert [(o.period_index, o.group_id) for o in row1] == [(0, 1), (1, 1), (1, 2)]
    assert row1[1].start < row1[2].start


def test_timeline_empty_instance():
    inst = make_instance([], [4], 1, 4)
    assert timeline_consistency(inst, Solution(()))


def test_solution_file_round_trip(inst_a):
    text = serialize_solution(s_star(), 5)
    assert text.splitlines()[0] == "cmax 5"
    sol, cmax = parse_solution(text)
    assert cmax == 5
    assert evaluate(inst_a, sol) == evaluate(inst_a, s_star())


def _random_solution(inst, rng):
    counts = [inst.periods[u] // inst.periods[0] for u in range(len(inst.periods))]
    groups = []
    for u, cls in enumerate(inst.tasks_by_period):
        bins = []
        for t in cls:
            fits = [b for b in bins if inst.header_size + sum(x.proc for x in b) + t.proc
                    <= inst.max_group_size]
            if fits and rng.random() < 0.6:
                rng.choice(fits).append(t)
            else:
                bins.append([t])
        groups += [(u, [t.id for t in b], rng.randrange(counts[u])) for b in bins]
    rng.shuffle(groups)
    return Solution.from_groups(groups)


@given(seed=st.integers(0, 10 ** 6))
def test_random_solutions_invariants(seed):
    rng = random.Random(seed)
    inst = generate_instance(GeneratorParams(n_tasks=rng.randint(1, 80), n_periods=rng.randint(1, 4),
                                             multiplier_choices=(2, 3), base_period=1000,
                                             header_size=rng.randint(0, 40), max_group_size=300),
                             seed)
    sol = _random_solution(inst, rng)
    assert check_solution(inst, sol).ok
    ev = evaluate(inst, sol)
    # mass conservation
    rows = len(ev.row_totals)
    mass = sum(group_size(g.members, inst) * (rows * inst.periods[0] // inst.periods[g.period_index])
               for g in sol.nonempty())
    assert sum(ev.row_totals) == mass
    assert ev.cmax == max(ev.row_totals)
    # strict periodicity, no overlaps, row expansion == modular formula
    assert timeline_consistency(inst, sol)
    # an empty group changes nothing
    padded = Solution(sol.groups + (GroupRecord(0, 999, ()),), sol.assignment)
    assert evaluate(inst, padded) == ev


@given(seed=st.integers(0, 10 ** 6))
def test_canonical_order_within_rows(seed):
    inst = micro_instance(seed)
    sol = construct_greedy(inst)
    for row in expand_start_times(inst, sol).by_row():
        keys = [(o.period_index, o.group_id) for o in row]
        assert keys == sorted(keys)
        assert all(a.end == b.start for a, b in zip(row, row[1:]))
