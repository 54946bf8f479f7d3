import pytest
from hypothesis import given, strategies as st

from tt_grouper.instance import (GeneratorParams, Instance, InstanceFormatError, TaskSpec,
                                 derive_period_structure, generate_instance, make_instance,
                                 parse_instance, serialize_instance, validate)


def test_fig2_parameters_validate(four_period):
    report = validate(four_period)
    assert report.ok, str(report)


def test_non_harmonic():
    inst = make_instance([("a", 4, 1), ("b", 6, 1)], [4, 6], 0, 10)
    report = validate(inst)
    assert not report.ok
    assert "NON_HARMONIC" in report.codes


def test_task_too_large():
    inst = make_instance([("a", 4, 5)], [4], 1, 4)
    assert validate(inst).codes == {"TASK_TOO_LARGE"}


def test_duplicate_and_bad_period_ref():
    inst = make_instance([("a", 4, 1), ("a", 8, 1)], [4], 0, 10)
    report = validate(inst)
    assert {"DUPLICATE_ID", "BAD_PERIOD_REF"} <= report.codes
    assert not report.ok


def test_empty_period_class_is_a_warning():
    inst = make_instance([("a", 4, 1)], [4, 8], 0, 10)
    report = validate(inst)
    assert report.ok
    assert report.codes == {"EMPTY_PERIOD_CLASS"}


@pytest.mark.parametrize("periods, mult, counts, rows", [
    ([4000, 8000, 16000, 32000], (2, 2, 2), (1, 2, 4, 8), 8),
    ([5], (), (1,), 1),
    ([4, 8], (2,), (1, 2), 2),
    ([3, 9, 18], (3, 2), (1, 3, 6), 6),
])
def test_period_structure(periods, mult, counts, rows):
    ps = derive_period_structure(make_instance([], periods, 0, 1))
    assert ps.multipliers == mult
    assert ps.interval_counts == counts
    assert ps.row_count == rows
    assert ps.hyperperiod == periods[-1]


def test_period_structure_rejects_non_harmonic():
    with pytest.raises(ValueError):
        derive_period_structure(make_instance([], [4, 6], 0, 1))


def test_periods_are_sorted():
    inst = Instance((), (8, 4), 0, 1)
    assert inst.periods == (4, 8)


def test_parse_three_tasks():
    text = """# a comment
hs 1
smax 4
periods 4 8
task t1 4 2
task t2 8 1   # trailing comment
task t3 8 1
"""
    inst = parse_instance(text)
    assert [t.id for t in inst.tasks] == ["t1", "t2", "t3"]
    assert inst.header_size == 1 and inst.max_group_size == 4
    assert parse_instance(serialize_instance(inst)) == inst


@pytest.mark.parametrize("text, code, line", [
    ("hs 1\nperiods 4\ntask a 4 1\n", "MISSING_FIELD", None),
    ("hs 1\nsmax 4\nperiods 4\ntask a 4 -2\n", "BAD_VALUE", 4),
    ("hs 1\nsmax 4\nperiods 4\ntask a 4 x\n", "BAD_VALUE", 4),
    ("hs 1\nsmax 4\nperiods 4\nfoo 3\n", "UNKNOWN_KEYWORD", 4),
    ("hs 1\nsmax 4\nperiods 4\ntask a 4\n", "SYNTAX", 4),
    ("hs 1\nhs 2\nsmax 4\nperiods 4\n", "DUPLICATE_FIELD", 2),
    ("hs 1\nsmax 4\nperiods 8 4\n", "BAD_VALUE", 3),
])
def test_parse_errors(text, code, line):
    with pytest.raises(InstanceFormatError) as err:
        parse_instance(text)
    assert err.value.code == code
    assert err.value.line == line


def test_serialize_empty_instance():
    inst = make_instance([], [4], 1, 4)
    assert serialize_instance(inst) == "hs 1\nsmax 4\nperiods 4\n"
    assert parse_instance(serialize_instance(inst)) == inst


def test_serialize_keeps_input_order():
    inst = make_instance([("z", 4, 1), ("a", 4, 2), ("m", 8, 3)], [4, 8], 0, 10)
    lines = serialize_instance(inst).splitlines()
    assert [l for l in lines if l.startswith("task")] == ["task z 4 1", "task a 4 2", "task m 8 3"]


def test_round_trip_600_tasks():
    params = GeneratorParams(n_tasks=600, n_periods=6, multiplier_choices=(2, 3, 4))
    inst = generate_instance(params, seed=7)
    assert len(inst.tasks) == 600
    assert parse_instance(serialize_instance(inst)) == inst


def test_generate_fifty_over_six_periods():
    inst = generate_instance(GeneratorParams(n_tasks=50, n_periods=6), seed=1)
    assert len(inst.tasks) == 50 and len(inst.periods) == 6
    assert validate(inst).ok


def test_generate_single_task():
    inst = generate_instance(GeneratorParams(n_tasks=1, n_periods=1), seed=0)
    assert len(inst.tasks) == 1 and len(inst.periods) == 1


def test_generate_deterministic():
    params = GeneratorParams(n_tasks=120, n_periods=4, multiplier_choices=(2, 3))
    assert generate_instance(params, 42) == generate_instance(params, 42)
    assert generate_instance(params, 42) != generate_instance(params, 43)


def test_generate_unsatisfiable():
    with pytest.raises(ValueError):
        generate_instance(GeneratorParams(proc_range=(550, 600), header_size=90,
                                          max_group_size=600), 0)


def test_generator_resamples_oversized_tasks():
    params = GeneratorParams(n_tasks=300, proc_range=(1, 100), header_size=50, max_group_size=60)
    inst = generate_instance(params, 3)
    assert max(t.proc for t in inst.tasks) <= 10
    assert validate(inst).ok


def test_generator_period_weights():
    params = GeneratorParams(n_tasks=200, n_periods=3, period_weights=[1, 0, 0])
    inst = generate_instance(params, 0)
    assert {t.period for t in inst.tasks} == {inst.periods[0]}


def test_task_spec_rejects_nonpositive():
    with pytest.raises(ValueError):
        TaskSpec("a", 4, 0)


@given(seed=st.integers(0, 10 ** 6), n=st.integers(1, 200), r=st.integers(1, 6),
       mults=st.sets(st.sampled_from([2, 3, 4]), min_size=1))
def test_generated_instances_are_harmonic(seed, n, r, mults):
    inst = generate_instance(GeneratorParams(n_tasks=n, n_periods=r,
                                             multiplier_choices=tuple(sorted(mults))), seed)
    assert all(b % a == 0 and b // a >= 1 for a, b in zip(inst.periods, inst.periods[1:]))
    ps = derive_period_structure(inst)
    assert all(c * inst.periods[0] == p for c, p in zip(ps.interval_counts, inst.periods))
    assert all(ps.interval_counts[v] % ps.interval_counts[u] == 0
               for u in range(r) for v in range(u, r))
    assert validate(inst).ok


task_st = st.builds(lambda i, p, c: (f"t{i}", p, c), st.integers(0, 10 ** 4),
                    st.sampled_from([5, 10, 20]), st.integers(1, 50))


@given(tasks=st.lists(task_st, max_size=30), hs=st.integers(0, 20), smax=st.integers(1, 500))
def test_serialize_parse_identity(tasks, hs, smax):
    inst = make_instance(tasks, [5, 10, 20], hs, smax)
    assert parse_instance(serialize_instance(inst)) == inst
