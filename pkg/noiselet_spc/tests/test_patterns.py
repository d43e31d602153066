import numpy as np
import pytest

from noiselet_spc.errors import BundleOverflowError, IndexRangeError, PatternError, PlanError
from noiselet_spc.fields import NoiseletOrder
from noiselet_spc.sensing.patterns import (
    KIND_A, KIND_B, PlaneDescriptor, build_patterns, bundles_for_plan, fast_patterns, gen_bundle,
    gen_pattern_fast, invert_patterns, pattern_signs, resolve_sign_map)
from noiselet_spc.sensing.plan import (
    SamplingPlan, default_geometry, load_plan, make_plan, plan_from_ratio, round_even, save_plan)
from noiselet_spc.transforms.noiselet import dense_noiselet

from conftest import dense_rows


def test_full_plan_at_n4():
    plan = make_plan(2, 4, seed=11)
    assert sorted(plan.upper_rows) == [1, 2]
    assert sorted(plan.row_indices().tolist()) == [1, 2, 3, 4]
    assert plan.is_full


def test_plan_mirror_structure():
    plan = make_plan(4, 8, seed=7)
    assert len(set(plan.upper_rows)) == 4
    assert all(1 <= k <= 8 for k in plan.upper_rows)
    rows = plan.row_indices()
    for j in range(8):
        assert rows[j] + rows[7 - j] == 17


def test_plan_is_deterministic():
    assert make_plan(10, 200, seed=5) == make_plan(10, 200, seed=5)
    assert make_plan(10, 200, seed=5).upper_rows != make_plan(10, 200, seed=6).upper_rows


@pytest.mark.parametrize('m', [3, 0, 18])
def test_plan_rejects_bad_m(m):
    with pytest.raises(PlanError):
        make_plan(4, m, seed=0)


def test_plan_validation():
    order = NoiseletOrder(4)
    with pytest.raises(PlanError):
        SamplingPlan(order, (4, 4), 4, (1, 1))
    with pytest.raises(PlanError):
        SamplingPlan(order, (4, 4), 4, (1, 9))
    with pytest.raises(PlanError):
        SamplingPlan(order, (4, 8), 4, (1, 2))


def test_ratio_rounding():
    assert round_even(0.3, 4096) == 1228
    assert round_even(1.0, 16) == 16
    assert round_even(0.01, 16) == 2
    assert plan_from_ratio((8, 16), 0.25, seed=1).m == 32
    assert default_geometry(NoiseletOrder(7)) == (8, 16)
    with pytest.raises(PlanError):
        round_even(0.0, 16)


def test_plan_yaml_file(tmp_path):
    plan = make_plan(6, 20, seed=3, geometry=(4, 16))
    path = tmp_path / 'plan.yaml'
    save_plan(plan, path)
    assert load_plan(path) == plan
    assert 'upper_rows' in path.read_text()


def test_n2_patterns_from_definition():
    plan = make_plan(1, 2, seed=0)
    patterns = build_patterns(plan).patterns
    assert patterns[0].tolist() == [1, 1]
    assert patterns[1].tolist() == [0, 1]


@pytest.mark.parametrize('q', range(1, 9))
def test_patterns_are_binary_with_constant_brightness(q):
    n = 1 << q
    plan = make_plan(q, n, seed=q)
    patterns = build_patterns(plan).patterns
    assert set(np.unique(patterns).tolist()) <= {0, 1}
    # every noiselet row sums to 1
    if q % 2:
        first, second = (n + int(np.sqrt(2 * n))) // 2, n // 2
    else:
        first = second = (n + int(np.sqrt(n))) // 2
    assert np.all(patterns[0::2].sum(axis=1) == first)
    assert np.all(patterns[1::2].sum(axis=1) == second)


def test_invert_known_pairs():
    phi = invert_patterns(([1, 1], [0, 1]), 'odd').to_complex()
    assert np.allclose(phi, 0.5 * np.array([1 - 1j, 1 + 1j]), atol=1e-12)
    ones = np.ones(8, dtype=np.uint8)
    phi = invert_patterns((ones, ones), 'odd').to_complex()
    assert np.allclose(phi, (1 + 1j) / 4, atol=1e-12)


@pytest.mark.parametrize('q', [4, 5])
def test_invert_recovers_every_row(q):
    plan = make_plan(q, 1 << q, seed=0)
    patterns = build_patterns(plan).patterns
    dense = dense_noiselet(q).to_complex()
    for j, k in enumerate(plan.pair_rows()):
        phi = invert_patterns((patterns[2 * j], patterns[2 * j + 1]), plan.order).to_complex()
        assert np.max(np.abs(phi - dense[k - 1])) < 1e-12


def test_invert_gives_mirror_conjugates():
    plan = make_plan(6, 24, seed=2)
    patterns = build_patterns(plan).patterns
    phi = dense_rows(plan)
    for j in range(plan.m // 2):
        row = invert_patterns((patterns[2 * j], patterns[2 * j + 1]), plan.order).to_complex()
        assert np.max(np.abs(row.conj() - phi[plan.m - 1 - j])) < 1e-12


def test_invert_rejects_non_binary():
    with pytest.raises(PatternError):
        invert_patterns(([0, 2], [1, 0]), 'odd')
    with pytest.raises(PatternError):
        invert_patterns(([0, 1], [1, 0, 1]), 'even')


def test_fast_single_patterns():
    assert gen_pattern_fast(1, KIND_A, 1).tolist() == [1, 0]
    assert gen_pattern_fast(1, KIND_B, 1).tolist() == [1, 1]
    assert gen_pattern_fast(1, KIND_A, 0).tolist() == [1]
    assert gen_pattern_fast(1, KIND_B, 0).tolist() == [1]
    with pytest.raises(IndexRangeError):
        gen_pattern_fast(3, KIND_A, 1)
    with pytest.raises(ValueError):
        gen_pattern_fast(1, 'c', 1)


@pytest.mark.parametrize('q', range(1, 9))
def test_fast_pattern_brightness_is_row_independent(q):
    n = 1 << q
    angle = np.pi * (q + 1) / 4
    ones_a = int(round((n + np.sqrt(2 * n) * np.cos(angle)) / 2))
    ones_b = int(round((n + np.sqrt(2 * n) * np.sin(angle)) / 2))
    for k in range(1, n + 1):
        assert gen_pattern_fast(k, KIND_A, q).sum() == ones_a
        assert gen_pattern_fast(k, KIND_B, q).sum() == ones_b


def test_sign_map_at_q1():
    (kind1, comp1), (kind2, comp2) = pattern_signs(1)
    assert (kind1, comp1) == (KIND_B, False)
    assert (kind2, comp2) == (KIND_A, True)


@pytest.mark.parametrize('q', range(0, 9))
def test_first_pattern_source_follows_q_mod_4(q):
    (kind1, _), (kind2, _) = pattern_signs(q)
    assert kind1 == (KIND_A if q % 4 >= 2 else KIND_B)
    assert {kind1, kind2} == {KIND_A, KIND_B}


@pytest.mark.parametrize('q', range(1, 9))
def test_fast_path_equals_definition(q):
    plan = make_plan(q, 1 << q, seed=q)
    assert np.array_equal(fast_patterns(plan).patterns, build_patterns(plan).patterns)


def test_fast_path_equals_definition_for_partial_plan():
    plan = make_plan(9, 100, seed=4)
    assert np.array_equal(fast_patterns(plan, planes_per_bundle=7).patterns, build_patterns(plan).patterns)


def test_sign_map_follows_plan_order():
    plan = make_plan(5, 8, seed=1)
    descriptors = resolve_sign_map(plan)
    assert len(descriptors) == 8
    assert [d.row for d in descriptors[::2]] == list(plan.upper_rows)


def test_single_plane_bundle_equals_single_pattern():
    bundle = gen_bundle([(KIND_B, 5, False)], 4)
    assert bundle.count == 1
    assert np.array_equal(bundle.unpack(0), gen_pattern_fast(5, KIND_B, 4))


def test_three_plane_bundle():
    descriptors = [PlaneDescriptor(KIND_A, 3, False), PlaneDescriptor(KIND_B, 3, True),
                   PlaneDescriptor(KIND_A, 16, False)]
    bundle = gen_bundle(descriptors, 4)
    assert np.array_equal(bundle.unpack(0), gen_pattern_fast(3, KIND_A, 4))
    assert np.array_equal(bundle.unpack(1), 1 - gen_pattern_fast(3, KIND_B, 4))
    assert np.array_equal(bundle.unpack(2), gen_pattern_fast(16, KIND_A, 4))
    assert np.all(bundle.planes & 1 == 0)
    with pytest.raises(IndexRangeError):
        bundle.unpack(3)


@pytest.mark.parametrize('width, count', [(64, 23), (64, 62), (16, 14), (8, 6)])
def test_full_bundles_unpack_to_singles(width, count, rng):
    q = 5
    rows = rng.integers(1, (1 << q) + 1, size=count)
    kinds = rng.choice([KIND_A, KIND_B], size=count)
    flips = rng.integers(0, 2, size=count).astype(bool)
    descriptors = [PlaneDescriptor(str(k), int(r), bool(c)) for k, r, c in zip(kinds, rows, flips)]
    bundle = gen_bundle(descriptors, q, width=width)
    for t, d in enumerate(descriptors):
        single = gen_pattern_fast(d.row, d.kind, q)
        expected = 1 - single if d.complement else single
        assert np.array_equal(bundle.unpack(t), expected)


def test_bundle_overflow():
    descriptors = [(KIND_A, 1, False)] * 63
    with pytest.raises(BundleOverflowError):
        gen_bundle(descriptors, 4, width=64)
    with pytest.raises(OverflowError):
        gen_bundle(descriptors[:7], 4, width=8)


def test_bundles_for_plan_framing():
    plan = make_plan(8, 100, seed=9)
    bundles = bundles_for_plan(plan, planes_per_bundle=23)
    assert [b.count for b in bundles] == [23, 23, 23, 23, 8]
    assert all(b.geometry == plan.geometry for b in bundles)


def test_patterns_are_deterministic():
    a = build_patterns(make_plan(7, 40, seed=12)).patterns
    b = build_patterns(make_plan(7, 40, seed=12)).patterns
    assert a.tobytes() == b.tobytes()
