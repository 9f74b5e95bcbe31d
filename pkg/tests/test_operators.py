import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pwrga.errors import ConfigurationError
from pwrga.operators import (
    MODULATION_LEVELS,
    MutationSpec,
    OperatorSpec,
    crossover_arithmetic,
    crossover_blx,
    crossover_pmx,
    crossover_sbx,
    de_style_step,
    logit_mix_probability,
    mutate_bitflip,
    mutate_modulation,
    mutate_real,
    mutate_swap,
    pwr_logit,
    pwr_permutation,
    pwr_power_modulation,
    pwr_real,
    repair_permutation,
    weighted_allele_selection,
)
from pwrga.pascal import equal_weights, pascal_weights

SQUARE = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
SQUARE_D = np.linalg.norm(SQUARE[:, None, :] - SQUARE[None, :, :], axis=2)


def rng_of(seed):
    return np.random.default_rng(seed)


# ---------------------------------------------------------------- pwr_real

def test_pwr_real_symmetric_two_parents():
    w = pascal_weights(2)
    for seed in range(5):
        child = pwr_real([np.zeros(2), np.ones(2)], w, rng_of(seed))
        np.testing.assert_array_equal(child, [0.5, 0.5])


def test_pwr_real_identical_parents_fixed_point():
    w = pascal_weights(4)
    p = np.array([1.5, -2.0, 0.25])
    child = pwr_real([p, p, p, p], w, rng_of(0))
    np.testing.assert_allclose(child, p, atol=1e-15)


def test_pwr_real_three_parent_support():
    # 0.25/0.5/0.25 on any ordering of {0,1,2} lands on one of three values
    w = pascal_weights(3)
    parents = [np.array([0.0]), np.array([1.0]), np.array([2.0])]
    seen = set()
    for seed in range(60):
        child = pwr_real(parents, w, rng_of(seed))
        assert child[0] in (0.75, 1.0, 1.25)
        seen.add(float(child[0]))
    assert seen == {0.75, 1.0, 1.25}


def test_pwr_real_deterministic_per_seed():
    w = pascal_weights(5)
    parents = [rng_of(100 + i).normal(size=6) for i in range(5)]
    a = pwr_real(parents, w, rng_of(9))
    b = pwr_real(parents, w, rng_of(9))
    np.testing.assert_array_equal(a, b)


@settings(max_examples=200)
@given(
    st.integers(min_value=2, max_value=7),
    st.integers(min_value=1, max_value=16),
    st.integers(min_value=0, max_value=10_000),
)
def test_pwr_real_convex_hull(m, dim, seed):
    rng = rng_of(seed)
    parents = [rng.uniform(-10, 10, size=dim) for _ in range(m)]
    child = pwr_real(parents, pascal_weights(m), rng)
    stacked = np.stack(parents)
    slack = 1e-12 * np.maximum(1.0, np.abs(stacked).max(axis=0))
    assert np.all(child >= stacked.min(axis=0) - slack)
    assert np.all(child <= stacked.max(axis=0) + slack)


def test_pwr_real_arity_and_shape_errors():
    w = pascal_weights(3)
    with pytest.raises(ConfigurationError, match="parents"):
        pwr_real([np.zeros(2), np.ones(2)], w, rng_of(0))
    with pytest.raises(ConfigurationError, match="shapes"):
        pwr_real([np.zeros(2), np.ones(3), np.ones(2)], w, rng_of(0))


# --------------------------------------------------------------- pwr_logit

def test_logit_mix_unanimous_fixed_points():
    w = pascal_weights(3)
    ones = [np.ones(4)] * 3
    zeros = [np.zeros(4)] * 3
    np.testing.assert_allclose(logit_mix_probability(ones, w), 0.99, atol=1e-12)
    np.testing.assert_allclose(logit_mix_probability(zeros, w), 0.01, atol=1e-12)


def test_logit_mix_two_parent_disagreement_is_half():
    w = pascal_weights(2)
    p = logit_mix_probability([np.array([1.0]), np.array([0.0])], w)
    np.testing.assert_allclose(p, 0.5, atol=1e-15)


def test_logit_mix_pascal3_one_dissenter():
    # slots (1,1,0) under weights (.25,.5,.25): mixed logit = 0.5*ln(99),
    # so p = sqrt(99)/(1+sqrt(99))
    w = pascal_weights(3)
    p = logit_mix_probability(
        [np.array([1.0]), np.array([1.0]), np.array([0.0])], w
    )
    expected = math.sqrt(99) / (1 + math.sqrt(99))
    np.testing.assert_allclose(p, expected, rtol=1e-12)


def test_pwr_logit_returns_bits_and_tracks_probability():
    w = pascal_weights(3)
    ones = [np.ones(10_000, dtype=np.int8)] * 3
    child = pwr_logit(ones, w, rng_of(3))
    assert set(np.unique(child)) <= {0, 1}
    assert abs(child.mean() - 0.99) < 0.005


def test_pwr_logit_rejects_non_binary():
    w = pascal_weights(2)
    with pytest.raises(ConfigurationError, match="0/1"):
        pwr_logit([np.array([0.0, 2.0]), np.array([1.0, 1.0])], w, rng_of(0))


# --------------------------------------------------------- permutation ops

def test_stage1_identical_parents():
    w = pascal_weights(3)
    p = np.array([3, 1, 0, 2])
    prov = weighted_allele_selection([p, p, p], w, rng_of(1))
    np.testing.assert_array_equal(prov, p)


def test_stage1_alleles_come_from_parents():
    w = pascal_weights(3)
    rng = rng_of(5)
    parents = [rng.permutation(12) for _ in range(3)]
    prov = weighted_allele_selection(parents, w, rng)
    stacked = np.stack(parents)
    for k in range(12):
        assert prov[k] in stacked[:, k]


def test_repair_noop_on_valid_permutation():
    perm = np.array([2, 0, 3, 1])
    np.testing.assert_array_equal(repair_permutation(perm, SQUARE_D), perm)


def test_repair_single_hole_square():
    # (0,2,2,3): second 2 is the hole; 1 must go there
    out = repair_permutation(np.array([0, 2, 2, 3]), SQUARE_D)
    np.testing.assert_array_equal(out, [0, 2, 1, 3])


def test_repair_two_holes_tie_breaks_low_index():
    # (0,0,2,2): holes at 1 and 3; inserting 1 costs 2-sqrt(2) at both,
    # so the tie goes to position 1, then 3 fills the last hole
    out = repair_permutation(np.array([0, 0, 2, 2]), SQUARE_D)
    np.testing.assert_array_equal(out, [0, 1, 2, 3])


def test_repair_retains_first_occurrences():
    rng = rng_of(11)
    for _ in range(200):
        n = int(rng.integers(4, 33))
        coords = rng.random((n, 2))
        dist = np.linalg.norm(coords[:, None] - coords[None, :], axis=2)
        prov = rng.integers(0, n, size=n)
        out = repair_permutation(prov, dist)
        assert sorted(out.tolist()) == list(range(n))
        seen = set()
        for k in range(n):
            if prov[k] not in seen:
                seen.add(prov[k])
                assert out[k] == prov[k]


def test_pwr_permutation_valid_and_deterministic():
    w = pascal_weights(3)
    rng = rng_of(2)
    n = 16
    coords = rng.random((n, 2))
    dist = np.linalg.norm(coords[:, None] - coords[None, :], axis=2)
    parents = [rng.permutation(n) for _ in range(3)]
    a = pwr_permutation(parents, w, dist, rng_of(77))
    b = pwr_permutation(parents, w, dist, rng_of(77))
    np.testing.assert_array_equal(a, b)
    assert sorted(a.tolist()) == list(range(n))


def test_pwr_permutation_rejects_invalid_parent():
    w = pascal_weights(2)
    with pytest.raises(ConfigurationError, match="permutation"):
        pwr_permutation(
            [np.array([0, 0, 1, 2]), np.array([0, 1, 2, 3])], w, SQUARE_D, rng_of(0)
        )


# --------------------------------------------------------------------- pmx

def test_pmx_reference_instance():
    p1 = np.arange(6)
    p2 = np.array([5, 4, 3, 2, 1, 0])
    child = crossover_pmx(p1, p2, rng_of(0), cuts=(2, 4))
    np.testing.assert_array_equal(child, [5, 4, 2, 3, 1, 0])


def test_pmx_mapping_chain():
    # chain hops twice: p2[2]=3 -> p1 pos map -> lands at position 0
    child = crossover_pmx(
        np.array([0, 1, 2, 3]), np.array([1, 2, 3, 0]), rng_of(0), cuts=(1, 3)
    )
    np.testing.assert_array_equal(child, [3, 1, 2, 0])


def test_pmx_degenerate_cuts():
    p1 = np.array([3, 0, 2, 1])
    p2 = np.array([1, 2, 0, 3])
    np.testing.assert_array_equal(crossover_pmx(p1, p2, rng_of(0), cuts=(0, 4)), p1)
    np.testing.assert_array_equal(crossover_pmx(p1, p2, rng_of(0), cuts=(2, 2)), p2)


@settings(max_examples=150)
@given(st.integers(min_value=2, max_value=40), st.integers(min_value=0, max_value=10_000))
def test_pmx_always_valid(n, seed):
    rng = rng_of(seed)
    p1 = rng.permutation(n)
    p2 = rng.permutation(n)
    child = crossover_pmx(p1, p2, rng)
    assert sorted(child.tolist()) == list(range(n))


def test_pmx_rejects_non_permutation():
    with pytest.raises(ConfigurationError, match="permutation"):
        crossover_pmx(np.array([0, 0, 1]), np.array([0, 1, 2]), rng_of(0))


# -------------------------------------------------------- real 2-parent ops

def test_arithmetic_forced_lambda_midpoint():
    child = crossover_arithmetic(np.array([0.0]), np.array([2.0]), rng_of(0), lam=0.5)
    np.testing.assert_array_equal(child, [1.0])


@settings(max_examples=100)
@given(st.integers(min_value=0, max_value=10_000))
def test_arithmetic_stays_on_segment(seed):
    rng = rng_of(seed)
    p1 = rng.normal(size=5)
    p2 = rng.normal(size=5)
    child = crossover_arithmetic(p1, p2, rng)
    lo = np.minimum(p1, p2) - 1e-12
    hi = np.maximum(p1, p2) + 1e-12
    assert np.all(child >= lo) and np.all(child <= hi)


def test_blx_equal_parents_fixed_point():
    p = np.array([0.3, -0.7])
    np.testing.assert_array_equal(crossover_blx(p, p, 0.3, rng_of(0)), p)


def test_blx_extension_range_empirical():
    rng = rng_of(0)
    draws = np.array(
        [crossover_blx(np.array([0.0]), np.array([1.0]), 0.3, rng)[0] for _ in range(100_000)]
    )
    # support is [-0.3, 1.3]; min/max within 1% of the 1.6-wide range
    assert draws.min() >= -0.3 - 1e-12 and draws.min() <= -0.3 + 0.016
    assert draws.max() <= 1.3 + 1e-12 and draws.max() >= 1.3 - 0.016


def test_blx_clamps_to_bounds():
    rng = rng_of(4)
    bounds = (np.array([0.0]), np.array([1.0]))
    for _ in range(2000):
        c = crossover_blx(np.array([0.0]), np.array([1.0]), 0.5, rng, bounds=bounds)
        assert 0.0 <= c[0] <= 1.0


def test_sbx_u_half_returns_parents():
    p1 = np.array([1.0, -2.0])
    p2 = np.array([3.0, 4.0])
    c1, c2 = crossover_sbx(p1, p2, 15.0, rng_of(0), u=0.5)
    np.testing.assert_allclose(c1, p1, atol=1e-12)
    np.testing.assert_allclose(c2, p2, atol=1e-12)


@settings(max_examples=100)
@given(
    st.integers(min_value=0, max_value=10_000),
    st.floats(min_value=0.5, max_value=40.0),
)
def test_sbx_mean_preserving(seed, eta):
    rng = rng_of(seed)
    p1 = rng.normal(size=4)
    p2 = rng.normal(size=4)
    c1, c2 = crossover_sbx(p1, p2, eta, rng)
    np.testing.assert_allclose((c1 + c2) / 2, (p1 + p2) / 2, atol=1e-9)


def test_de_step_basics():
    p1 = np.array([1.0, 2.0])
    p2 = np.array([3.0, 4.0])
    p3 = np.array([1.0, 0.0])
    np.testing.assert_array_equal(de_style_step(p1, p2, p3, 0.5), [2.0, 4.0])
    np.testing.assert_array_equal(de_style_step(p1, p2, p2, 0.5), p1)
    clamped = de_style_step(p1, p2, p3, 0.5, bounds=(np.zeros(2), np.full(2, 3.0)))
    np.testing.assert_array_equal(clamped, [2.0, 3.0])


# ------------------------------------------------------------- paired blend

def test_pwr_power_modulation():
    w = pascal_weights(3)
    rng = rng_of(8)
    parents = [
        (np.array([0.1, 0.5]), np.array([2, 16])),
        (np.array([0.2, 0.6]), np.array([4, 16])),
        (np.array([0.3, 0.7]), np.array([64, 16])),
    ]
    powers, mods = pwr_power_modulation(parents, w, rng)
    assert 0.1 - 1e-12 <= powers[0] <= 0.3 + 1e-12
    assert 0.5 - 1e-12 <= powers[1] <= 0.7 + 1e-12
    assert mods[0] in (2, 4, 64)
    assert mods[1] == 16


# ---------------------------------------------------------------- mutation

def test_mutate_real_rate_zero_identity():
    g = np.array([1.0, 2.0, 3.0])
    spec = MutationSpec(rate=0.0, sigma0=0.5, decay=0.9)
    out = mutate_real(g, spec, 0, (np.zeros(3), np.full(3, 10.0)), rng_of(0))
    np.testing.assert_array_equal(out, g)


def test_mutate_real_respects_bounds():
    spec = MutationSpec(rate=1.0, sigma0=2.0, decay=1.0)
    bounds = (np.array([-1.0]), np.array([1.0]))
    rng = rng_of(1)
    draws = np.array([mutate_real(np.array([0.0]), spec, 0, bounds, rng)[0] for _ in range(5000)])
    assert draws.min() >= -1.0 and draws.max() <= 1.0
    assert draws.std() > 0.1


def test_mutate_real_decay_fades_out():
    spec = MutationSpec(rate=1.0, sigma0=1.0, decay=0.5)
    g = np.array([5.0, 5.0])
    out = mutate_real(g, spec, 80, (np.zeros(2), np.full(2, 10.0)), rng_of(2))
    np.testing.assert_allclose(out, g, atol=1e-9)


def test_mutate_swap():
    g = np.arange(6)
    np.testing.assert_array_equal(mutate_swap(g, 0.0, rng_of(0)), g)
    two = np.array([0, 1])
    np.testing.assert_array_equal(mutate_swap(two, 1.0, rng_of(0)), [1, 0])
    for seed in range(50):
        out = mutate_swap(g, 1.0, rng_of(seed))
        assert sorted(out.tolist()) == list(range(6))
        assert np.sum(out != g) == 2


def test_mutate_bitflip():
    g = np.array([0, 1, 1, 0], dtype=np.int8)
    np.testing.assert_array_equal(mutate_bitflip(g, 0.0, rng_of(0)), g)
    np.testing.assert_array_equal(mutate_bitflip(g, 1.0, rng_of(0)), [1, 0, 0, 1])


def test_mutate_modulation_values_and_rate():
    g = np.full(8, 16, dtype=np.int64)
    np.testing.assert_array_equal(mutate_modulation(g, 0.0, rng_of(0)), g)
    rng = rng_of(3)
    flips = 0
    total = 0
    for _ in range(20_000):
        out = mutate_modulation(g, 0.3, rng)
        assert np.isin(out, MODULATION_LEVELS).all()
        flips += int(np.sum(out != g))
        total += g.size
    assert abs(flips / total - 0.3) < 0.3 * 0.02


def test_mutate_modulation_rejects_bad_entry():
    with pytest.raises(ConfigurationError, match="modulation"):
        mutate_modulation(np.array([2, 8]), 0.1, rng_of(0))


# ------------------------------------------------------------------- specs

def test_operator_spec_validation():
    OperatorSpec(kind="pwr", m=5)
    OperatorSpec(kind="de", m=3)
    with pytest.raises(ConfigurationError, match="exactly 2"):
        OperatorSpec(kind="arith", m=3)
    with pytest.raises(ConfigurationError, match="exactly 3"):
        OperatorSpec(kind="de", m=2)
    with pytest.raises(ConfigurationError, match="unknown operator"):
        OperatorSpec(kind="uniform", m=2)
    with pytest.raises(ConfigurationError, match="weight shape"):
        OperatorSpec(kind="pwr", m=3, weight_shape="golden")


def test_mutation_spec_validation():
    MutationSpec(rate=0.2, sigma0=0.1)
    with pytest.raises(ConfigurationError):
        MutationSpec(rate=1.2)
    with pytest.raises(ConfigurationError):
        MutationSpec(decay=0.0)
    with pytest.raises(ConfigurationError):
        MutationSpec(sigma0=-0.1)
