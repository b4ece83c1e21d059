import itertools
import math

import numpy as np
import pytest

from isingsel import graphs, sampling


def chain_model(p, omega):
    topo = graphs.Topology.from_edges(p, [(i, i + 1) for i in range(1, p)])
    return graphs.IsingModel(topology=topo, weights={e: omega for e in topo.edges})


def pair_model(weight=0.5):
    topo = graphs.Topology.from_edges(2, [(1, 2)])
    return graphs.IsingModel(topology=topo, weights={(1, 2): weight})


def zero_coupling_model(p):
    # couplings cannot be exactly zero, so use an edgeless topology
    return graphs.IsingModel(
        topology=graphs.Topology(p=p, edges=frozenset(), d=0), weights={}
    )


def brute_force_table(model):
    """Independent enumeration over itertools.product, no shared code."""
    p = model.p
    weights = []
    configs = []
    for x in itertools.product((-1.0, 1.0), repeat=p):
        s = sum(w * x[a - 1] * x[b - 1] for (a, b), w in model.weights.items())
        weights.append(math.exp(s))
        configs.append(x)
    Z = sum(weights)
    return {cfg: w / Z for cfg, w in zip(configs, weights)}


def test_enumerate_uniform_when_uncoupled():
    table = sampling.enumerate_distribution(zero_coupling_model(3))
    assert np.allclose(table.probs, 1.0 / 8.0, atol=1e-15)


def test_enumerate_two_spins_closed_form():
    table = sampling.enumerate_distribution(pair_model(0.5))
    Z = 2 * math.exp(0.5) + 2 * math.exp(-0.5)
    assert math.isclose(math.exp(table.logZ), Z, rel_tol=1e-12)
    assert math.isclose(table.prob([1.0, 1.0]), math.exp(0.5) / Z, rel_tol=1e-12)
    assert math.isclose(table.prob([1.0, -1.0]), math.exp(-0.5) / Z, rel_tol=1e-12)


def test_enumerate_matches_brute_force():
    model = chain_model(4, 0.5)
    table = sampling.enumerate_distribution(model)
    brute = brute_force_table(model)
    for cfg, prob in brute.items():
        assert math.isclose(table.prob(cfg), prob, rel_tol=1e-12)


def test_enumerate_probs_sum_to_one():
    model = chain_model(10, 0.3)
    table = sampling.enumerate_distribution(model)
    assert abs(table.probs.sum() - 1.0) < 1e-12


def test_enumerate_spin_flip_symmetry():
    model = chain_model(5, 0.7)
    table = sampling.enumerate_distribution(model)
    n_cfg = 1 << 5
    flipped = n_cfg - 1 - np.arange(n_cfg)  # complementing bits negates signs
    assert np.array_equal(table.probs, table.probs[flipped])


def test_enumeration_cap():
    with pytest.raises(sampling.EnumerationCapExceeded):
        sampling.enumerate_distribution(zero_coupling_model(21))
    with pytest.raises(sampling.EnumerationCapExceeded):
        sampling.sample_exact_enum(zero_coupling_model(21), 5, rng=0)


def test_conditional_prob_closed_form():
    assert sampling.conditional_prob(zero_coupling_model(3), 2, [1.0, -1.0]) == 0.5
    got = sampling.conditional_prob(pair_model(0.5), 1, [1.0])
    assert math.isclose(got, math.e / (1 + math.e), rel_tol=1e-12)


def test_conditional_prob_matches_enumeration():
    model = chain_model(5, 0.4)
    table = sampling.enumerate_distribution(model)
    rng = np.random.Generator(np.random.Philox(3))
    for r in range(1, 6):
        for _ in range(10):
            rest = rng.choice([-1.0, 1.0], size=4)
            full_plus = np.insert(rest, r - 1, 1.0)
            full_minus = np.insert(rest, r - 1, -1.0)
            denom = table.prob(full_plus) + table.prob(full_minus)
            want = table.prob(full_plus) / denom
            got = sampling.conditional_prob(model, r, rest)
            assert math.isclose(got, want, rel_tol=1e-12)


def test_conditional_prob_two_outcome_normalization():
    model = chain_model(4, 0.6)
    rng = np.random.Generator(np.random.Philox(9))
    for _ in range(20):
        rest = rng.choice([-1.0, 1.0], size=3)
        assert sampling.conditional_prob(model, 2, rest) + sampling.conditional_prob(
            model, 2, -rest
        ) == 1.0


def test_exact_enum_sampler_uniform_frequencies():
    data = sampling.sample_exact_enum(zero_coupling_model(3), 80_000, rng=42)
    assert data.values.shape == (80_000, 3)
    bits = (data.values > 0) @ np.array([1, 2, 4])
    freq = np.bincount(bits.astype(int), minlength=8) / data.n
    assert np.all(np.abs(freq - 1 / 8) < 0.01)


def test_exact_enum_sampler_determinism_and_shape():
    model = chain_model(4, 0.5)
    a = sampling.sample_exact_enum(model, 100, rng=7)
    b = sampling.sample_exact_enum(model, 100, rng=7)
    assert np.array_equal(a.values, b.values)
    single = sampling.sample_exact_enum(model, 1, rng=7)
    assert single.values.shape == (1, 4)
    assert set(np.unique(single.values)) <= {-1.0, 1.0}


def test_exact_enum_sampler_moment_rate():
    """Moment error at 4n should be about half the error at n."""
    model = chain_model(3, 0.5)
    exact = sampling.enumerate_distribution(model).pairwise_moments()
    ratios = []
    for seed in range(20):
        errs = []
        for n in (2_000, 8_000):
            data = sampling.sample_exact_enum(model, n, rng=1000 + seed)
            errs.append(np.abs(sampling.pairwise_moments(data) - exact).max())
        ratios.append(errs[1] / errs[0])
    assert np.median(ratios) < 0.7


def star_model(p, omega, mode="positive", seed=0):
    topo = graphs.make_star(p, p - 1)
    return graphs.assign_couplings(topo, mode, omega, rng=seed)


def test_star_sampler_hub_marginal():
    model = star_model(5, 0.25)
    data = sampling.sample_exact_star(model, 50_000, rng=11)
    assert abs(np.mean(data.column(1) > 0) - 0.5) < 0.01


def test_star_sampler_moments_match_enumeration():
    model = star_model(5, 0.25, mode="mixed", seed=3)
    exact = sampling.enumerate_distribution(model).pairwise_moments()
    data = sampling.sample_exact_star(model, 100_000, rng=5)
    emp = sampling.pairwise_moments(data)
    assert np.abs(emp - exact).max() < 0.01


def test_star_sampler_decoupled_limit():
    model = star_model(4, 1e-12)
    data = sampling.sample_exact_star(model, 60_000, rng=2)
    emp = sampling.pairwise_moments(data)
    off = emp[~np.eye(4, dtype=bool)]
    assert np.abs(off).max() < 0.02


def test_star_sampler_partial_star_and_rejection():
    # star with isolated vertices is fine
    topo = graphs.make_star(6, 2)
    model = graphs.assign_couplings(topo, "positive", 0.4, rng=0)
    data = sampling.sample_exact_star(model, 1000, rng=1)
    assert data.values.shape == (1000, 6)
    # a path on 3 vertices has no common vertex across its 2 edges? it does (the middle);
    # use a triangle-free non-star: 4-cycle
    cyc = graphs.make_grid4(2)
    bad = graphs.assign_couplings(cyc, "positive", 0.4, rng=0)
    with pytest.raises(ValueError):
        sampling.sample_exact_star(bad, 10, rng=0)


def test_star_sampler_determinism():
    model = star_model(6, 0.3)
    a = sampling.sample_exact_star(model, 50, rng=9)
    b = sampling.sample_exact_star(model, 50, rng=9)
    assert np.array_equal(a.values, b.values)


def test_gibbs_uncoupled_is_iid_uniform():
    data = sampling.gibbs_sample(zero_coupling_model(3), 80_000, 10, 1, rng=21)
    bits = (data.values > 0) @ np.array([1, 2, 4])
    freq = np.bincount(bits.astype(int), minlength=8) / data.n
    assert np.all(np.abs(freq - 1 / 8) < 0.01)


def test_gibbs_moments_match_enumeration():
    model = graphs.assign_couplings(graphs.make_grid4(2), "positive", 0.25, rng=0)
    exact = sampling.enumerate_distribution(model).pairwise_moments()
    data = sampling.gibbs_sample(model, 50_000, 200, 5, rng=13)
    emp = sampling.pairwise_moments(data)
    assert np.abs(emp - exact).max() < 0.02


def test_gibbs_determinism():
    model = chain_model(5, 0.5)
    a = sampling.gibbs_sample(model, 40, 20, 2, rng=3)
    b = sampling.gibbs_sample(model, 40, 20, 2, rng=3)
    assert np.array_equal(a.values, b.values)


def test_gibbs_validation():
    model = chain_model(3, 0.5)
    with pytest.raises(ValueError):
        sampling.gibbs_sample(model, 0, 10, 1, rng=0)
    with pytest.raises(ValueError):
        sampling.gibbs_sample(model, 10, -1, 1, rng=0)


def test_sample_matrix_validation():
    with pytest.raises(ValueError):
        sampling.SampleMatrix(np.array([[1.0, 0.5]]))
    with pytest.raises(ValueError):
        sampling.SampleMatrix(np.zeros((0, 3)))


def test_samples_roundtrip(tmp_path):
    model = chain_model(4, 0.5)
    data = sampling.sample_exact_enum(model, 25, rng=1)
    path = tmp_path / "samples.txt"
    sampling.save_samples(data, path)
    loaded = sampling.load_samples(path)
    assert np.array_equal(loaded.values, data.values)
