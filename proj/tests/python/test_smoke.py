import hashlib
import math

import numpy as np
import pytest

import qcs


def test_sign_quantizer_maps_zero_up():
    q = qcs.Quantizer.sign()
    np.testing.assert_array_equal(q.quantize(np.array([-2.0, 0.0, 3.5])), [-1.0, 1.0, 1.0])
    assert q.bit_depth == 1


def test_uniform_quantizer_midpoints():
    q = qcs.Quantizer.uniform(2, 3.0)
    assert q.levels == pytest.approx([-2.25, -0.75, 0.75, 2.25])
    z = np.linspace(-5, 5, 101)
    edges = np.array([-1.5, 0.0, 1.5])
    expected = np.array(q.levels)[np.searchsorted(edges, z, side="right")]
    np.testing.assert_array_equal(q.quantize(z), expected)
    np.testing.assert_array_equal(q.quantize(q.quantize(z)), q.quantize(z))


def test_regions_and_penalty():
    q = qcs.Quantizer.uniform(2, 3.0)
    r = q.region_of(0.75)
    assert (r.lower, r.upper) == (0.0, 1.5)
    box = q.regions_of(np.array([0.75, -2.25]))
    np.testing.assert_array_equal(box.clip(np.array([2.0, 0.0])), [1.5, -1.5])
    assert q.phi_penalty(0.5, 0.75) == 0.0
    assert q.phi_penalty(-0.5, 0.75) > 0.0


def test_hard_threshold_and_support():
    x = np.array([3.0, -5.0, 1.0, 0.0])
    np.testing.assert_array_equal(qcs.hard_threshold(x, 2), [3.0, -5.0, 0.0, 0.0])
    assert qcs.top_support(np.array([2.0, -2.0, 1.0]), 1) == [0]


def test_least_squares_matches_numpy():
    rng = np.random.default_rng(0)
    a = rng.standard_normal((12, 4))
    b = rng.standard_normal(12)
    np.testing.assert_allclose(qcs.least_squares(a, b), np.linalg.lstsq(a, b, rcond=None)[0], atol=1e-10)
    assert qcs.operator_norm(a) == pytest.approx(np.linalg.norm(a, 2), rel=1e-10)


def test_derive_seed_is_truncated_sha256():
    digest = hashlib.sha256(b"7|problem|0").digest()
    assert qcs.derive_seed(7, "problem", 0) == int.from_bytes(digest[:8], "big")


def test_identity_quantizer_qiht_is_iht():
    rng = np.random.default_rng(1)
    a = rng.standard_normal((16, 32))
    x = np.zeros(32)
    x[[3, 10, 20]] = rng.standard_normal(3)
    y = a @ x
    mu = 1.0 / np.linalg.norm(a, 2) ** 2

    def keep(v, k):
        out = np.zeros_like(v)
        idx = np.argsort(-np.abs(v), kind="stable")[:k]
        out[idx] = v[idx]
        return out

    ref = a.T @ y
    ref = ref / np.linalg.norm(ref)
    seen = []
    qcs.solve("qiht", a, y, qcs.Quantizer.identity(), 3, max_iterations=25, step_size=mu,
              observer=lambda i, it: seen.append(np.array(it)))
    assert seen
    for it in seen:
        ref = keep(ref + mu * a.T @ (y - a @ ref), 3)
        np.testing.assert_allclose(it, ref, atol=1e-10)


@pytest.mark.parametrize("algorithm", ["qiht", "aop-qiht", "qcosamp", "qsp"])
def test_fine_quantization_recovers(algorithm):
    q = qcs.Quantizer.uniform(12, 3.0)
    p = qcs.quantize_problem(qcs.gen_problem(128, 96, 4, 5), q)
    r = qcs.solve(algorithm, p.phi, p.y, q, 4)
    assert np.linalg.norm(r.estimate) == pytest.approx(1.0)
    assert qcs.rsnr(r.estimate, p.x_true) > 40.0


def test_run_trial_is_deterministic():
    cell = qcs.Cell(n=200, k=4, total_bits=300, bit_depth=1)
    assert cell.m == 300
    a = qcs.run_trial(cell, 0, "qiht", 7)
    b = qcs.run_trial(cell, 0, "qiht", 7)
    assert a.rsnr_db == b.rsnr_db and a.seed == b.seed == qcs.trial_seed(7, cell, 0)
    assert a.algorithm == "qiht"
    assert math.isfinite(a.rsnr_db) or a.rsnr_db == math.inf


def test_errors_surface_as_value_error():
    with pytest.raises(ValueError):
        qcs.hard_threshold(np.array([1.0]), 2)
    with pytest.raises(qcs.InvalidArgument):
        qcs.solve("omp", np.eye(2), np.ones(2), qcs.Quantizer.sign(), 1)
