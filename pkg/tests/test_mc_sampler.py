"""Monte Carlo sampler vs closed-form moments and the quadrature route.

Statistical checks use 4-standard-error windows at a fixed seed, so they
are deterministic in practice; exact determinism itself is asserted at
the byte level.
"""

import math

import numpy as np
import pytest

from specgap.bounds_engine import rayleigh_upper
from specgap.catalog import FamilySpec, make_family, quadratic_candidate
from specgap.errors import DegenerateFunction, InvalidInput
from specgap.mc_sampler import (
    SampleBatch,
    rayleigh_estimate,
    sample_mu,
    sample_radius,
)
from specgap.radial_model import moment

SEED = 20240817
COUNT = 100_000

GAUSS3, UNIT, _ = make_family(FamilySpec("gaussian", 3))
BALL2, _, _ = make_family(FamilySpec("uniform_ball", 2))
BALL4, _, _ = make_family(FamilySpec("uniform_ball", 4))
CAU34, ONEP, _ = make_family(
    FamilySpec("generalized_cauchy", 3, "one_plus_r2", beta=4.0))

LIN_F = lambda x: np.sum(x, axis=1)  # noqa: E731
LIN_DF = lambda x: np.ones_like(np.asarray(x, dtype=float))  # noqa: E731


# ----------------------------------------------------------- sample_radius


@pytest.mark.parametrize("measure,m2_true,label", [
    (BALL2, 0.5, "ball n=2"),
    (GAUSS3, 3.0, "gaussian n=3"),
    (CAU34, 1.0, "cauchy n=3 beta=4"),
], ids=["ball2", "gauss3", "cauchy34"])
def test_radius_second_moment(measure, m2_true, label):
    r = sample_radius(measure, COUNT, SEED)
    r2 = r * r
    se = r2.std(ddof=1) / math.sqrt(COUNT)
    assert abs(r2.mean() - m2_true) <= 4.0 * se, (
        f"{label}: {r2.mean():.5f} vs {m2_true} (se {se:.5f})")
    # and the quadrature moment agrees with the closed form independently
    assert abs(moment(measure, 2) - m2_true) < 1e-8 * (1.0 + m2_true)


def test_radius_determinism_and_support():
    r1 = sample_radius(GAUSS3, 1000, 7)
    r2 = sample_radius(GAUSS3, 1000, 7)
    assert r1.tobytes() == r2.tobytes()
    r3 = sample_radius(GAUSS3, 1000, 8)
    assert r1.tobytes() != r3.tobytes()
    assert np.all(r1 >= 0.0)


@pytest.mark.parametrize("bad_call", [
    lambda: sample_radius(GAUSS3, 0, 1),
    lambda: sample_radius(GAUSS3, 10, -1),
    lambda: sample_radius(GAUSS3, 10, True),
    lambda: sample_radius(GAUSS3, 10, 2 ** 64),
], ids=["count0", "negseed", "boolseed", "hugeseed"])
def test_radius_rejects(bad_call):
    with pytest.raises(InvalidInput):
        bad_call()


# --------------------------------------------------------------- sample_mu


@pytest.fixture(scope="module")
def gauss_batch():
    return sample_mu(GAUSS3, COUNT, SEED)


def test_batch_shape_and_determinism(gauss_batch):
    assert gauss_batch.points.shape == (COUNT, 3)
    assert gauss_batch.seed == SEED
    assert gauss_batch.count == COUNT
    assert gauss_batch.n == 3
    again = sample_mu(GAUSS3, COUNT, SEED)
    assert gauss_batch.points.tobytes() == again.points.tobytes()


def test_gaussian_coordinate_statistics(gauss_batch):
    pts = gauss_batch.points
    for k in range(3):
        col = pts[:, k]
        se = col.std(ddof=1) / math.sqrt(COUNT)
        assert abs(col.mean()) <= 4.0 * se, f"coordinate {k} mean"
        assert abs(col.var(ddof=1) - 1.0) <= 4.0 * math.sqrt(2.0 / COUNT), (
            f"coordinate {k} variance {col.var(ddof=1):.5f}")
    prod = pts[:, 0] * pts[:, 1]
    se = prod.std(ddof=1) / math.sqrt(COUNT)
    assert abs(prod.mean()) <= 4.0 * se, "cross moment E[x1 x2]"


def test_ball_support_and_heavy_tail_finiteness():
    bb = sample_mu(BALL4, COUNT, SEED)
    assert float(np.linalg.norm(bb.points, axis=1).max()) <= 1.0
    cb = sample_mu(CAU34, COUNT, SEED)
    assert np.all(np.isfinite(cb.points))


# -------------------------------------------------------- rayleigh_estimate


def test_gaussian_linear_unit_ratio(gauss_batch):
    res = rayleigh_estimate(gauss_batch, LIN_F, LIN_DF, UNIT)
    assert abs(res.ratio - 1.0) <= res.ci_half_width, (
        f"{res.ratio:.5f} +- {res.ci_half_width:.5f}")
    assert res.batches == 16 and res.ci_half_width >= 0.0


def test_gaussian_linear_weighted_ratio(gauss_batch):
    # E[sigma^2] = E[1 + x_1^2 + ... + x_n^2] = n + 1 for a linear function
    res = rayleigh_estimate(gauss_batch, LIN_F, LIN_DF, ONEP)
    assert abs(res.ratio - 4.0) <= res.ci_half_width, (
        f"{res.ratio:.5f} +- {res.ci_half_width:.5f}")


def test_heavy_tail_radial_quadratic_ratio():
    cb = sample_mu(CAU34, COUNT, SEED)
    f = lambda x: np.sum(np.asarray(x, dtype=float) ** 2, axis=1) - 1.0  # noqa: E731
    df = lambda x: 2.0 * np.asarray(x, dtype=float)  # noqa: E731
    res = rayleigh_estimate(cb, f, df, ONEP)
    # moments m2 = 1, m4 = 5 give ratio 4 (m2 + m4) / (m4 - m2^2) = 6
    oracle = 4.0 * (1.0 + 5.0) / (5.0 - 1.0)
    assert abs(res.ratio - oracle) <= res.ci_half_width, (
        f"{res.ratio:.5f} +- {res.ci_half_width:.5f} vs {oracle}")


def test_mc_matches_quadrature_route_and_solver(gauss_batch, gap_of):
    f = lambda x: np.sum(np.asarray(x, dtype=float) ** 2, axis=1)  # noqa: E731
    df = lambda x: 2.0 * np.asarray(x, dtype=float)  # noqa: E731
    res = rayleigh_estimate(gauss_batch, f, df, UNIT)
    exact = rayleigh_upper(GAUSS3, UNIT, quadratic_candidate())
    assert abs(res.ratio - float(exact)) <= res.ci_half_width, (
        f"{res.ratio:.5f} vs {float(exact):.8f}")
    est = gap_of(FamilySpec("gaussian", 3))
    assert res.ratio >= est.value - 3.0 * res.ci_half_width


@pytest.mark.parametrize("bad_call,exc", [
    (lambda b: rayleigh_estimate(
        b, lambda x: np.ones(len(x)),
        lambda x: np.zeros_like(np.asarray(x, dtype=float)), UNIT),
     DegenerateFunction),
    (lambda b: rayleigh_estimate(
        b, lambda x: np.asarray(x, dtype=float), LIN_DF, UNIT),
     InvalidInput),
    (lambda b: rayleigh_estimate(
        SampleBatch(points=np.ones((4, 3)), seed=1, count=4),
        LIN_F, LIN_DF, UNIT),
     InvalidInput),
    (lambda b: rayleigh_estimate("nope", LIN_F, LIN_DF, UNIT),
     InvalidInput),
], ids=["constant-f", "vector-f", "tiny-batch", "non-batch"])
def test_rayleigh_rejects(gauss_batch, bad_call, exc):
    with pytest.raises(exc):
        bad_call(gauss_batch)
