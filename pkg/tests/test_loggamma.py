"""Log-Gamma accuracy against exact combinatorial oracles.

The oracles are computed in exact integer arithmetic before the single
final float conversion: log Gamma(k) = log (k-1)!  and
log Gamma(k + 1/2) = log (2k)! + log(sqrt(pi)) - k log 4 - log k!,
so the reference values carry only the rounding of math.log itself.
"""

import math

import numpy as np
import pytest

from specgap import InvalidInput, gamma_ratio, log_gamma

REL = 1e-13


def _half_integer_log_gamma(k):
    # Gamma(k + 1/2) = (2k)! sqrt(pi) / (4^k k!)
    return (math.log(math.factorial(2 * k)) + 0.5 * math.log(math.pi)
            - k * math.log(4.0) - math.log(math.factorial(k)))


def test_integer_factorial_oracle():
    for k in range(1, 171):
        exact = math.log(math.factorial(k - 1))
        got = log_gamma(float(k))
        if k in (1, 2):
            assert abs(got) <= 1e-14, f"log Gamma({k}) should vanish, got {got}"
        else:
            assert abs(got - exact) <= REL * abs(exact), (
                f"log Gamma({k}) = {got!r} vs factorial oracle {exact!r}")


def test_half_integer_oracle():
    for k in range(0, 171):
        exact = _half_integer_log_gamma(k)
        got = log_gamma(k + 0.5)
        assert abs(got - exact) <= REL * max(1.0, abs(exact)), (
            f"log Gamma({k}+1/2) = {got!r} vs closed form {exact!r}")


def test_agrees_with_math_lgamma():
    # independent implementation; allow a little slack for its own error
    grid = np.concatenate([
        np.geomspace(1e-3, 1e12, 97),
        np.array([0.5, 1.0 + 1e-9, 2.0 - 1e-9, 2.0 + 1e-9, 7.25, 33.125]),
    ])
    for x in grid:
        got = log_gamma(float(x))
        ref = math.lgamma(float(x))
        assert abs(got - ref) <= 2e-13 * (1.0 + abs(ref)), (
            f"log_gamma({x}) = {got!r} disagrees with math.lgamma {ref!r}")


def test_vectorized_matches_scalar():
    xs = np.array([0.25, 1.0, 2.5, 10.0, 1e4])
    vec = log_gamma(xs)
    assert vec.shape == xs.shape
    for x, v in zip(xs, vec):
        assert v == log_gamma(float(x))


def test_gamma_ratio_exact_cases():
    # Gamma(a+1)/Gamma(a) = a; exponentiating the log difference turns the
    # ~1e-15 log-scale error into |log Gamma| * 1e-15 relative error here
    for a in (0.5, 1.0, 3.25, 40.0, 123.5):
        tol = 4e-15 * (1.0 + abs(math.lgamma(a + 1.0)) + abs(math.lgamma(a)))
        assert abs(gamma_ratio(a + 1.0, a) - a) <= tol * a
    # Gamma(5)/Gamma(3) = 24/2
    assert abs(gamma_ratio(5.0, 3.0) - 12.0) <= 1e-12
    # ratio at arguments whose Gammas overflow a double separately
    big = gamma_ratio(400.25, 400.0)
    ref = math.exp(math.lgamma(400.25) - math.lgamma(400.0))
    assert abs(big - ref) <= 1e-11 * ref


def test_rejects_nonpositive_and_nonfinite():
    for bad in (0.0, -1.0, -0.5, math.inf, math.nan):
        with pytest.raises(InvalidInput):
            log_gamma(bad)
    with pytest.raises(InvalidInput):
        log_gamma(np.array([1.0, -2.0]))
