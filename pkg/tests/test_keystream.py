import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import chi2

from qwcrypt.errors import DomainError, KeyParamError
from qwcrypt.keystream import KeyParams, generate, keystream_length, logistic_next

KEY = KeyParams(0.31, 3.99, 1000)


def test_logistic_next_values():
    assert logistic_next(0.5, 4.0) == 1.0
    assert logistic_next(logistic_next(0.5, 4.0), 4.0) == 0.0
    assert logistic_next(0.3, 3.99) == pytest.approx(0.8379, abs=1e-12)
    assert logistic_next(0.0, 3.7) == 0.0


@pytest.mark.parametrize("x", [-0.1, 1.0000001, float("nan")])
def test_logistic_domain(x):
    with pytest.raises(DomainError):
        logistic_next(x, 3.99)


@pytest.mark.parametrize("kw", [
    {"x0": 0.0}, {"x0": 1.0}, {"x0": 1.5}, {"x0": 0.3, "mu": 3.57},
    {"x0": 0.3, "mu": 4.01}, {"x0": 0.3, "burn_in": -1}, {"x0": 0.3, "burn_in": 1.5},
])
def test_key_param_bounds(kw):
    with pytest.raises(KeyParamError):
        KeyParams(**kw)


def test_defaults():
    assert KeyParams(0.2) == KeyParams(0.2, 3.99, 1000)


def test_matches_hand_iteration():
    x = 0.31
    for _ in range(1000):
        x = 3.99 * x * (1 - x)
    expected = []
    for _ in range(16):
        x = 3.99 * x * (1 - x)
        expected.append(int(x * 2**24) % 256)
    assert list(generate(KEY, 16)) == expected


def test_golden_prefix():
    # frozen output; the keystream is part of the cipher file contract
    assert generate(KEY, 16).hex() == "78704dc969ec49de752c2acfa976e8f6"


def test_empty_and_deterministic():
    assert generate(KEY, 0) == b""
    assert generate(KEY, 4096) == generate(KeyParams(0.31, 3.99, 1000), 4096)


def test_negative_length():
    with pytest.raises(KeyParamError):
        generate(KEY, -1)


def test_length_contract():
    assert keystream_length(512, 512) == 65536
    assert keystream_length(16, 8) == 32


def test_chi_square_uniformity():
    data = np.frombuffer(generate(KEY, 65536), dtype=np.uint8)
    counts = np.bincount(data, minlength=256)
    expected = len(data) / 256
    stat = float(np.sum((counts - expected) ** 2 / expected))
    assert chi2.ppf(0.999, 255) == pytest.approx(330.5, abs=0.1)
    assert stat < chi2.ppf(0.999, 255)


def test_sensitivity_to_seed():
    a = np.frombuffer(generate(KEY, 65536), dtype=np.uint8)
    b = np.frombuffer(generate(KeyParams(0.31 + 1e-10, 3.99, 1000), 65536), dtype=np.uint8)
    assert np.unpackbits(a ^ b).mean() >= 0.45


@settings(max_examples=30, deadline=None)
@given(st.floats(0.01, 0.99), st.floats(3.6, 4.0), st.integers(0, 50),
       st.integers(0, 300), st.integers(0, 300))
def test_prefix_property(x0, mu, burn, m, n):
    key = KeyParams(x0, mu, burn)
    m, n = min(m, n), max(m, n)
    assert generate(key, n)[:m] == generate(key, m)
