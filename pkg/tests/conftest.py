import pytest

from oblivstore import MemoryBackend, OramConfig, SecretKey


@pytest.fixture
def key():
    return SecretKey.generate()


@pytest.fixture
def small_config():
    """1 KB segments keep block-level tests fast."""
    return OramConfig(segment_size=1024, rng_seed=1234)


@pytest.fixture
def backend():
    return MemoryBackend()
