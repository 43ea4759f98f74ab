import pytest

from retrofitkit.pipeline import run_pipeline


@pytest.fixture(scope="session")
def small_store():
    """Sixty surrogate-simulated buildings, shared read-only across tests."""
    return run_pipeline(60, seed=0)


@pytest.fixture(scope="session")
def small_corpus(small_store, tmp_path_factory):
    """Corpus over the small store; 20 eval buildings, masking enabled."""
    from retrofitkit.corpus import MaskPolicy, build_corpus

    out = tmp_path_factory.mktemp("corpus")
    manifest = build_corpus(
        small_store, out, holdout=20, seed=0, mask_policy=MaskPolicy(seed=0)
    )
    return out, manifest
