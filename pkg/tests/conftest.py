import pytest

from authorid.minting import MintPolicy
from authorid.store import export_corpus

from synth import three_paper_author_store


@pytest.fixture
def policy():
    return MintPolicy(base_url="http://arxiv.org")


@pytest.fixture
def lee_store():
    return three_paper_author_store()


@pytest.fixture
def lee_data_dir(tmp_path, lee_store):
    data = tmp_path / "data"
    export_corpus(lee_store.snapshot(), data)
    return data
