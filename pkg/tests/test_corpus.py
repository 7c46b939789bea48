import pytest

from config import LabConfig
from cremona.corpus import CORPUS, entry_names, run_entry

SMALL = LabConfig(workers=2, corpus_word_length=6, rho_word_length=4, newton_level=2)


def test_registry_is_sorted():
    names = entry_names()
    assert names == sorted(CORPUS)
    assert {"a1_a2_rho", "contraction", "freegroup_sl2", "xi_homomorphism"} <= set(names)


@pytest.mark.parametrize("name", entry_names())
def test_entry_passes(name):
    payload = run_entry(name, SMALL)
    assert payload["passed"] is True, payload
