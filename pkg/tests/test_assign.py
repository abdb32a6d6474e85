import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xlingua.assign import assign
from xlingua.errors import ValidationError
from xlingua.normalize import NormalizedDocument
from xlingua.profiles import AssociateProfile, ProfileSet


def make_profiles():
    profiles = {
        1: AssociateProfile.from_associates(1, "en", [("fish", 5.0), ("net", 2.0)]),
        2: AssociateProfile.from_associates(2, "en", [("steel", 4.0), ("furnace", 3.0)]),
        3: AssociateProfile.from_associates(3, "en", [("fish", 1.0), ("market", 4.0)]),
    }
    return ProfileSet(lang="en", profiles=profiles, n_docs=10)


def doc(**lemmas):
    return NormalizedDocument(
        id="q", lang="en", lemma_freq=dict(lemmas),
        char_length=50, token_count=sum(lemmas.values()),
    )


def test_scores_positive_bounded_and_ranked():
    vec = assign(doc(fish=3, net=1, market=1), make_profiles())
    assert vec.entries
    for code, score in vec.entries.items():
        assert 0.0 < score <= 1.0
    ranked = vec.ranked()
    scores = [s for _, s in ranked]
    assert scores == sorted(scores, reverse=True)
    assert ranked[0][0] == 1  # fish+net dominate


def test_unmatched_document_gets_empty_vector():
    vec = assign(doc(zebra=4), make_profiles())
    assert len(vec) == 0


def test_empty_document_gets_empty_vector():
    vec = assign(doc(), make_profiles())
    assert len(vec) == 0


def test_language_mismatch_rejected():
    bad = NormalizedDocument(id="q", lang="es", lemma_freq={"pez": 1},
                             char_length=10, token_count=1)
    with pytest.raises(ValidationError):
        assign(bad, make_profiles())


def test_truncation_is_a_prefix():
    """The top-k vector is exactly the first k entries of the full ranking."""
    full = assign(doc(fish=3, net=1, steel=2, market=2), make_profiles(), k=100)
    short = assign(doc(fish=3, net=1, steel=2, market=2), make_profiles(), k=2)
    assert short.ranked() == full.ranked()[:2]


@given(st.integers(min_value=2, max_value=20))
@settings(deadline=None)
def test_scale_invariance(factor):
    """Multiplying every lemma count by a constant leaves the vector unchanged."""
    base = assign(doc(fish=3, net=1, market=2), make_profiles())
    scaled = assign(doc(fish=3 * factor, net=factor, market=2 * factor), make_profiles())
    assert set(base.entries) == set(scaled.entries)
    for code in base.entries:
        assert scaled.entries[code] == pytest.approx(base.entries[code], abs=1e-12)


def test_tied_scores_break_by_ascending_code():
    profiles = ProfileSet(
        lang="en",
        profiles={
            7: AssociateProfile.from_associates(7, "en", [("alpha", 1.0)]),
            3: AssociateProfile.from_associates(3, "en", [("alpha", 1.0)]),
        },
        n_docs=4,
    )
    ranked = assign(doc(alpha=2), profiles).ranked()
    assert [code for code, _ in ranked] == [3, 7]
