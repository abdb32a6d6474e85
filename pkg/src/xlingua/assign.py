"""Map a normalized document to its top-K scored descriptors."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from xlingua.errors import ValidationError
from xlingua.kernels import csr_cosine_scores
from xlingua.normalize import NormalizedDocument
from xlingua.profiles import ProfileSet

DEFAULT_TOP_K = 100


@dataclass(frozen=True)
class DescriptorVector:
    """Sparse top-K descriptor representation of one document."""

    doc_id: str
    lang: str
    entries: dict[int, float] = field(default_factory=dict)

    def ranked(self) -> list[tuple[int, float]]:
        """Entries sorted by descending score, ties by ascending code."""
        return sorted(self.entries.items(), key=lambda cs: (-cs[1], cs[0]))

    def norm(self) -> float:
        return math.sqrt(sum(s * s for s in self.entries.values()))

    def __len__(self) -> int:
        return len(self.entries)


def assign(doc: NormalizedDocument, profiles: ProfileSet, k: int = DEFAULT_TOP_K) -> DescriptorVector:
    """Score the document against every profile and keep the k best.

    The score per descriptor is the cosine between the document's lemma
    frequencies and the profile's associate weights over the union of
    their lemma keys.  An empty document yields an empty vector.
    """
    if k < 1:
        raise ValidationError("k must be >= 1")
    if doc.lang != profiles.lang:
        raise ValidationError(
            f"document {doc.id}: language {doc.lang!r} does not match profiles {profiles.lang!r}"
        )
    if not doc.lemma_freq:
        return DescriptorVector(doc_id=doc.id, lang=doc.lang, entries={})

    codes, vocab, indptr, indices, data, norms = profiles.csr()
    query = np.zeros(len(vocab), dtype=np.float64)
    for lemma, cnt in doc.lemma_freq.items():
        idx = vocab.get(lemma)
        if idx is not None:
            query[idx] = cnt
    # union semantics: the query norm covers all document lemmas, in or
    # out of the profile vocabulary
    query_norm = math.sqrt(sum(c * c for c in doc.lemma_freq.values()))
    scores = csr_cosine_scores(indptr, indices, data, norms, query, query_norm)

    scored = [
        (min(float(s), 1.0), code) for s, code in zip(scores, codes) if s > 0.0
    ]
    scored.sort(key=lambda sc: (-sc[0], sc[1]))
    entries = {code: s for s, code in scored[:k]}
    return DescriptorVector(doc_id=doc.id, lang=doc.lang, entries=entries)
