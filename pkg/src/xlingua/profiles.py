"""Associate-profile training: one ranked weighted lemma list per descriptor.

For every descriptor, lemma frequencies in the subset of training
documents manually indexed with it are compared against the whole corpus
with Dunning's log-likelihood ratio; surviving candidates are weighted by
G2 x IDF and the top entries kept.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from xlingua.errors import ParseError, ValidationError
from xlingua.kernels import g2_batch
from xlingua.normalize import NormalizedDocument
from xlingua.thesaurus import Thesaurus

IDF_LOG_N_OVER_DF = "log_n_over_df"
IDF_LOG_N_OVER_DF_PLUS_ONE = "log_n_over_df_plus_one"
_IDF_VARIANTS = (IDF_LOG_N_OVER_DF, IDF_LOG_N_OVER_DF_PLUS_ONE)


@dataclass(frozen=True)
class ContingencyTable:
    """Token counts of one lemma inside/outside a descriptor's subset.

    k11: lemma tokens in the subset; k12: other tokens in the subset;
    k21: lemma tokens outside; k22: other tokens outside.
    """

    k11: int
    k12: int
    k21: int
    k22: int

    def __post_init__(self) -> None:
        for name in ("k11", "k12", "k21", "k22"):
            v = getattr(self, name)
            if v < 0:
                raise ValidationError(f"contingency cell {name} negative: {v}")


@dataclass(frozen=True)
class TrainingConfig:
    min_doc_freq: int = 2
    g2_threshold: float = 3.84  # chi-square(1) at 95%
    max_associates: int = 300
    idf_variant: str = IDF_LOG_N_OVER_DF_PLUS_ONE

    def __post_init__(self) -> None:
        if self.min_doc_freq < 1:
            raise ValidationError("min_doc_freq must be >= 1")
        if self.g2_threshold < 0:
            raise ValidationError("g2_threshold must be >= 0")
        if self.max_associates < 1:
            raise ValidationError("max_associates must be >= 1")
        if self.idf_variant not in _IDF_VARIANTS:
            raise ValidationError(f"unknown idf_variant {self.idf_variant!r}")


@dataclass(frozen=True)
class AssociateProfile:
    descriptor: int
    lang: str
    associates: tuple[tuple[str, float], ...]
    norm: float

    @staticmethod
    def from_associates(descriptor, lang, associates) -> "AssociateProfile":
        associates = tuple((lemma, float(w)) for lemma, w in associates)
        norm = math.sqrt(sum(w * w for _, w in associates))
        return AssociateProfile(descriptor, lang, associates, norm)


@dataclass
class ProfileSet:
    lang: str
    profiles: dict[int, AssociateProfile]
    n_docs: int
    doc_freq: dict[str, int] = field(default_factory=dict)
    config: TrainingConfig | None = None
    _csr_cache: tuple | None = field(default=None, repr=False, compare=False)

    def csr(self) -> tuple:
        """CSR view of all profiles (lemma vocab, arrays, code order).

        Built once on first use; the set is otherwise immutable.
        """
        if self._csr_cache is None:
            codes = sorted(self.profiles)
            vocab: dict[str, int] = {}
            indptr = [0]
            indices: list[int] = []
            data: list[float] = []
            norms: list[float] = []
            for code in codes:
                p = self.profiles[code]
                for lemma, w in p.associates:
                    indices.append(vocab.setdefault(lemma, len(vocab)))
                    data.append(w)
                indptr.append(len(indices))
                norms.append(p.norm)
            self._csr_cache = (
                codes,
                vocab,
                np.asarray(indptr, dtype=np.int64),
                np.asarray(indices, dtype=np.int64),
                np.asarray(data, dtype=np.float64),
                np.asarray(norms, dtype=np.float64),
            )
        return self._csr_cache


def log_likelihood(t: ContingencyTable) -> float:
    """Dunning's G2 for one 2x2 table; 0 for degenerate marginals."""
    a, b, c, d = float(t.k11), float(t.k12), float(t.k21), float(t.k22)
    n = a + b + c + d
    r1, r2, c1, c2 = a + b, c + d, a + c, b + d
    if r1 <= 0 or r2 <= 0 or c1 <= 0 or c2 <= 0:
        return 0.0
    g = 0.0
    for o, r, col in ((a, r1, c1), (b, r1, c2), (c, r2, c1), (d, r2, c2)):
        if o > 0:
            g += o * math.log(o * n / (r * col))
    return max(2.0 * g, 0.0)


def idf(df: int, n_docs: int, variant: str = IDF_LOG_N_OVER_DF_PLUS_ONE) -> float:
    """Inverse document frequency under the chosen variant."""
    if variant == IDF_LOG_N_OVER_DF:
        if df < 1:
            raise ValidationError("df must be >= 1 for log_n_over_df")
        return math.log(n_docs / df)
    if variant == IDF_LOG_N_OVER_DF_PLUS_ONE:
        return math.log(n_docs / (df + 1)) + 1.0
    raise ValidationError(f"unknown idf_variant {variant!r}")


def build_contingency(
    lemma: str, descriptor: int, corpus: Iterable[NormalizedDocument]
) -> ContingencyTable:
    """Token-level contingency of one lemma against one descriptor subset."""
    corpus = list(corpus)
    if not corpus:
        raise ValidationError("empty corpus")
    in_lemma = in_other = out_lemma = out_other = 0
    subset_seen = False
    for doc in corpus:
        total = sum(doc.lemma_freq.values())
        cnt = doc.lemma_freq.get(lemma, 0)
        in_subset = doc.manual_descriptors is not None and descriptor in doc.manual_descriptors
        if in_subset:
            subset_seen = True
            in_lemma += cnt
            in_other += total - cnt
        else:
            out_lemma += cnt
            out_other += total - cnt
    if not subset_seen:
        raise ValidationError(f"descriptor {descriptor}: no training document carries it")
    return ContingencyTable(in_lemma, in_other, out_lemma, out_other)


def train_profiles(
    corpus: Iterable[NormalizedDocument],
    thesaurus: Thesaurus,
    config: TrainingConfig | None = None,
) -> ProfileSet:
    """Train one profile per descriptor that has training documents.

    Candidate lemmas must occur in at least ``min_doc_freq`` subset
    documents, be positively associated (subset rate above global rate)
    and clear ``g2_threshold``; weight is G2 x IDF, top ``max_associates``
    kept, ties broken lexicographically.
    """
    config = config or TrainingConfig()
    docs = list(corpus)
    if not docs:
        raise ValidationError("empty training corpus")
    langs = {d.lang for d in docs}
    if len(langs) != 1:
        raise ValidationError(f"training corpus mixes languages: {sorted(langs)}")
    lang = docs[0].lang

    vocab: dict[str, int] = {}
    doc_freq: dict[str, int] = {}
    global_counts: dict[str, int] = {}
    doc_totals: list[int] = []
    for doc in docs:
        doc_totals.append(sum(doc.lemma_freq.values()))
        for lemma, cnt in doc.lemma_freq.items():
            vocab.setdefault(lemma, len(vocab))
            doc_freq[lemma] = doc_freq.get(lemma, 0) + 1
            global_counts[lemma] = global_counts.get(lemma, 0) + cnt
    grand_total = sum(doc_totals)
    n_docs = len(docs)

    by_descriptor: dict[int, list[int]] = {}
    for i, doc in enumerate(docs):
        for code in doc.manual_descriptors or ():
            by_descriptor.setdefault(code, []).append(i)

    profiles: dict[int, AssociateProfile] = {}
    for code in sorted(thesaurus.descriptors):
        doc_idxs = by_descriptor.get(code)
        if not doc_idxs:
            continue
        subset_counts: dict[str, int] = {}
        subset_df: dict[str, int] = {}
        subset_total = 0
        for i in doc_idxs:
            subset_total += doc_totals[i]
            for lemma, cnt in docs[i].lemma_freq.items():
                subset_counts[lemma] = subset_counts.get(lemma, 0) + cnt
                subset_df[lemma] = subset_df.get(lemma, 0) + 1
        candidates = sorted(
            lemma for lemma, df in subset_df.items() if df >= config.min_doc_freq
        )
        if not candidates:
            continue
        k11 = np.array([subset_counts[lm] for lm in candidates], dtype=np.float64)
        k12 = subset_total - k11
        k21 = np.array([global_counts[lm] for lm in candidates], dtype=np.float64) - k11
        k22 = (grand_total - subset_total) - k21
        g2 = g2_batch(k11, k12, k21, k22)
        # positive association: subset rate strictly above the global rate
        positive = k11 * grand_total > (k11 + k21) * subset_total
        keep = (g2 >= config.g2_threshold) & positive
        scored = [
            (
                g2[i] * idf(doc_freq[candidates[i]], n_docs, config.idf_variant),
                candidates[i],
            )
            for i in np.nonzero(keep)[0]
        ]
        scored = [(w, lm) for w, lm in scored if w > 0]
        if not scored:
            continue
        scored.sort(key=lambda wl: (-wl[0], wl[1]))
        associates = [(lm, w) for w, lm in scored[: config.max_associates]]
        profiles[code] = AssociateProfile.from_associates(code, lang, associates)

    if not profiles:
        raise ValidationError("no descriptor has any training document with surviving associates")
    return ProfileSet(lang=lang, profiles=profiles, n_docs=n_docs, doc_freq=doc_freq, config=config)


def save_profiles(ps: ProfileSet, path: str) -> None:
    """Write a profile set; descriptors ascending, weights at 6 decimals."""
    lines = [f"PROFILESET {ps.lang} {ps.n_docs}"]
    for code in sorted(ps.profiles):
        lines.append(f"P {code}")
        for lemma, w in ps.profiles[code].associates:
            lines.append(f"A {lemma} {w:.6f}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def load_profiles(path: str) -> ProfileSet:
    """Load a profile set; norms are recomputed from the stored weights."""
    lang: str | None = None
    n_docs = 0
    profiles: dict[int, AssociateProfile] = {}
    current_code: int | None = None
    current: list[tuple[str, float]] = []

    def flush() -> None:
        nonlocal current_code, current
        if current_code is not None:
            profiles[current_code] = AssociateProfile.from_associates(
                current_code, lang, current
            )
        current_code, current = None, []

    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split()
            try:
                if parts[0] == "PROFILESET":
                    lang, n_docs = parts[1], int(parts[2])
                elif parts[0] == "P":
                    if lang is None:
                        raise ParseError(f"{path}:{lineno}: P before PROFILESET header")
                    flush()
                    current_code = int(parts[1])
                elif parts[0] == "A":
                    if current_code is None:
                        raise ParseError(f"{path}:{lineno}: A outside a profile")
                    current.append((parts[1], float(parts[2])))
                else:
                    raise ParseError(f"{path}:{lineno}: unknown tag {parts[0]!r}")
            except (ValueError, IndexError) as exc:
                raise ParseError(f"{path}:{lineno}: malformed line {line!r}") from exc
    if lang is None:
        raise ParseError(f"{path}: missing PROFILESET header")
    flush()
    return ProfileSet(lang=lang, profiles=profiles, n_docs=n_docs)
