"""Seeded synthetic corpus generator for desk-scale end-to-end runs.

Samples gold tag/morpheme sequences from a generating bigram chain grouped
into Eojeols (one stem morpheme followed by functional endings), then
applies long-distance perturbation rules to the gold tags so that a bigram
tagger alone cannot recover them, and emits a dictionary consistent with
everything generated.  All vocabulary words share one surface length, so
segmentation of the concatenated Eojeol surfaces is unambiguous and the
remaining ambiguity is exactly the tag choice per morpheme.
"""

from __future__ import annotations

import random
import string
from dataclasses import dataclass

from .corpus import GoldCorpus
from .errors import SynthesisError
from .hmm import TaggedEojeol, TaggedSentence
from .lexicon import ConnectivityTable, LexEntry, Lexicon, Morpheme
from .tagset import TagPath, TagsetProjection


@dataclass(frozen=True)
class PerturbationRule:
    """Context-conditioned override applied to generated gold tags.

    At the last morpheme of each Eojeol e: when the first morpheme of
    Eojeol e+trigger_offset carries ``trigger_tag`` (in the unperturbed
    tags), and the site's own tag is ``only_if_tag`` (when set), the site's
    gold tag becomes ``new_tag``.
    """

    trigger_tag: str
    new_tag: str
    trigger_offset: int = 1
    only_if_tag: str | None = None

    def __post_init__(self):
        if self.trigger_offset < 1:
            raise SynthesisError("trigger_offset must be >= 1")


@dataclass(frozen=True)
class SynthSpec:
    """Knobs for the generator; identical specs yield identical corpora."""

    n_tags: int = 8
    n_ending_tags: int = 2
    vocab_size: int = 60
    ending_vocab: int = 8
    ambiguity_rate: float = 0.3
    secondary_share: float = 0.08
    seed: int = 0
    n_sentences: int = 200
    eojeols_per_sentence: tuple[int, int] = (3, 6)
    morphemes_per_eojeol: tuple[int, int] = (2, 3)
    word_length: int = 3
    transition_weights: tuple[tuple[str, str, float], ...] | None = None
    perturbations: tuple[PerturbationRule, ...] = ()


@dataclass(frozen=True)
class SynthResult:
    corpus: GoldCorpus
    lexicon: Lexicon
    projection: TagsetProjection
    perturbed_sites: tuple[tuple[int, int, int, str, str], ...]
    morpheme_count: int

    @property
    def perturbed_fraction(self) -> float:
        return len(self.perturbed_sites) / self.morpheme_count


def synth_tag_labels(spec: SynthSpec) -> tuple[str, ...]:
    return tuple(f"T{i}" for i in range(spec.n_tags))


def make_identity_projection(labels) -> TagsetProjection:
    """One rule per label mapping the single-segment path onto itself."""
    rules = tuple((TagPath((label,)), label) for label in labels)
    return TagsetProjection(rules, "XX")


def _word_surfaces(count: int, length: int):
    letters = string.ascii_lowercase
    if count > len(letters) ** length:
        raise SynthesisError(
            f"vocab_size {count} exceeds {length}-letter surface space")
    words = []
    for i in range(count):
        chars = []
        x = i
        for _ in range(length):
            chars.append(letters[x % 26])
            x //= 26
        words.append("".join(reversed(chars)))
    return words


def _validate(spec: SynthSpec, labels):
    if spec.n_tags < 2 or not 1 <= spec.n_ending_tags < spec.n_tags:
        raise SynthesisError("need at least one ending tag and one body tag")
    if spec.ending_vocab < spec.n_ending_tags:
        raise SynthesisError("ending_vocab smaller than the number of ending tags")
    if spec.vocab_size - spec.ending_vocab < spec.n_tags - spec.n_ending_tags:
        raise SynthesisError("body vocabulary smaller than the number of body tags")
    if not 0.0 <= spec.ambiguity_rate < 1.0:
        raise SynthesisError("ambiguity_rate must be in [0, 1)")
    if not 0.0 <= spec.secondary_share < 1.0:
        raise SynthesisError("secondary_share must be in [0, 1)")
    if spec.n_sentences < 1:
        raise SynthesisError("n_sentences must be >= 1")
    lo, hi = spec.eojeols_per_sentence
    if not 1 <= lo <= hi:
        raise SynthesisError("bad eojeols_per_sentence range")
    lo, hi = spec.morphemes_per_eojeol
    if not 1 <= lo <= hi:
        raise SynthesisError("bad morphemes_per_eojeol range")
    known = set(labels)
    for rule in spec.perturbations:
        for tag in (rule.trigger_tag, rule.new_tag, rule.only_if_tag):
            if tag is not None and tag not in known:
                raise SynthesisError(f"perturbation references unknown tag {tag!r}")
    if spec.transition_weights is not None:
        for row, col, w in spec.transition_weights:
            if row != "BOS" and row not in known:
                raise SynthesisError(f"transition weight from unknown tag {row!r}")
            if col not in known:
                raise SynthesisError(f"transition weight to unknown tag {col!r}")
            if w <= 0.0:
                raise SynthesisError("transition weights must be positive")


def generate_synthetic(spec: SynthSpec) -> SynthResult:
    labels = synth_tag_labels(spec)
    _validate(spec, labels)
    rng = random.Random(spec.seed)

    body_tags = labels[: spec.n_tags - spec.n_ending_tags]
    ending_tags = labels[spec.n_tags - spec.n_ending_tags:]
    words = _word_surfaces(spec.vocab_size, spec.word_length)
    body_words = words[: spec.vocab_size - spec.ending_vocab]
    ending_words = words[spec.vocab_size - spec.ending_vocab:]

    primary: dict[str, str] = {}
    for i, w in enumerate(body_words):
        primary[w] = body_tags[i % len(body_tags)]
    for i, w in enumerate(ending_words):
        primary[w] = ending_tags[i % len(ending_tags)]

    secondary: dict[str, str] = {}
    for w in words:
        group = ending_tags if w in ending_words else body_tags
        if len(group) > 1 and rng.random() < spec.ambiguity_rate:
            choices = [t for t in group if t != primary[w]]
            secondary[w] = choices[rng.randrange(len(choices))]

    primary_of: dict[str, list[str]] = {t: [] for t in labels}
    secondary_of: dict[str, list[str]] = {t: [] for t in labels}
    for w in words:
        primary_of[primary[w]].append(w)
        if w in secondary:
            secondary_of[secondary[w]].append(w)

    explicit = {}
    if spec.transition_weights is not None:
        explicit = {(r, c): w for r, c, w in spec.transition_weights}
    weights: dict[str, dict[str, float]] = {}
    for row in ("BOS",) + labels:
        weights[row] = {}
        for col in labels:
            if spec.transition_weights is not None:
                weights[row][col] = explicit.get((row, col), 1.0)
            else:
                weights[row][col] = 0.05 + rng.random() ** 3

    def sample_tag(prev: str, group) -> str:
        pool = [t for t in group if primary_of[t]]
        if not pool:
            raise SynthesisError("a tag group has no vocabulary")
        w = [weights[prev][t] for t in pool]
        return rng.choices(pool, weights=w)[0]

    def sample_word(tag: str) -> str:
        sec = secondary_of[tag]
        if sec and rng.random() < spec.secondary_share:
            return sec[rng.randrange(len(sec))]
        pool = primary_of[tag]
        return pool[rng.randrange(len(pool))]

    sentences = []
    for _ in range(spec.n_sentences):
        n_eojeols = rng.randint(*spec.eojeols_per_sentence)
        prev = "BOS"
        sentence = []
        for _ in range(n_eojeols):
            n_morphs = rng.randint(*spec.morphemes_per_eojeol)
            eojeol = []
            for mi in range(n_morphs):
                group = body_tags if mi == 0 else ending_tags
                tag = sample_tag(prev, group)
                eojeol.append([sample_word(tag), tag])
                prev = tag
            sentence.append(eojeol)
        sentences.append(sentence)

    perturbed = []
    for si, sentence in enumerate(sentences):
        original = [[m[1] for m in eojeol] for eojeol in sentence]
        for rule in spec.perturbations:
            for e in range(len(sentence) - rule.trigger_offset):
                if original[e + rule.trigger_offset][0] != rule.trigger_tag:
                    continue
                if rule.only_if_tag is not None and original[e][-1] != rule.only_if_tag:
                    continue
                sentence[e][-1][1] = rule.new_tag
        for e, eojeol in enumerate(sentence):
            for m, (word, tag) in enumerate(eojeol):
                if tag != original[e][m]:
                    perturbed.append((si, e, m, original[e][m], tag))

    triples = set()
    for sentence in sentences:
        for eojeol in sentence:
            for word, tag in eojeol:
                triples.add((word, tag))
                triples.add((word, primary[word]))
                if word in secondary:
                    triples.add((word, secondary[word]))
    entries = [
        LexEntry(word, word, TagPath((tag,)))
        for word, tag in sorted(triples)
    ]
    lexicon = Lexicon(entries, ConnectivityTable.allow_all())

    gold_sentences = []
    n_morphemes = 0
    for sentence in sentences:
        eojeols = []
        for eojeol in sentence:
            surface = "".join(word for word, _ in eojeol)
            pairs = tuple(
                (Morpheme(word, word, TagPath((tag,)), tag), tag)
                for word, tag in eojeol
            )
            n_morphemes += len(pairs)
            eojeols.append(TaggedEojeol(surface, pairs))
        gold_sentences.append(TaggedSentence(tuple(eojeols)))

    return SynthResult(
        corpus=GoldCorpus(tuple(gold_sentences)),
        lexicon=lexicon,
        projection=make_identity_projection(labels),
        perturbed_sites=tuple(perturbed),
        morpheme_count=n_morphemes,
    )
