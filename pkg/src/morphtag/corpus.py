"""Tagged-corpus files, train/test splitting, and evaluation.

Corpus file format: sentences separated by blank lines, one Eojeol per
line as ``<surface><TAB><lemma>/<TAG>( + <lemma>/<TAG>)*``.  Accuracy is
(tagged - incorrect) / tagged, kept as exact rational arithmetic until
display, which rounds to one decimal percent.
"""

from __future__ import annotations

import io
import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import CorpusError, EvaluationError
from .hmm import TaggedEojeol, TaggedSentence
from .lexicon import Lexicon, Morpheme
from .tagset import TagPath, TagsetProjection


@dataclass(frozen=True)
class GoldCorpus:
    """A list of gold-tagged sentences with Eojeol boundaries."""

    sentences: tuple[TaggedSentence, ...]

    def __len__(self):
        return len(self.sentences)

    def morpheme_count(self) -> int:
        return sum(s.morpheme_count() for s in self.sentences)


def _parse_eojeol_line(line, src, line_no, labels):
    fields = line.split("\t")
    if len(fields) != 2:
        raise CorpusError(
            f"expected '<surface><TAB><analysis>', got {line!r}",
            path=src, line_no=line_no,
        )
    surface, analysis = fields
    if not surface:
        raise CorpusError("empty eojeol surface", path=src, line_no=line_no)
    pairs = []
    for chunk in analysis.split(" + "):
        lemma, sep, tag = chunk.rpartition("/")
        if not sep or not lemma or not tag:
            raise CorpusError(f"bad morpheme {chunk!r}", path=src, line_no=line_no)
        if labels is not None and tag not in labels:
            raise CorpusError(
                f"tag {tag!r} not in the active projection inventory",
                path=src, line_no=line_no,
            )
        morpheme = Morpheme(lemma, lemma, TagPath((tag,)), tag)
        pairs.append((morpheme, tag))
    return TaggedEojeol(surface, tuple(pairs))


def read_corpus(path, projection: TagsetProjection | None = None) -> GoldCorpus:
    """Parse a corpus file, optionally validating tags against a projection."""
    labels = set(projection.label_inventory()) if projection is not None else None
    sentences = []
    current: list[TaggedEojeol] = []
    src = str(path)
    with io.open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                if current:
                    sentences.append(TaggedSentence(tuple(current)))
                    current = []
                continue
            current.append(_parse_eojeol_line(line, src, line_no, labels))
    if current:
        sentences.append(TaggedSentence(tuple(current)))
    return GoldCorpus(tuple(sentences))


def format_sentence(sentence: TaggedSentence) -> str:
    lines = []
    for eojeol in sentence.eojeols:
        analysis = " + ".join(f"{m.lemma}/{t}" for m, t in eojeol.pairs)
        lines.append(f"{eojeol.surface}\t{analysis}")
    return "\n".join(lines)


def write_corpus(corpus, path) -> None:
    sentences = corpus.sentences if isinstance(corpus, GoldCorpus) else corpus
    with io.open(path, "w", encoding="utf-8") as fh:
        fh.write(corpus_to_text(sentences))


def corpus_to_text(sentences) -> str:
    return "\n\n".join(format_sentence(s) for s in sentences) + "\n"


def split_corpus(corpus: GoldCorpus, fractions, seed: int):
    """Deterministic seeded split at sentence granularity.

    ``fractions`` are three positive numbers summing to 1; sizes use the
    largest-remainder method and every split gets at least one sentence.
    """
    f = tuple(fractions)
    if len(f) != 3 or any(x <= 0 for x in f):
        raise ValueError("fractions must be three positive numbers")
    if abs(sum(f) - 1.0) > 1e-9:
        raise ValueError(f"fractions must sum to 1, got {sum(f)!r}")
    n = len(corpus.sentences)
    if n < 3:
        raise ValueError(f"corpus has {n} sentences; need at least 3 to split")

    targets = [n * x for x in f]
    sizes = [int(t) for t in targets]
    remainders = sorted(
        range(3), key=lambda i: (targets[i] - sizes[i], -i), reverse=True)
    for i in range(n - sum(sizes)):
        sizes[remainders[i % 3]] += 1
    if any(s < 1 for s in sizes):
        raise ValueError(f"split sizes {sizes} leave an empty part")

    order = list(range(n))
    random.Random(seed).shuffle(order)
    out = []
    start = 0
    for size in sizes:
        chosen = sorted(order[start:start + size])
        out.append(GoldCorpus(tuple(corpus.sentences[i] for i in chosen)))
        start += size
    return tuple(out)


@dataclass(frozen=True)
class EvalReport:
    """Counts and exact-rational accuracies for one system/gold comparison."""

    tagged_count: int
    incorrect_count: int
    ambiguous_count: int
    ambiguous_incorrect_count: int
    mismatched_sentences: int

    @property
    def accuracy(self) -> Fraction:
        return Fraction(self.tagged_count - self.incorrect_count, self.tagged_count)

    @property
    def ambiguous_accuracy(self) -> Fraction | None:
        if self.ambiguous_count == 0:
            return None
        return Fraction(self.ambiguous_count - self.ambiguous_incorrect_count,
                        self.ambiguous_count)


def percent(value: Fraction | None) -> str:
    """One-decimal percent display, e.g. Fraction(183, 200) -> '91.5'."""
    if value is None:
        return "-"
    return f"{float(value * 100):.1f}"


def format_report_header() -> str:
    return "corpus | no. morph. | no. ambig. morph. | HMM alone | two-phase"


def format_report_row(label: str, final: EvalReport,
                      baseline: EvalReport | None = None) -> str:
    first = percent(baseline.accuracy) if baseline is not None else "-"
    return (f"{label} | {final.tagged_count} | {final.ambiguous_count} | "
            f"{first} | {percent(final.accuracy)}")


def _lemmas(sentence: TaggedSentence):
    return [[m.lemma for m, _ in e.pairs] for e in sentence.eojeols]


def evaluate(system, gold: GoldCorpus, lex: Lexicon,
             projection: TagsetProjection | None = None) -> EvalReport:
    """Morpheme-level accuracy of ``system`` against ``gold``.

    A sentence whose segmentation differs from gold counts every gold
    morpheme as incorrect and is tallied in ``mismatched_sentences``.
    A morpheme is ambiguous when the dictionary lists more than one tag
    for its surface (projected tags when a projection is given).
    """
    system = list(system)
    if len(system) != len(gold.sentences):
        raise EvaluationError(
            f"sentence count mismatch: system {len(system)} vs gold {len(gold.sentences)}")
    tagged = incorrect = ambiguous = ambiguous_incorrect = mismatched = 0
    for sys_s, gold_s in zip(system, gold.sentences):
        mismatch = _lemmas(sys_s) != _lemmas(gold_s)
        if mismatch:
            mismatched += 1
        sys_positions = list(sys_s.positions())
        for i, (_, _, morpheme, gold_tag) in enumerate(gold_s.positions()):
            tagged += 1
            is_ambiguous = lex.surface_tag_arity(morpheme.surface, projection) > 1
            if is_ambiguous:
                ambiguous += 1
            wrong = mismatch or sys_positions[i][3] != gold_tag
            if wrong:
                incorrect += 1
                if is_ambiguous:
                    ambiguous_incorrect += 1
    return EvalReport(tagged, incorrect, ambiguous, ambiguous_incorrect, mismatched)
