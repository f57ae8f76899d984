"""Bigram tagging model: training, decoding, and lattice selection.

The model scores a tag sequence as the product of bigram tag transitions
and per-tag lexical probabilities, with one sentence-initial pseudo-tag and
no end-of-sentence factor.  Decoding runs in log space; training keeps all
probabilities strictly positive via add-lambda smoothing, with a reserved
mass for morphemes never seen in training.  Emission keys are
``<lemma>/<tag>`` strings, so homographs with different tags are distinct
observation symbols.
"""

from __future__ import annotations

import io
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import DecodeFailure, ModelFormatError, TrainingError
from .kernels import forward_backward_kernel, viterbi_kernel
from .lexicon import Lexicon, Morpheme, SentenceLattice
from .tagset import TagsetProjection

BOS = "<BOS>"
NEG_INF = float("-inf")
DEFAULT_SENTENCE_CAP = 256

_RESERVED_LABELS = {BOS, "TAGS", "TRANS", "EMIT", "CONFIG", "HMM-BIGRAM"}


@dataclass(frozen=True)
class Smoothing:
    """Add-lambda smoothing constants plus the unseen-morpheme reserve.

    ``unk_mass`` is held out of every emission row and split uniformly over
    ``virtual_unseen`` hypothetical unseen morphemes at decode time.
    """

    lambda_trans: float = 0.1
    lambda_emit: float = 0.1
    unk_mass: float = 1e-4
    virtual_unseen: int = 1000

    def __post_init__(self):
        if not 0.0 < self.lambda_trans <= 1.0:
            raise TrainingError(f"lambda_trans must be in (0, 1], got {self.lambda_trans}")
        if not 0.0 < self.lambda_emit <= 1.0:
            raise TrainingError(f"lambda_emit must be in (0, 1], got {self.lambda_emit}")
        if not 0.0 < self.unk_mass < 1.0:
            raise TrainingError(f"unk_mass must be in (0, 1), got {self.unk_mass}")
        if self.virtual_unseen < 1:
            raise TrainingError(f"virtual_unseen must be >= 1, got {self.virtual_unseen}")


@dataclass(frozen=True)
class TaggedEojeol:
    surface: str
    pairs: tuple[tuple[Morpheme, str], ...]


@dataclass(frozen=True)
class TaggedSentence:
    """A tagged morpheme sequence with its Eojeol boundaries preserved."""

    eojeols: tuple[TaggedEojeol, ...]
    score: float = 0.0
    truncated: bool = False
    oov: frozenset = frozenset()

    def morpheme_count(self) -> int:
        return sum(len(e.pairs) for e in self.eojeols)

    def positions(self):
        """Yield (eojeol_index, morpheme_index, morpheme, tag)."""
        for ei, eojeol in enumerate(self.eojeols):
            for mi, (morpheme, tag) in enumerate(eojeol.pairs):
                yield ei, mi, morpheme, tag

    def with_tags(self, tags_per_eojeol) -> "TaggedSentence":
        """Copy with tag fields replaced; structure and morphemes are shared."""
        eojeols = []
        for eojeol, new_tags in zip(self.eojeols, tags_per_eojeol):
            pairs = tuple(
                (m, t) for (m, _), t in zip(eojeol.pairs, new_tags)
            )
            eojeols.append(TaggedEojeol(eojeol.surface, pairs))
        return TaggedSentence(tuple(eojeols), self.score, self.truncated, self.oov)


class HmmModel:
    """Tag inventory, transition matrix, and per-tag emission tables.

    The inventory starts with the sentence-initial pseudo-tag; transition
    rows are indexed by real tags 0..K-1 with the pseudo-tag as row K.
    """

    def __init__(self, tags, trans, emits, smoothing: Smoothing,
                 open_class_tags=None):
        tags = tuple(tags)
        if not tags or tags[0] != BOS:
            raise ModelFormatError(f"tag inventory must start with {BOS}")
        if len(set(tags)) != len(tags):
            raise ModelFormatError("duplicate tags in inventory")
        if len(tags) < 2:
            raise ModelFormatError("inventory needs at least one real tag")
        for t in tags[1:]:
            if not t or any(ch.isspace() for ch in t) or t in _RESERVED_LABELS:
                raise ModelFormatError(f"illegal tag label {t!r}")
        self.tags = tags
        self.real_tags = tags[1:]
        self._index = {t: i for i, t in enumerate(self.real_tags)}
        self.trans = np.asarray(trans, dtype=np.float64)
        k = len(self.real_tags)
        if self.trans.shape != (k + 1, k):
            raise ModelFormatError(
                f"transition matrix shape {self.trans.shape} != ({k + 1}, {k})")
        self.smoothing = smoothing
        self.emits = {t: dict(emits.get(t, {})) for t in self.real_tags}
        if open_class_tags is not None:
            open_class_tags = tuple(open_class_tags)
            for t in open_class_tags:
                if t not in self._index:
                    raise ModelFormatError(f"open-class tag {t!r} not in inventory")
        self.open_class_tags = open_class_tags
        with np.errstate(divide="ignore"):
            self.log_trans = np.log(self.trans)
        self._log_emits = {
            t: {key: math.log(p) for key, p in row.items()}
            for t, row in self.emits.items()
        }
        self._log_oov = {
            t: math.log(self.unk_mass_for(t) / smoothing.virtual_unseen)
            for t in self.real_tags
        }

    def tag_index(self, label: str) -> int:
        idx = self._index.get(label)
        if idx is None:
            raise DecodeFailure(f"tag {label!r} not in model inventory")
        return idx

    def transition(self, t_prev: str, t: str) -> float:
        row = len(self.real_tags) if t_prev == BOS else self.tag_index(t_prev)
        return float(self.trans[row, self.tag_index(t)])

    def unk_mass_for(self, tag: str) -> float:
        """Reserved unseen mass; a tag with no observed emissions is all reserve."""
        return self.smoothing.unk_mass if self.emits[tag] else 1.0

    def emission(self, tag: str, key: str) -> float:
        row = self.emits.get(tag)
        if row is None:
            raise DecodeFailure(f"tag {tag!r} not in model inventory")
        p = row.get(key)
        if p is not None:
            return p
        return self.unk_mass_for(tag) / self.smoothing.virtual_unseen

    def emission_logprob(self, tag: str, key: str) -> tuple[float, bool]:
        """Log emission probability and whether the key was seen in training."""
        lp = self._log_emits[tag].get(key)
        if lp is not None:
            return lp, True
        return self._log_oov[tag], False

    def decode_allowed_tags(self) -> tuple[str, ...]:
        """Allowed tags for morphemes without dictionary constraints."""
        return self.open_class_tags if self.open_class_tags is not None else self.real_tags

    def validate(self, tol: float = 1e-9) -> None:
        """Re-check normalization invariants; raises on violation."""
        k = len(self.real_tags)
        for r in range(k + 1):
            row = self.trans[r]
            if np.any(row < 0.0):
                raise ModelFormatError(
                    f"negative transition probability in row {self._row_label(r)!r}")
            total = float(np.sum(row))
            if abs(total - 1.0) > tol:
                raise ModelFormatError(
                    f"transition row for {self._row_label(r)!r} sums to {total!r}")
        for t in self.real_tags:
            row = self.emits[t]
            if not row:
                continue
            for key, p in row.items():
                if p <= 0.0:
                    raise ModelFormatError(f"non-positive emission {t!r} -> {key!r}")
            total = math.fsum(row.values()) + self.smoothing.unk_mass
            if abs(total - 1.0) > tol:
                raise ModelFormatError(
                    f"emission row for {t!r} sums to {total!r} including unseen mass")

    def _row_label(self, r: int) -> str:
        return BOS if r == len(self.real_tags) else self.real_tags[r]


def _smoothed_model(tagset, trans_counts, emit_counts, emit_vocab,
                    smoothing: Smoothing, open_class_tags=None) -> HmmModel:
    """Turn (expected) counts into a normalized model via add-lambda."""
    tagset = tuple(tagset)
    k = len(tagset)
    lt = smoothing.lambda_trans
    trans = np.empty((k + 1, k), dtype=np.float64)
    for r in range(k + 1):
        row = trans_counts[r]
        total = math.fsum(row)
        denom = total + lt * k
        for c in range(k):
            trans[r, c] = (row[c] + lt) / denom
    le = smoothing.lambda_emit
    scale = 1.0 - smoothing.unk_mass
    emits = {}
    for t in tagset:
        vocab = sorted(emit_vocab.get(t, ()))
        if not vocab:
            emits[t] = {}
            continue
        counts = emit_counts.get(t, {})
        total = math.fsum(counts.get(key, 0.0) for key in vocab)
        denom = total + le * len(vocab)
        emits[t] = {key: scale * (counts.get(key, 0.0) + le) / denom for key in vocab}
    return HmmModel((BOS,) + tagset, trans, emits, smoothing, open_class_tags)


def _sentences(corpus):
    return corpus.sentences if hasattr(corpus, "sentences") else corpus


def train_supervised(corpus, tagset, smoothing: Smoothing = Smoothing(),
                     open_class_tags=None) -> HmmModel:
    """Estimate transition and emission tables from a gold-tagged corpus."""
    sentences = list(_sentences(corpus))
    if not sentences:
        raise TrainingError("empty training corpus")
    tagset = tuple(tagset)
    index = {t: i for i, t in enumerate(tagset)}
    offenders = sorted({
        tag for s in sentences for _, _, _, tag in s.positions() if tag not in index
    })
    if offenders:
        raise TrainingError(f"corpus tags not in tagset: {', '.join(offenders)}")

    k = len(tagset)
    trans_counts = [[0.0] * k for _ in range(k + 1)]
    emit_counts: dict[str, dict[str, float]] = {t: {} for t in tagset}
    for sentence in sentences:
        prev = k
        for _, _, morpheme, tag in sentence.positions():
            cur = index[tag]
            trans_counts[prev][cur] += 1.0
            key = f"{morpheme.lemma}/{tag}"
            row = emit_counts[tag]
            row[key] = row.get(key, 0.0) + 1.0
            prev = cur
    emit_vocab = {t: list(emit_counts[t].keys()) for t in tagset}
    return _smoothed_model(tagset, trans_counts, emit_counts, emit_vocab,
                           smoothing, open_class_tags)


def _decode_options(model: HmmModel, options):
    """Run Viterbi over explicit per-position (tag, key) options.

    Returns (tags, score, oov_positions).  Options are sorted by tag index
    per position so the kernel's first-max scan realizes the documented
    tie-break.
    """
    if not options:
        raise DecodeFailure("empty sequence")
    opt_tags = []
    opt_emits = []
    offsets = [0]
    opt_labels = []
    opt_oov = []
    for pos_no, pos in enumerate(options):
        if not pos:
            raise DecodeFailure(f"empty allowed-tag set at position {pos_no}")
        decorated = sorted((model.tag_index(label), label, key) for label, key in pos)
        last_idx = None
        for idx, label, key in decorated:
            if idx == last_idx:
                raise DecodeFailure(f"duplicate allowed tag {label!r} at position {pos_no}")
            last_idx = idx
            lp, known = model.emission_logprob(label, key)
            opt_tags.append(idx)
            opt_emits.append(lp)
            opt_labels.append(label)
            opt_oov.append(not known)
        offsets.append(len(opt_tags))
    path, score = viterbi_kernel(
        np.asarray(opt_tags, dtype=np.int32),
        np.asarray(opt_emits, dtype=np.float64),
        np.asarray(offsets, dtype=np.int32),
        model.log_trans,
        len(model.real_tags),
    )
    if score == NEG_INF:
        raise DecodeFailure("all tag sequences are structurally forbidden")
    tags = []
    oov_positions = []
    for i, local in enumerate(path):
        g = offsets[i] + int(local)
        tags.append(opt_labels[g])
        if opt_oov[g]:
            oov_positions.append(i)
    return tuple(tags), float(score), oov_positions


def viterbi(model: HmmModel, morphemes):
    """Decode a sequence of (key, allowed_tags) pairs.

    ``allowed_tags`` may be None to mean the model's open-class tags.
    Returns (tag_sequence, log_score).
    """
    options = []
    for key, allowed in morphemes:
        if allowed is None:
            allowed = model.decode_allowed_tags()
        allowed = tuple(allowed)
        options.append([(label, key) for label in allowed])
    tags, score, _ = _decode_options(model, options)
    return tags, score


def score_sequence(model: HmmModel, keyed_tags) -> float:
    """Independent re-scoring of a fixed (key, tag) sequence in log space."""
    total = 0.0
    prev = BOS
    for key, tag in keyed_tags:
        lp, _ = model.emission_logprob(tag, key)
        lt = model.log_trans[
            len(model.real_tags) if prev == BOS else model.tag_index(prev),
            model.tag_index(tag),
        ]
        total += float(lt) + lp
        prev = tag
    return total


def tag_lattice(model: HmmModel, lattice: SentenceLattice,
                sentence_cap: int = DEFAULT_SENTENCE_CAP) -> TaggedSentence:
    """Decode every sentence candidate in the lattice and keep the best.

    The cross product of per-Eojeol candidates is enumerated (bounded by
    ``sentence_cap``; exceeding it flags ``truncated`` on the result), each
    candidate is Viterbi-scored, and the highest-scoring one wins.  Ties go
    to fewer morphemes, then tag-index order, then enumeration order.
    """
    if sentence_cap < 1:
        raise ValueError("sentence_cap must be >= 1")
    per_eojeol = [analysis.candidates for analysis in lattice.eojeols]
    truncated = lattice.candidate_count() > sentence_cap
    best_key = None
    best = None
    failures = 0
    combos = itertools.islice(itertools.product(*per_eojeol), sentence_cap)
    for combo_no, combo in enumerate(combos):
        flat = [m for candidate in combo for m in candidate]
        options = [[(m.projected_tag, m.key())] for m in flat]
        try:
            tags, score, oov_flat = _decode_options(model, options)
        except DecodeFailure:
            failures += 1
            continue
        key = (-score, len(flat), tuple(model.tag_index(t) for t in tags), combo_no)
        if best_key is None or key < best_key:
            best_key = key
            best = (combo, tags, score, oov_flat)
    if best is None:
        raise DecodeFailure(
            f"no decodable sentence candidate ({failures} candidates rejected)")
    combo, tags, score, oov_flat = best
    eojeols = []
    oov = set()
    pos = 0
    for ei, (analysis, candidate) in enumerate(zip(lattice.eojeols, combo)):
        pairs = []
        for mi, morpheme in enumerate(candidate):
            pairs.append((morpheme, tags[pos]))
            if pos in oov_flat:
                oov.add((ei, mi))
            pos += 1
        eojeols.append(TaggedEojeol(analysis.eojeol_surface, tuple(pairs)))
    return TaggedSentence(tuple(eojeols), score, truncated, frozenset(oov))


def em_sentence_from_lattice(lattice: SentenceLattice, lexicon: Lexicon,
                             proj: TagsetProjection):
    """Build one EM training sentence from an analyzed lattice.

    Takes each Eojeol's first candidate (the canonical fewest-morphemes
    analysis) and re-opens the tag choice per morpheme to everything the
    dictionary allows for its (surface, lemma).
    """
    tokens = []
    for analysis in lattice.eojeols:
        for m in analysis.candidates[0]:
            allowed = lexicon.allowed_projected_tags(m.surface, m.lemma, proj)
            tokens.append((m.lemma, allowed or (m.projected_tag,)))
    return tokens


def _em_prior(model: HmmModel, emit_vocab) -> float:
    """Log Dirichlet-style prior matching the add-lambda M-step."""
    s = model.smoothing
    total = s.lambda_trans * float(np.sum(model.log_trans))
    scale = 1.0 - s.unk_mass
    for t in model.real_tags:
        keys = emit_vocab.get(t)
        if not keys:
            continue
        acc = 0.0
        for key in sorted(keys):
            acc += math.log(model.emission(t, key) / scale)
        total += s.lambda_emit * acc
    return total


def baum_welch(init: HmmModel, corpus, max_iters: int, tol: float):
    """Dictionary-constrained EM re-estimation of an initial model.

    ``corpus`` is a list of sentences, each a list of (lemma, allowed_tags)
    tokens; the forward-backward pass only visits a token's allowed tags.
    Returns (model, per_iteration_objective) where the objective is the
    corpus log-likelihood plus the smoothing prior, which EM theory keeps
    non-decreasing; the raw data log-likelihood per iteration is exposed on
    the model as ``last_em_data_loglik`` for inspection.
    """
    if max_iters < 1:
        raise TrainingError(f"max_iters must be >= 1, got {max_iters}")
    if not tol > 0.0:
        raise TrainingError(f"tol must be positive, got {tol}")
    sentences = list(corpus)
    if not sentences:
        raise TrainingError("empty EM corpus")

    tagset = init.real_tags
    index = init._index
    k = len(tagset)
    smoothing = init.smoothing

    prepared = []
    emit_vocab: dict[str, set] = {t: set() for t in tagset}
    for si, sentence in enumerate(sentences):
        opt_tags = []
        opt_keys = []
        offsets = [0]
        for ti, (lemma, allowed) in enumerate(sentence):
            allowed = tuple(allowed)
            if not allowed:
                raise TrainingError(
                    f"sentence {si}, token {ti} ({lemma!r}) has an empty allowed-tag set")
            labels = sorted(set(allowed), key=lambda lab: _require_tag(index, lab, si))
            for label in labels:
                key = f"{lemma}/{label}"
                opt_tags.append(index[label])
                opt_keys.append((label, key))
                emit_vocab[label].add(key)
            offsets.append(len(opt_tags))
        if not opt_tags:
            raise TrainingError(f"sentence {si} is empty")
        prepared.append((
            np.asarray(opt_tags, dtype=np.int32),
            opt_keys,
            np.asarray(offsets, dtype=np.int32),
        ))

    model = init
    objectives = []
    data_logliks = []
    for iteration in range(max_iters):
        trans_counts = [[0.0] * k for _ in range(k + 1)]
        emit_exp: dict[str, dict[str, float]] = {t: {} for t in tagset}
        loglik = 0.0
        for si, (opt_tags, opt_keys, offsets) in enumerate(prepared):
            emits = np.empty(len(opt_keys), dtype=np.float64)
            for j, (label, key) in enumerate(opt_keys):
                emits[j] = model.emission(label, key)
            ll, gamma, tc = forward_backward_kernel(
                opt_tags, emits, offsets, model.trans, k)
            if ll == NEG_INF:
                raise TrainingError(f"sentence {si} admits no legal tag sequence")
            loglik += ll
            for r in range(k + 1):
                row = trans_counts[r]
                add = tc[r]
                for c in range(k):
                    row[c] += add[c]
            for j, (label, key) in enumerate(opt_keys):
                row = emit_exp[label]
                row[key] = row.get(key, 0.0) + gamma[j]
        objective = loglik + _em_prior(model, emit_vocab)
        objectives.append(objective)
        data_logliks.append(loglik)
        model = _smoothed_model(tagset, trans_counts, emit_exp, emit_vocab,
                                smoothing, init.open_class_tags)
        if iteration > 0 and objectives[-1] - objectives[-2] < tol:
            break
    model.last_em_data_loglik = tuple(data_logliks)
    return model, tuple(objectives)


def _require_tag(index, label, sentence_no):
    idx = index.get(label)
    if idx is None:
        raise TrainingError(f"sentence {sentence_no}: tag {label!r} not in model inventory")
    return idx


# ---------------------------------------------------------------------------
# Model file format

_HEADER = "HMM-BIGRAM v1"


def save_model(model: HmmModel, path) -> None:
    """Write the canonical text form (stable byte-for-byte round-trips)."""
    k = len(model.real_tags)
    lines = [_HEADER, "TAGS"]
    lines.extend(model.tags)
    lines.append("TRANS")
    for r_label, row in zip(model.tags, _trans_rows(model)):
        for c, t in enumerate(model.real_tags):
            lines.append(f"{r_label}\t{t}\t{row[c]:.12e}")
    lines.append("EMIT")
    for t in model.real_tags:
        row = model.emits[t]
        for key in sorted(row):
            lines.append(f"{t}\t{key}\t{row[key]:.12e}")
    lines.append("CONFIG")
    s = model.smoothing
    lines.append(f"lambda_trans\t{s.lambda_trans:.12e}")
    lines.append(f"lambda_emit\t{s.lambda_emit:.12e}")
    lines.append(f"unk_mass\t{s.unk_mass:.12e}")
    lines.append(f"virtual_unseen\t{s.virtual_unseen}")
    if model.open_class_tags is not None:
        lines.append(f"open_class\t{','.join(model.open_class_tags)}")
    with io.open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def _trans_rows(model: HmmModel):
    k = len(model.real_tags)
    yield model.trans[k]
    for r in range(k):
        yield model.trans[r]


def load_model(path) -> HmmModel:
    """Parse a model file and re-validate its normalization invariants."""
    with io.open(path, "r", encoding="utf-8") as fh:
        raw = fh.read().splitlines()
    src = str(path)
    if not raw or raw[0] != _HEADER:
        raise ModelFormatError(f"missing {_HEADER!r} header", path=src, line_no=1)

    sections = {"TAGS": [], "TRANS": [], "EMIT": [], "CONFIG": []}
    order = ["TAGS", "TRANS", "EMIT", "CONFIG"]
    current = None
    expected = list(order)
    for line_no, line in enumerate(raw[1:], start=2):
        if line in sections:
            if not expected or line != expected[0]:
                raise ModelFormatError(f"unexpected section {line!r}", path=src, line_no=line_no)
            current = expected.pop(0)
            continue
        if current is None:
            raise ModelFormatError("content before first section", path=src, line_no=line_no)
        sections[current].append((line_no, line))
    if expected:
        raise ModelFormatError(f"missing section {expected[0]!r}", path=src)

    tags = tuple(line for _, line in sections["TAGS"])
    if not tags or tags[0] != BOS:
        raise ModelFormatError(f"TAGS section must start with {BOS}", path=src)
    real = tags[1:]
    if not real:
        raise ModelFormatError("no real tags in TAGS section", path=src)
    if len(set(tags)) != len(tags):
        raise ModelFormatError("duplicate tag in TAGS section", path=src)
    k = len(real)
    index = {t: i for i, t in enumerate(real)}

    trans = np.full((k + 1, k), np.nan, dtype=np.float64)
    for line_no, line in sections["TRANS"]:
        fields = line.split("\t")
        if len(fields) != 3:
            raise ModelFormatError(f"bad TRANS line {line!r}", path=src, line_no=line_no)
        t_prev, t, raw_p = fields
        r = k if t_prev == BOS else index.get(t_prev)
        c = index.get(t)
        if r is None or c is None:
            raise ModelFormatError(f"unknown tag in TRANS line {line!r}",
                                   path=src, line_no=line_no)
        if not np.isnan(trans[r, c]):
            raise ModelFormatError(f"duplicate TRANS cell {t_prev!r} -> {t!r}",
                                   path=src, line_no=line_no)
        trans[r, c] = _parse_prob(raw_p, src, line_no, allow_zero=True)
    if np.isnan(trans).any():
        raise ModelFormatError("incomplete TRANS matrix", path=src)

    emits: dict[str, dict[str, float]] = {t: {} for t in real}
    for line_no, line in sections["EMIT"]:
        fields = line.split("\t")
        if len(fields) != 3:
            raise ModelFormatError(f"bad EMIT line {line!r}", path=src, line_no=line_no)
        t, key, raw_p = fields
        if t not in index:
            raise ModelFormatError(f"unknown tag in EMIT line {line!r}",
                                   path=src, line_no=line_no)
        if not key:
            raise ModelFormatError("empty morpheme key", path=src, line_no=line_no)
        if key in emits[t]:
            raise ModelFormatError(f"duplicate EMIT entry {t!r} -> {key!r}",
                                   path=src, line_no=line_no)
        emits[t][key] = _parse_prob(raw_p, src, line_no, allow_zero=False)

    config = {}
    for line_no, line in sections["CONFIG"]:
        fields = line.split("\t")
        if len(fields) != 2:
            raise ModelFormatError(f"bad CONFIG line {line!r}", path=src, line_no=line_no)
        config[fields[0]] = fields[1]
    try:
        smoothing = Smoothing(
            lambda_trans=float(config["lambda_trans"]),
            lambda_emit=float(config["lambda_emit"]),
            unk_mass=float(config["unk_mass"]),
            virtual_unseen=int(config["virtual_unseen"]),
        )
    except KeyError as exc:
        raise ModelFormatError(f"missing CONFIG key {exc.args[0]!r}", path=src) from exc
    except (ValueError, TrainingError) as exc:
        raise ModelFormatError(f"bad CONFIG value: {exc}", path=src) from exc
    open_class = None
    if "open_class" in config:
        open_class = tuple(config["open_class"].split(","))

    try:
        model = HmmModel(tags, trans, emits, smoothing, open_class)
        model.validate()
    except ModelFormatError as exc:
        raise ModelFormatError(str(exc), path=src) from exc
    return model


def _parse_prob(raw, src, line_no, allow_zero):
    try:
        p = float(raw)
    except ValueError as exc:
        raise ModelFormatError(f"bad probability {raw!r}", path=src, line_no=line_no) from exc
    if p < 0.0 or (p == 0.0 and not allow_zero) or p > 1.0 or math.isnan(p):
        raise ModelFormatError(f"probability out of range: {raw!r}", path=src, line_no=line_no)
    return p
