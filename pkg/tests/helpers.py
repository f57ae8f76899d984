"""Shared builders and independent oracles for the test suite.

The oracles here deliberately avoid the library's algorithms: Viterbi is
checked against full enumeration of tag assignments, segmentation against
recursive substring covers, and forward-backward against posteriors
computed by summing explicit path probabilities.
"""

import itertools
import math

import numpy as np

from morphtag.hmm import BOS, HmmModel, Smoothing, TaggedEojeol, TaggedSentence
from morphtag.lexicon import ConnectivityTable, LexEntry, Lexicon, Morpheme
from morphtag.tagset import TagPath, TagsetProjection


def pair(word, tag, lemma=None):
    lemma = word if lemma is None else lemma
    return (Morpheme(word, lemma, TagPath((tag,)), tag), tag)


def sentence(*eojeols):
    """Build a TaggedSentence from (surface, [(word, tag), ...]) groups."""
    built = []
    for surface, morphs in eojeols:
        built.append(TaggedEojeol(surface, tuple(pair(w, t) for w, t in morphs)))
    return TaggedSentence(tuple(built))


def identity_projection(labels):
    return TagsetProjection(tuple((TagPath((lab,)), lab) for lab in labels), "XX")


def random_model(rng, tags, vocab, smoothing=None):
    """A valid random model: normalized rows, emissions over the full vocab."""
    smoothing = smoothing or Smoothing()
    k = len(tags)
    trans = np.empty((k + 1, k))
    for r in range(k + 1):
        row = np.array([rng.random() + 0.01 for _ in range(k)])
        trans[r] = row / row.sum()
    emits = {}
    scale = 1.0 - smoothing.unk_mass
    for t in tags:
        if vocab:
            row = np.array([rng.random() + 0.01 for _ in vocab])
            row = row / row.sum() * scale
            emits[t] = dict(zip(vocab, row.tolist()))
        else:
            emits[t] = {}
    return HmmModel((BOS,) + tuple(tags), trans, emits, smoothing)


def random_decode_instance(rng, max_len=8, max_tags=6, max_product=50000,
                           oov_keys=True):
    """(model, morphemes) with bounded enumeration size for the oracle."""
    k = rng.randint(1, max_tags)
    tags = tuple(f"t{i}" for i in range(k))
    vocab = [f"m{i}" for i in range(rng.randint(1, 10))]
    model = random_model(rng, tags, vocab)
    keys = list(vocab)
    if oov_keys:
        keys += ["oovA", "oovB"]
    n = rng.randint(1, max_len)
    morphemes = []
    for _ in range(n):
        size = rng.randint(1, k)
        allowed = tuple(sorted(rng.sample(list(tags), size)))
        morphemes.append((rng.choice(keys), allowed))
    while math.prod(len(a) for _, a in morphemes) > max_product:
        i = rng.randrange(n)
        key, allowed = morphemes[i]
        morphemes[i] = (key, allowed[: max(1, len(allowed) // 2)])
    return model, morphemes


def brute_force_viterbi(model, morphemes):
    """Score every tag assignment; colex-smallest argmax wins ties.

    Prefix sums expand position by position in the same association order
    the decoder uses, so path scores agree bit for bit.
    """
    k = len(model.real_tags)
    positions = []
    for key, allowed in morphemes:
        labels = sorted(allowed, key=model.tag_index)
        positions.append((key, labels))

    first_key, first_labels = positions[0]
    scores = np.array([
        float(model.log_trans[k, model.tag_index(lab)])
        + model.emission_logprob(lab, first_key)[0]
        for lab in first_labels
    ])
    sizes = [len(first_labels)]
    prev_labels = first_labels
    for key, labels in positions[1:]:
        step = np.array([
            [
                float(model.log_trans[model.tag_index(pl), model.tag_index(lab)])
                + model.emission_logprob(lab, key)[0]
                for lab in labels
            ]
            for pl in prev_labels
        ])
        scores = (
            scores.reshape(-1, len(prev_labels))[:, :, None] + step[None, :, :]
        ).ravel()
        sizes.append(len(labels))
        prev_labels = labels

    best = scores.max()
    tied = np.flatnonzero(scores == best)

    def decode(flat):
        out = []
        for size in reversed(sizes):
            out.append(flat % size)
            flat //= size
        return list(reversed(out))

    def colex_key(flat):
        opts = decode(int(flat))
        idxs = [model.tag_index(positions[i][1][o]) for i, o in enumerate(opts)]
        return tuple(reversed(idxs))

    winner = min(tied, key=colex_key)
    opts = decode(int(winner))
    labels = tuple(positions[i][1][o] for i, o in enumerate(opts))
    return labels, float(best)


def brute_force_covers(eojeol, entries, conn):
    """Every entry sequence covering the string with legal adjacencies."""
    out = []

    def rec(pos, seq):
        if pos == len(eojeol):
            out.append(tuple(seq))
            return
        for entry in entries:
            if eojeol.startswith(entry.surface, pos):
                if seq and not conn.allows(seq[-1].tag_path, entry.tag_path):
                    continue
                seq.append(entry)
                rec(pos + len(entry.surface), seq)
                seq.pop()

    rec(0, [])
    return out


def candidate_signature(candidate):
    return tuple((m.surface, m.lemma, str(m.tag_path)) for m in candidate)


def entry_signature(entries):
    return tuple((e.surface, e.lemma, str(e.tag_path)) for e in entries)


def enumeration_posteriors(tokens, tags, trans, emit):
    """Posterior expectations by explicit path enumeration.

    ``tokens``: list of (key, allowed); ``trans``: dict (prev, cur) -> prob
    with prev including "BOS"; ``emit``: (tag, key) -> prob.  Returns
    (loglik, gamma, xi) with gamma[i][tag] and xi[(prev, cur)] summed over
    all positions (xi includes the BOS transition into position 0).
    """
    allowed_lists = [list(allowed) for _, allowed in tokens]
    total = 0.0
    gamma = [dict.fromkeys(a, 0.0) for a in allowed_lists]
    xi = {}
    for assignment in itertools.product(*allowed_lists):
        p = 1.0
        prev = "BOS"
        for (key, _), tag in zip(tokens, assignment):
            p *= trans[(prev, tag)] * emit[(tag, key)]
            prev = tag
        total += p
        prev = "BOS"
        for i, tag in enumerate(assignment):
            gamma[i][tag] += p
            xi[(prev, tag)] = xi.get((prev, tag), 0.0) + p
            prev = tag
    for row in gamma:
        for tag in row:
            row[tag] /= total
    for key in xi:
        xi[key] /= total
    return math.log(total), gamma, xi


def lidstone_reference(tags, trans_counts, emit_counts, emit_vocab, smoothing):
    """The documented smoothing formulas, recomputed naively.

    trans_counts: dict (prev, cur) -> count with prev in tags + ["BOS"];
    emit_counts: dict (tag, key) -> count; emit_vocab: dict tag -> keys.
    Returns (trans, emit) dicts of probabilities.
    """
    k = len(tags)
    trans = {}
    for prev in list(tags) + ["BOS"]:
        row_total = sum(trans_counts.get((prev, t), 0.0) for t in tags)
        for t in tags:
            trans[(prev, t)] = (
                (trans_counts.get((prev, t), 0.0) + smoothing.lambda_trans)
                / (row_total + smoothing.lambda_trans * k)
            )
    emit = {}
    for tag in tags:
        vocab = sorted(emit_vocab.get(tag, ()))
        total = sum(emit_counts.get((tag, key), 0.0) for key in vocab)
        denom = total + smoothing.lambda_emit * len(vocab)
        for key in vocab:
            emit[(tag, key)] = (
                (1.0 - smoothing.unk_mass)
                * (emit_counts.get((tag, key), 0.0) + smoothing.lambda_emit)
                / denom
            )
    return trans, emit


def simple_lexicon(specs, conn=None):
    """Lexicon from (surface, lemma, tag-path-text) triples."""
    entries = [
        LexEntry(s, l, TagPath(tuple(p.split(":")))) for s, l, p in specs
    ]
    return Lexicon(entries, conn or ConnectivityTable.allow_all())
