import itertools
import random

import pytest

from helpers import sentence
from morphtag.errors import EvaluationError, RuleFormatError
from morphtag.tbl import (ContextProbe, Rule, RuleList, apply_rules,
                          apply_rules_corpus, enumerate_schemas, learn_rules,
                          load_rules, parse_probe, parse_rule, save_rules,
                          score_rule)


def test_schema_family_count_matches_direct_enumeration():
    # 6 offsets x 2 anchors tag probes, 2 within-Eojeol probes, 2 offsets x
    # 2 anchors lexeme probes, plus C(7, 2) pairs of the seven named ones.
    singles = 6 * 2 + 2 + 2 * 2
    pairs = len(list(itertools.combinations(range(7), 2)))
    schemas = enumerate_schemas()
    assert len(schemas) == singles + pairs == 39
    assert len(set(schemas)) == 39


def test_named_probes_present():
    mnemonics = {str(s) for s in enumerate_schemas() if len(s.probes) == 1}
    assert "N1FMT" in mnemonics          # next Eojeol, first morpheme, tag
    assert "P1LMO" in mnemonics          # previous Eojeol, last morpheme, lexeme
    for name in ("P1LMT", "N2FMT", "N3FMT", "P1FMO", "N1FMO", "WPMT", "WNMT"):
        assert name in mnemonics


def test_probe_mnemonic_round_trip():
    for schema in enumerate_schemas():
        for probe in schema.probes:
            assert parse_probe(probe.mnemonic()) == probe
    assert parse_probe("N1FMT") == ContextProbe(1, "F", "T")
    assert parse_probe("P1LMO") == ContextProbe(-1, "L", "O")
    assert parse_probe("WPMT") == ContextProbe(0, "F", "T")
    with pytest.raises(RuleFormatError):
        parse_probe("N4FMT")


def toy_training_pair():
    """Three error sites whose only shared context is next-first-tag = mT."""
    first = [
        sentence(("p1", [("p1", "A")]), ("w", [("w", "D")]),
                 ("m1", [("m1", "mT")]), ("q1", [("q1", "Q1")])),
        sentence(("p2", [("p2", "B")]), ("w", [("w", "D")]),
                 ("m2", [("m2", "mT")]), ("q2", [("q2", "Q2")])),
        sentence(("w", [("w", "D")]), ("m3", [("m3", "mT")])),
        sentence(("w", [("w", "D")]), ("x", [("x", "A")])),
        sentence(("p1", [("p1", "A")]), ("w", [("w", "D")]), ("x", [("x", "A")])),
    ]
    gold = [
        sentence(("p1", [("p1", "A")]), ("w", [("w", "G")]),
                 ("m1", [("m1", "mT")]), ("q1", [("q1", "Q1")])),
        sentence(("p2", [("p2", "B")]), ("w", [("w", "G")]),
                 ("m2", [("m2", "mT")]), ("q2", [("q2", "Q2")])),
        sentence(("w", [("w", "G")]), ("m3", [("m3", "mT")])),
        sentence(("w", [("w", "D")]), ("x", [("x", "A")])),
        sentence(("p1", [("p1", "A")]), ("w", [("w", "D")]), ("x", [("x", "A")])),
    ]
    return first, gold


def test_toy_corpus_learns_the_next_first_tag_rule():
    first, gold = toy_training_pair()
    rules = learn_rules(first, gold)
    assert len(rules) == 1
    rule = rules.rules[0]
    assert rule.lexeme == "w"
    assert rule.current_tag == "D"
    assert rule.corrected_tag == "G"
    assert rule.conditions == ((ContextProbe(1, "F", "T"), "mT"),)
    assert rule.effectiveness == 3


def test_toy_rule_fixes_exactly_the_three_sites():
    first, gold = toy_training_pair()
    rules = learn_rules(first, gold)
    corrected = apply_rules_corpus(rules, first)
    changed = 0
    for before, after, want in zip(first, corrected, gold):
        for (_, t0), (_, t1), (_, tg) in zip(
            [p for e in before.eojeols for p in e.pairs],
            [p for e in after.eojeols for p in e.pairs],
            [p for e in want.eojeols for p in e.pairs],
        ):
            if t0 != t1:
                changed += 1
            assert t1 == tg
    assert changed == 3


def test_identical_corpora_learn_nothing():
    _, gold = toy_training_pair()
    assert len(learn_rules(gold, gold)) == 0


def test_empty_rule_list_is_identity():
    first, _ = toy_training_pair()
    out = apply_rules(RuleList(()), first[0])
    assert out == first[0]


def test_out_of_range_probe_never_fires():
    rule = Rule("w", "D", ((ContextProbe(2, "F", "T"), "mT"),), "G")
    one_eojeol = sentence(("w", [("w", "D")]))
    assert apply_rules(RuleList((rule,)), one_eojeol) == one_eojeol


def test_rule_application_is_in_place_left_to_right():
    # After the first position is rewritten, the second position's
    # within-Eojeol probe sees the updated tag.
    rule = Rule("w", "D", ((ContextProbe(0, "F", "T"), "G"),), "G")
    s = sentence(("gww", [("g", "G"), ("w", "D"), ("w", "D")]))
    out = apply_rules(RuleList((rule,)), s)
    tags = [t for e in out.eojeols for _, t in e.pairs]
    assert tags == ["G", "G", "G"]


def test_apply_never_touches_structure():
    first, gold = toy_training_pair()
    rules = learn_rules(first, gold)
    for before, after in zip(first, apply_rules_corpus(rules, first)):
        assert len(before.eojeols) == len(after.eojeols)
        for e0, e1 in zip(before.eojeols, after.eojeols):
            assert e0.surface == e1.surface
            for (m0, _), (m1, _) in zip(e0.pairs, e1.pairs):
                assert m0 is m1


def test_rules_file_round_trip(tmp_path):
    first, gold = toy_training_pair()
    rules = learn_rules(first, gold)
    p1 = tmp_path / "rules.txt"
    p2 = tmp_path / "rules2.txt"
    save_rules(rules, p1)
    reloaded = load_rules(p1)
    assert reloaded == rules
    save_rules(reloaded, p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_rule_line_format():
    rule = Rule("w", "D", ((ContextProbe(1, "F", "T"), "mT"),
                           (ContextProbe(-1, "L", "O"), "p1")), "G", 5)
    line = str(rule)
    assert line == "w/D | N1FMT=mT & P1LMO=p1 -> G # score=5"
    assert parse_rule(line) == rule


def test_segmentation_mismatch_names_sentence():
    first = [sentence(("ab", [("a", "A"), ("b", "B")]))]
    gold = [sentence(("ab", [("ab", "A")]))]
    with pytest.raises(EvaluationError, match="sentence 0"):
        learn_rules(first, gold)


def _random_pair(rng, n_sentences=8):
    tags = ["A", "B", "C", "D"]
    vocab = ["u", "v", "w", "x", "y"]
    gold = []
    first = []
    for _ in range(n_sentences):
        eojeols = []
        for _ in range(rng.randint(1, 4)):
            morphs = [(rng.choice(vocab), rng.choice(tags))
                      for _ in range(rng.randint(1, 3))]
            eojeols.append(("".join(w for w, _ in morphs), morphs))
        gold.append(sentence(*eojeols))
        corrupted = []
        for surface, morphs in eojeols:
            noisy = [
                (w, rng.choice(tags) if rng.random() < 0.3 else t)
                for w, t in morphs
            ]
            corrupted.append((surface, noisy))
        first.append(sentence(*corrupted))
    return first, gold


def _accuracy(system, gold):
    total = wrong = 0
    for s, g in zip(system, gold):
        for (_, ts), (_, tg) in zip(
            [p for e in s.eojeols for p in e.pairs],
            [p for e in g.eojeols for p in e.pairs],
        ):
            total += 1
            wrong += ts != tg
    return (total - wrong) / total


def test_effectiveness_matches_replayed_rescoring():
    for trial in range(12):
        rng = random.Random(500 + trial)
        first, gold = _random_pair(rng)
        rules = learn_rules(first, gold)
        # replay the greedy loop: re-score each rule against the corpus
        # state just before it was applied
        tags = [[[t for _, t in e.pairs] for e in s.eojeols] for s in first]
        lexemes = [[[m.lemma for m, _ in e.pairs] for e in s.eojeols] for s in first]
        gold_tags = [[[t for _, t in e.pairs] for e in s.eojeols] for s in gold]
        from morphtag.tbl import _apply_rule_inplace
        for rule in rules:
            net, _ = score_rule(rule, tags, lexemes, gold_tags)
            assert net == rule.effectiveness
            assert net >= 2
            for s in range(len(tags)):
                _apply_rule_inplace(rule, tags[s], lexemes[s])


def test_training_set_never_degrades():
    for trial in range(8):
        rng = random.Random(900 + trial)
        first, gold = _random_pair(rng)
        rules = learn_rules(first, gold)
        corrected = apply_rules_corpus(rules, first)
        assert _accuracy(corrected, gold) >= _accuracy(first, gold)


def test_learning_is_deterministic():
    rng1 = random.Random(321)
    rng2 = random.Random(321)
    first1, gold1 = _random_pair(rng1)
    first2, gold2 = _random_pair(rng2)
    r1 = learn_rules(first1, gold1)
    r2 = learn_rules(first2, gold2)
    assert [str(r) for r in r1] == [str(r) for r in r2]


def test_min_score_validation():
    first, gold = toy_training_pair()
    with pytest.raises(ValueError):
        learn_rules(first, gold, min_score=0)


def test_max_rules_caps_learning():
    rng = random.Random(7)
    first, gold = _random_pair(rng, n_sentences=12)
    full = learn_rules(first, gold, min_score=1)
    if len(full) >= 2:
        capped = learn_rules(first, gold, min_score=1, max_rules=1)
        assert len(capped) == 1
        assert str(capped.rules[0]) == str(full.rules[0])
