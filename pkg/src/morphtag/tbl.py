"""Error-driven learning of ordered tag-correction rules.

Rules rewrite the tag of a (lemma, tag) occurrence when contextual
conditions hold; conditions probe tags or lexical forms of the first/last
morpheme of nearby Eojeols, or the neighboring morpheme inside the same
Eojeol.  Learning is a greedy loop: instantiate candidate rules at current
error sites, pick the one with the best net correction count over the
whole corpus, apply it, repeat.  Application order is the learned order.
"""

from __future__ import annotations

import io
import itertools
import re
from dataclasses import dataclass, replace

from .errors import EvaluationError, RuleFormatError
from .hmm import TaggedSentence

ANCHOR_FIRST = "F"
ANCHOR_LAST = "L"
FEATURE_TAG = "T"
FEATURE_LEXEME = "O"

DEFAULT_MIN_SCORE = 2
DEFAULT_MAX_RULES = 1000


@dataclass(frozen=True)
class ContextProbe:
    """One contextual condition slot.

    ``eojeol_offset`` 0 probes within the current Eojeol (anchor F = the
    preceding morpheme, L = the following one); any other offset probes the
    first (F) or last (L) morpheme of the Eojeol that many steps away.
    """

    eojeol_offset: int
    anchor: str
    feature: str

    def __post_init__(self):
        if not -3 <= self.eojeol_offset <= 3:
            raise RuleFormatError(f"probe offset {self.eojeol_offset} out of range")
        if self.anchor not in (ANCHOR_FIRST, ANCHOR_LAST):
            raise RuleFormatError(f"bad probe anchor {self.anchor!r}")
        if self.feature not in (FEATURE_TAG, FEATURE_LEXEME):
            raise RuleFormatError(f"bad probe feature {self.feature!r}")
        if self.eojeol_offset == 0 and self.feature != FEATURE_TAG:
            raise RuleFormatError("within-Eojeol probes test tags only")

    def mnemonic(self) -> str:
        if self.eojeol_offset == 0:
            return "WPMT" if self.anchor == ANCHOR_FIRST else "WNMT"
        side = "P" if self.eojeol_offset < 0 else "N"
        return f"{side}{abs(self.eojeol_offset)}{self.anchor}M{self.feature}"

    def __str__(self):
        return self.mnemonic()


_PROBE_RE = re.compile(r"^([PN])([123])([FL])M([TO])$")


def parse_probe(text: str) -> ContextProbe:
    if text == "WPMT":
        return ContextProbe(0, ANCHOR_FIRST, FEATURE_TAG)
    if text == "WNMT":
        return ContextProbe(0, ANCHOR_LAST, FEATURE_TAG)
    m = _PROBE_RE.match(text)
    if not m:
        raise RuleFormatError(f"bad probe mnemonic {text!r}")
    side, dist, anchor, feature = m.groups()
    offset = int(dist) if side == "N" else -int(dist)
    return ContextProbe(offset, anchor, feature)


@dataclass(frozen=True)
class RuleSchema:
    """A template naming which probes an instantiated rule may test."""

    probes: tuple[ContextProbe, ...]

    def __post_init__(self):
        if not 1 <= len(self.probes) <= 2:
            raise RuleFormatError("a schema tests one or two probes")
        if len(set(self.probes)) != len(self.probes):
            raise RuleFormatError("duplicate probes within a schema")

    def __str__(self):
        return "+".join(p.mnemonic() for p in self.probes)


# The seven named single-probe schemas that also seed the two-probe family.
_PAIRABLE = ("N1FMT", "P1LMT", "N2FMT", "N3FMT", "P1LMO", "P1FMO", "N1FMO")


def enumerate_schemas() -> tuple[RuleSchema, ...]:
    """The fixed, deterministic schema family.

    12 Eojeol-level tag probes (offsets +-1..+-3 x first/last), 2
    within-Eojeol tag probes, 4 lexical-form probes at offsets +-1, plus
    every unordered pair of the seven classic schemas.
    """
    singles = []
    for offset in (-3, -2, -1, 1, 2, 3):
        for anchor in (ANCHOR_FIRST, ANCHOR_LAST):
            singles.append(ContextProbe(offset, anchor, FEATURE_TAG))
    singles.append(ContextProbe(0, ANCHOR_FIRST, FEATURE_TAG))
    singles.append(ContextProbe(0, ANCHOR_LAST, FEATURE_TAG))
    for offset in (-1, 1):
        for anchor in (ANCHOR_FIRST, ANCHOR_LAST):
            singles.append(ContextProbe(offset, anchor, FEATURE_LEXEME))
    schemas = [RuleSchema((p,)) for p in singles]
    pairable = [parse_probe(m) for m in _PAIRABLE]
    for a, b in itertools.combinations(pairable, 2):
        schemas.append(RuleSchema((a, b)))
    return tuple(schemas)


@dataclass(frozen=True)
class Rule:
    """Rewrite ``lexeme/current_tag`` to ``corrected_tag`` when conditions hold."""

    lexeme: str
    current_tag: str
    conditions: tuple[tuple[ContextProbe, str], ...]
    corrected_tag: str
    effectiveness: int = 0

    def __post_init__(self):
        if self.corrected_tag == self.current_tag:
            raise RuleFormatError("rule must change the tag")
        if not self.conditions:
            raise RuleFormatError("rule needs at least one condition")

    def body(self) -> str:
        conds = " & ".join(f"{p.mnemonic()}={v}" for p, v in self.conditions)
        return f"{self.lexeme}/{self.current_tag} | {conds} -> {self.corrected_tag}"

    def __str__(self):
        return f"{self.body()} # score={self.effectiveness}"


@dataclass(frozen=True)
class RuleList:
    """Ordered correction rules; order is the learned application order."""

    rules: tuple[Rule, ...]

    def __iter__(self):
        return iter(self.rules)

    def __len__(self):
        return len(self.rules)


def parse_rule(line: str) -> Rule:
    text = line.strip()
    body, sep, score_part = text.partition(" # score=")
    if not sep:
        raise RuleFormatError(f"missing score suffix in {line!r}")
    try:
        effectiveness = int(score_part)
    except ValueError as exc:
        raise RuleFormatError(f"bad score in {line!r}") from exc
    left, sep, corrected = body.partition(" -> ")
    if not sep or not corrected:
        raise RuleFormatError(f"missing '->' action in {line!r}")
    head, sep, conds_text = left.partition(" | ")
    if not sep:
        raise RuleFormatError(f"missing '|' separator in {line!r}")
    lexeme, sep, current = head.rpartition("/")
    if not sep or not lexeme or not current:
        raise RuleFormatError(f"bad rule head {head!r}")
    conditions = []
    for chunk in conds_text.split(" & "):
        probe_text, sep, value = chunk.partition("=")
        if not sep or not value:
            raise RuleFormatError(f"bad condition {chunk!r}")
        conditions.append((parse_probe(probe_text), value))
    return Rule(lexeme, current, tuple(conditions), corrected, effectiveness)


def save_rules(rules: RuleList, path) -> None:
    with io.open(path, "w", encoding="utf-8") as fh:
        for rule in rules:
            fh.write(f"{rule}\n")


def load_rules(path) -> RuleList:
    out = []
    with io.open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            try:
                out.append(parse_rule(line))
            except RuleFormatError as exc:
                raise RuleFormatError(str(exc), path=str(path), line_no=line_no) from exc
    return RuleList(tuple(out))


# ---------------------------------------------------------------------------
# Matching and application

def _probe_value(tags, lexemes, e, m, probe: ContextProbe):
    """Observed probe value at a site, or None when out of range."""
    if probe.eojeol_offset == 0:
        j = m - 1 if probe.anchor == ANCHOR_FIRST else m + 1
        if 0 <= j < len(tags[e]):
            return tags[e][j]
        return None
    te = e + probe.eojeol_offset
    if not 0 <= te < len(tags):
        return None
    idx = 0 if probe.anchor == ANCHOR_FIRST else len(tags[te]) - 1
    if probe.feature == FEATURE_TAG:
        return tags[te][idx]
    return lexemes[te][idx]


def _apply_rule_inplace(rule: Rule, tags, lexemes):
    """One left-to-right pass; later positions see earlier rewrites."""
    fired = []
    for e in range(len(tags)):
        row = tags[e]
        lex_row = lexemes[e]
        for m in range(len(row)):
            if lex_row[m] != rule.lexeme or row[m] != rule.current_tag:
                continue
            ok = True
            for probe, required in rule.conditions:
                if _probe_value(tags, lexemes, e, m, probe) != required:
                    ok = False
                    break
            if ok:
                row[m] = rule.corrected_tag
                fired.append((e, m))
    return fired


def apply_rules(rules: RuleList, tagged: TaggedSentence) -> TaggedSentence:
    """Apply rules in order to one sentence; only tag fields change."""
    tags = [[t for _, t in eojeol.pairs] for eojeol in tagged.eojeols]
    lexemes = [[m.lemma for m, _ in eojeol.pairs] for eojeol in tagged.eojeols]
    for rule in rules:
        _apply_rule_inplace(rule, tags, lexemes)
    return tagged.with_tags(tags)


def apply_rules_corpus(rules: RuleList, sentences) -> list[TaggedSentence]:
    return [apply_rules(rules, s) for s in sentences]


# ---------------------------------------------------------------------------
# Learning

def score_rule(rule: Rule, tags, lexemes, gold_tags, sentence_ids=None):
    """Realized (net, raw) correction counts of applying ``rule`` corpus-wide.

    Uses the same in-place application semantics as ``apply_rules``, so the
    net score of a rule equals the accuracy change it would cause.
    """
    net = 0
    raw = 0
    ids = range(len(tags)) if sentence_ids is None else sentence_ids
    for s in ids:
        work = [list(row) for row in tags[s]]
        fired = _apply_rule_inplace(rule, work, lexemes[s])
        for e, m in fired:
            gold = gold_tags[s][e][m]
            if gold == rule.corrected_tag:
                net += 1
                raw += 1
            elif gold == rule.current_tag:
                net -= 1
    return net, raw


def _check_parallel(first_tagged, gold):
    if len(first_tagged) != len(gold):
        raise EvaluationError(
            f"corpora differ in sentence count: {len(first_tagged)} vs {len(gold)}")
    for si, (sys_s, gold_s) in enumerate(zip(first_tagged, gold)):
        sys_lemmas = [[m.lemma for m, _ in e.pairs] for e in sys_s.eojeols]
        gold_lemmas = [[m.lemma for m, _ in e.pairs] for e in gold_s.eojeols]
        if sys_lemmas != gold_lemmas:
            raise EvaluationError(
                f"sentence {si}: segmentation differs between tagger output and gold")


def learn_rules(first_tagged, gold, schemas=None,
                min_score: int = DEFAULT_MIN_SCORE,
                max_rules: int = DEFAULT_MAX_RULES) -> RuleList:
    """Greedy error-driven rule learning against a parallel gold corpus."""
    if min_score < 1:
        raise ValueError("min_score must be >= 1")
    if max_rules < 0:
        raise ValueError("max_rules must be >= 0")
    first_tagged = list(first_tagged)
    gold = list(gold)
    _check_parallel(first_tagged, gold)
    if schemas is None:
        schemas = enumerate_schemas()

    tags = [[[t for _, t in e.pairs] for e in s.eojeols] for s in first_tagged]
    lexemes = [[[m.lemma for m, _ in e.pairs] for e in s.eojeols] for s in first_tagged]
    gold_tags = [[[t for _, t in e.pairs] for e in s.eojeols] for s in gold]

    learned = []
    while len(learned) < max_rules:
        sites = [
            (s, e, m)
            for s in range(len(tags))
            for e in range(len(tags[s]))
            for m in range(len(tags[s][e]))
            if tags[s][e][m] != gold_tags[s][e][m]
        ]
        if not sites:
            break

        occurrences: dict[tuple[str, str], list[int]] = {}
        for s in range(len(tags)):
            for e in range(len(tags[s])):
                for m in range(len(tags[s][e])):
                    key = (lexemes[s][e][m], tags[s][e][m])
                    bucket = occurrences.setdefault(key, [])
                    if not bucket or bucket[-1] != s:
                        bucket.append(s)

        candidates: dict[Rule, None] = {}
        for s, e, m in sites:
            lexeme = lexemes[s][e][m]
            current = tags[s][e][m]
            corrected = gold_tags[s][e][m]
            for schema in schemas:
                conditions = []
                for probe in schema.probes:
                    value = _probe_value(tags[s], lexemes[s], e, m, probe)
                    if value is None:
                        conditions = None
                        break
                    conditions.append((probe, value))
                if conditions is None:
                    continue
                candidates.setdefault(
                    Rule(lexeme, current, tuple(conditions), corrected), None)

        best = None
        for rule in candidates:
            ids = occurrences.get((rule.lexeme, rule.current_tag), ())
            net, raw = score_rule(rule, tags, lexemes, gold_tags, ids)
            key = (-net, -raw, rule.body())
            if best is None or key < best[0]:
                best = (key, rule, net)
        if best is None or best[2] < min_score:
            break
        _, rule, net = best
        learned.append(replace(rule, effectiveness=net))
        for s in range(len(tags)):
            _apply_rule_inplace(rule, tags[s], lexemes[s])
    return RuleList(tuple(learned))
