"""Dictionary-driven morpheme segmentation of Eojeols.

An Eojeol is scanned left to right, character by character, against a trie
of dictionary surface forms.  Every full cover of the Eojeol whose adjacent
morphemes pass the connectivity table becomes one candidate analysis; the
sentence lattice is the per-Eojeol list of those candidates.  Spelling
changes are handled by enrolling inflected surface forms in the dictionary
mapped to their original lemma, so no phonological machinery lives here.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

from .errors import LexiconError, SegmentationFailure
from .tagset import TagPath, TagsetProjection, parse_tag_path

DEFAULT_CANDIDATE_CAP = 32

MODE_RESTRICT = "restrict"
MODE_ALLOW_ALL = "allow-all"


@dataclass(frozen=True)
class LexEntry:
    """One dictionary entry: a surface form with its lemma and full tag path.

    ``surface`` is the form as it appears in text (possibly inflected);
    ``lemma`` is the original, uninflected form that gets tagged.
    """

    surface: str
    lemma: str
    tag_path: TagPath

    def __post_init__(self):
        if not self.surface:
            raise LexiconError("entry with empty surface")
        if not self.lemma:
            raise LexiconError(f"entry {self.surface!r} with empty lemma")


@dataclass(frozen=True)
class Morpheme:
    """A segmented morpheme with its dictionary tag and projected short tag."""

    surface: str
    lemma: str
    tag_path: TagPath
    projected_tag: str

    def key(self) -> str:
        """Emission key used by the tagging model: ``<lemma>/<projected-tag>``."""
        return f"{self.lemma}/{self.projected_tag}"


@dataclass(frozen=True)
class EojeolAnalysis:
    """All candidate morpheme sequences for one Eojeol."""

    eojeol_surface: str
    candidates: tuple[tuple[Morpheme, ...], ...]


@dataclass(frozen=True)
class SentenceLattice:
    """Per-Eojeol candidate analyses; sentence candidates are their product."""

    eojeols: tuple[EojeolAnalysis, ...]

    def candidate_count(self) -> int:
        return math.prod(len(e.candidates) for e in self.eojeols)


class ConnectivityTable:
    """Pairwise adjacency constraints over tag-path prefixes.

    A pair (L, R) permits adjacency of morphemes whose tag paths have L and
    R as prefixes.  In ``allow-all`` mode every adjacency is legal, which
    lets the tagger run without morphotactic data.
    """

    def __init__(self, mode: str, pairs: tuple[tuple[TagPath, TagPath], ...] = ()):
        if mode not in (MODE_RESTRICT, MODE_ALLOW_ALL):
            raise LexiconError(f"unknown connectivity mode {mode!r}")
        self.mode = mode
        self.pairs = tuple(pairs)

    def allows(self, left: TagPath, right: TagPath) -> bool:
        if self.mode == MODE_ALLOW_ALL:
            return True
        for lp, rp in self.pairs:
            if lp.is_prefix_of(left) and rp.is_prefix_of(right):
                return True
        return False

    @classmethod
    def allow_all(cls) -> "ConnectivityTable":
        return cls(MODE_ALLOW_ALL)


class Lexicon:
    """Surface-form dictionary indexed for left-to-right prefix lookup."""

    def __init__(self, entries, connectivity: ConnectivityTable | None = None):
        self.entries: tuple[LexEntry, ...] = tuple(entries)
        self.connectivity = connectivity or ConnectivityTable.allow_all()
        self._trie: dict = {}
        self._by_surface: dict[str, list[LexEntry]] = {}
        seen = set()
        for entry in self.entries:
            triple = (entry.surface, entry.lemma, str(entry.tag_path))
            if triple in seen:
                raise LexiconError(f"duplicate entry {triple!r}")
            seen.add(triple)
            node = self._trie
            for ch in entry.surface:
                node = node.setdefault(ch, {})
            node.setdefault(None, []).append(entry)
            self._by_surface.setdefault(entry.surface, []).append(entry)

    def __len__(self):
        return len(self.entries)

    def lookup(self, surface: str) -> tuple[LexEntry, ...]:
        """All entries whose surface equals ``surface``, in dictionary order."""
        return tuple(self._by_surface.get(surface, ()))

    def matches_from(self, text: str, start: int):
        """Yield (end, entries) for every dictionary surface matching at ``start``."""
        node = self._trie
        out = []
        for pos in range(start, len(text)):
            node = node.get(text[pos])
            if node is None:
                break
            hit = node.get(None)
            if hit:
                out.append((pos + 1, hit))
        return out

    def allowed_projected_tags(self, surface: str, lemma: str,
                               proj: TagsetProjection) -> tuple[str, ...]:
        """Distinct projected tags the dictionary allows for (surface, lemma)."""
        out = []
        for entry in self._by_surface.get(surface, ()):
            if entry.lemma != lemma:
                continue
            label = proj.project(entry.tag_path)
            if label not in out:
                out.append(label)
        return tuple(out)

    def surface_tag_arity(self, surface: str, proj: TagsetProjection | None = None) -> int:
        """Number of distinct tags a surface can carry (dictionary ambiguity)."""
        tags = set()
        for entry in self._by_surface.get(surface, ()):
            tags.add(proj.project(entry.tag_path) if proj else str(entry.tag_path))
        return len(tags)


def load_dictionary(path) -> tuple[LexEntry, ...]:
    entries = []
    with io.open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) != 3:
                raise LexiconError(
                    f"expected '<surface><TAB><lemma><TAB><tag-path>', got {line!r}",
                    path=str(path), line_no=line_no,
                )
            surface, lemma, raw_path = fields
            try:
                entries.append(LexEntry(surface, lemma, parse_tag_path(raw_path)))
            except Exception as exc:
                raise LexiconError(str(exc), path=str(path), line_no=line_no) from exc
    return tuple(entries)


def load_connectivity(path) -> ConnectivityTable:
    mode = None
    pairs = []
    with io.open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            if mode is None:
                if line == f"MODE={MODE_RESTRICT}":
                    mode = MODE_RESTRICT
                elif line == f"MODE={MODE_ALLOW_ALL}":
                    mode = MODE_ALLOW_ALL
                else:
                    raise LexiconError(
                        "first line must be 'MODE=restrict' or 'MODE=allow-all'",
                        path=str(path), line_no=line_no,
                    )
                continue
            fields = line.split("\t")
            if len(fields) != 2:
                raise LexiconError(
                    f"expected '<left-prefix><TAB><right-prefix>', got {line!r}",
                    path=str(path), line_no=line_no,
                )
            try:
                pairs.append((parse_tag_path(fields[0]), parse_tag_path(fields[1])))
            except Exception as exc:
                raise LexiconError(str(exc), path=str(path), line_no=line_no) from exc
    if mode is None:
        raise LexiconError("missing MODE line", path=str(path))
    return ConnectivityTable(mode, tuple(pairs))


def load_lexicon(dict_file, conn_file) -> Lexicon:
    """Load dictionary and connectivity files into one queryable Lexicon."""
    return Lexicon(load_dictionary(dict_file), load_connectivity(conn_file))


def save_dictionary(entries, path) -> None:
    with io.open(path, "w", encoding="utf-8") as fh:
        for e in entries:
            fh.write(f"{e.surface}\t{e.lemma}\t{e.tag_path}\n")


def save_connectivity(table: ConnectivityTable, path) -> None:
    with io.open(path, "w", encoding="utf-8") as fh:
        fh.write(f"MODE={table.mode}\n")
        for lp, rp in table.pairs:
            fh.write(f"{lp}\t{rp}\n")


def tokenize(text: str) -> list[str]:
    """Split raw text into Eojeols on Unicode whitespace."""
    return text.split()


def _candidate_sort_key(candidate: tuple[Morpheme, ...]):
    return (
        len(candidate),
        tuple(str(m.tag_path) for m in candidate),
        tuple(m.surface for m in candidate),
        tuple(m.lemma for m in candidate),
    )


def segment(eojeol: str, lex: Lexicon, proj: TagsetProjection,
            cap: int = DEFAULT_CANDIDATE_CAP) -> EojeolAnalysis:
    """Enumerate all legal morpheme covers of one Eojeol.

    Candidates are every full cover of the Eojeol by dictionary surfaces in
    which each adjacent entry pair passes the connectivity table.  If more
    than ``cap`` covers exist, the ``cap`` candidates with the fewest
    morphemes are kept (ties broken by serialized tag sequence), so raising
    the cap never drops a previously emitted candidate.
    """
    if not eojeol:
        raise ValueError("empty eojeol")
    if cap < 1:
        raise ValueError("cap must be >= 1")

    n = len(eojeol)
    matches = [lex.matches_from(eojeol, i) for i in range(n)]
    conn = lex.connectivity

    memo: dict[int, list[tuple[LexEntry, ...]]] = {n: [()]}

    def covers(i: int) -> list[tuple[LexEntry, ...]]:
        got = memo.get(i)
        if got is not None:
            return got
        out = []
        for end, hit in matches[i]:
            for rest in covers(end):
                for entry in hit:
                    if rest and not conn.allows(entry.tag_path, rest[0].tag_path):
                        continue
                    out.append((entry,) + rest)
        memo[i] = out
        return out

    full = covers(0)
    if not full:
        raise SegmentationFailure(eojeol, _furthest_reach(eojeol, matches, conn))

    proj_cache: dict[str, str] = {}

    def projected(tp: TagPath) -> str:
        key = str(tp)
        label = proj_cache.get(key)
        if label is None:
            label = proj.project(tp)
            proj_cache[key] = label
        return label

    candidates = []
    for cover in full:
        candidates.append(tuple(
            Morpheme(e.surface, e.lemma, e.tag_path, projected(e.tag_path))
            for e in cover
        ))
    candidates.sort(key=_candidate_sort_key)
    return EojeolAnalysis(eojeol, tuple(candidates[:cap]))


def _furthest_reach(eojeol, matches, conn) -> int:
    """Furthest character position reachable by any legal partial cover."""
    best = 0
    seen = set()
    stack = [(0, None)]
    while stack:
        pos, last_path = stack.pop()
        for end, hit in matches[pos]:
            for entry in hit:
                if last_path is not None and not conn.allows(last_path, entry.tag_path):
                    continue
                best = max(best, end)
                state = (end, str(entry.tag_path))
                if end < len(eojeol) and state not in seen:
                    seen.add(state)
                    stack.append((end, entry.tag_path))
    return best


def analyze_sentence(eojeols, lex: Lexicon, proj: TagsetProjection,
                     cap: int = DEFAULT_CANDIDATE_CAP) -> SentenceLattice:
    """Segment each Eojeol of a sentence; fails with the offending index."""
    if not eojeols:
        raise ValueError("empty eojeol list")
    analyses = []
    for idx, eojeol in enumerate(eojeols):
        try:
            analyses.append(segment(eojeol, lex, proj, cap))
        except SegmentationFailure as exc:
            raise SegmentationFailure(exc.eojeol, exc.matched_up_to, eojeol_index=idx) from exc
    return SentenceLattice(tuple(analyses))
