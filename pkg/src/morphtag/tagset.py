"""Hierarchical POS symbols and their projection onto short application tags.

A full POS symbol is a path of category labels, e.g.
``nominal:noun:proper-noun:person-name``.  Applications work with a small
tag-set obtained by mapping each path onto a short label via an ordered
list of prefix rules (first matching prefix wins).
"""

from __future__ import annotations

import io
from dataclasses import dataclass

from .errors import ProjectionError, TagPathError

SEPARATOR = ":"
DEFAULT_KEYWORD = "DEFAULT"


@dataclass(frozen=True)
class TagPath:
    """A path in the POS symbol hierarchy."""

    segments: tuple[str, ...]

    def __post_init__(self):
        if not self.segments:
            raise TagPathError("a tag path needs at least one segment")
        for i, seg in enumerate(self.segments):
            if not seg:
                raise TagPathError(f"empty segment at position {i}")
            if SEPARATOR in seg:
                raise TagPathError(f"segment at position {i} contains {SEPARATOR!r}")

    def __str__(self):
        return SEPARATOR.join(self.segments)

    def __len__(self):
        return len(self.segments)

    def is_prefix_of(self, other: "TagPath") -> bool:
        n = len(self.segments)
        return n <= len(other.segments) and other.segments[:n] == self.segments


def parse_tag_path(text: str) -> TagPath:
    """Parse ``a:b:c`` into a TagPath, stripping redundant whitespace."""
    if text is None or not text.strip():
        raise TagPathError("empty tag path")
    raw = text.strip().split(SEPARATOR)
    segments = []
    for i, seg in enumerate(raw):
        seg = seg.strip()
        if not seg:
            raise TagPathError(f"empty segment at position {i} in {text!r}")
        segments.append(seg)
    return TagPath(tuple(segments))


@dataclass(frozen=True)
class Tag:
    """A short application tag, the output of a projection."""

    label: str

    def __str__(self):
        return self.label


@dataclass(frozen=True)
class TagsetProjection:
    """Ordered prefix rules mapping tag paths onto short labels.

    The first rule whose prefix is a prefix of the input path wins;
    ``default_label`` is the total fallback, so projection never fails.
    """

    rules: tuple[tuple[TagPath, str], ...]
    default_label: str

    def __post_init__(self):
        seen = set()
        for prefix, label in self.rules:
            _check_label(label)
            key = str(prefix)
            if key in seen:
                raise ProjectionError(f"duplicate projection prefix {key!r}")
            seen.add(key)
        _check_label(self.default_label)

    def project(self, path: TagPath) -> str:
        for prefix, label in self.rules:
            if prefix.is_prefix_of(path):
                return label
        return self.default_label

    def label_inventory(self) -> tuple[str, ...]:
        """All labels this projection can produce, in rule order, deduplicated."""
        out = []
        for _, label in self.rules:
            if label not in out:
                out.append(label)
        if self.default_label not in out:
            out.append(self.default_label)
        return tuple(out)


def _check_label(label: str) -> None:
    if not label:
        raise ProjectionError("empty projection label")
    if any(ch.isspace() for ch in label):
        raise ProjectionError(f"projection label {label!r} contains whitespace")


def project(path: TagPath, proj: TagsetProjection) -> str:
    """Project a full tag path onto the active short tag-set."""
    return proj.project(path)


def projection_from_text(text: str, source: str = "<string>") -> TagsetProjection:
    rules = []
    default_label = None
    for line_no, line in enumerate(text.splitlines(), start=1):
        line = line.rstrip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 2:
            raise ProjectionError(
                f"expected '<prefix><TAB><label>', got {line!r}",
                path=source, line_no=line_no,
            )
        left, label = fields[0].strip(), fields[1].strip()
        if left == DEFAULT_KEYWORD:
            if default_label is not None:
                raise ProjectionError("duplicate DEFAULT line", path=source, line_no=line_no)
            default_label = label
            continue
        try:
            prefix = parse_tag_path(left)
        except TagPathError as exc:
            raise ProjectionError(str(exc), path=source, line_no=line_no) from exc
        rules.append((prefix, label))
    if default_label is None:
        raise ProjectionError("missing DEFAULT line", path=source)
    try:
        return TagsetProjection(tuple(rules), default_label)
    except ProjectionError as exc:
        raise ProjectionError(str(exc), path=source) from exc


def projection_from_file(path) -> TagsetProjection:
    with io.open(path, "r", encoding="utf-8") as fh:
        return projection_from_text(fh.read(), source=str(path))


def serialize_projection(proj: TagsetProjection) -> str:
    """Canonical text form: rules in order, DEFAULT line last."""
    lines = [f"{prefix}\t{label}" for prefix, label in proj.rules]
    lines.append(f"{DEFAULT_KEYWORD}\t{proj.default_label}")
    return "\n".join(lines) + "\n"


def projection_to_file(proj: TagsetProjection, path) -> None:
    with io.open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_projection(proj))
