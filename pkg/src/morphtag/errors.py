"""Exception hierarchy shared across the package.

CLI exit codes map onto these classes: segmentation failures exit 2,
decode/training failures exit 3, resource-file format problems exit 4.
"""


class MorphtagError(Exception):
    """Base class for all errors raised by this package."""


class FileFormatError(MorphtagError):
    """A resource file does not conform to its documented format."""

    def __init__(self, message, path=None, line_no=None):
        self.path = path
        self.line_no = line_no
        prefix = ""
        if path is not None:
            prefix = f"{path}:"
            if line_no is not None:
                prefix += f"{line_no}:"
            prefix += " "
        elif line_no is not None:
            prefix = f"line {line_no}: "
        super().__init__(prefix + message)


class TagPathError(MorphtagError):
    """A hierarchical tag path could not be parsed or is malformed."""


class ProjectionError(FileFormatError):
    """A tag-set projection is malformed (file or in-memory rules)."""


class LexiconError(FileFormatError):
    """Dictionary or connectivity file is malformed or inconsistent."""


class CorpusError(FileFormatError):
    """A tagged-corpus file is malformed."""


class ModelFormatError(FileFormatError):
    """A model file is corrupt or violates normalization invariants."""


class RuleFormatError(FileFormatError):
    """A rules file line could not be parsed."""


class SegmentationFailure(MorphtagError):
    """No legal morpheme cover exists for an Eojeol.

    ``matched_up_to`` is the furthest character position reachable by any
    legal partial cover; it points at the out-of-vocabulary region.
    """

    def __init__(self, eojeol, matched_up_to, eojeol_index=None):
        self.eojeol = eojeol
        self.matched_up_to = matched_up_to
        self.eojeol_index = eojeol_index
        where = f" (eojeol #{eojeol_index})" if eojeol_index is not None else ""
        super().__init__(
            f"no legal segmentation for {eojeol!r}{where}; "
            f"matched up to character {matched_up_to}"
        )


class DecodeFailure(MorphtagError):
    """Every tag sequence for the input is structurally forbidden."""


class TrainingError(MorphtagError):
    """Model training was given unusable inputs or parameters."""


class EvaluationError(MorphtagError):
    """System and gold corpora cannot be compared."""


class SynthesisError(MorphtagError):
    """A synthetic-corpus specification is invalid."""
