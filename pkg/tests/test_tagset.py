import pytest
from hypothesis import given, strategies as st

from morphtag.errors import ProjectionError, TagPathError
from morphtag.tagset import (TagPath, TagsetProjection, parse_tag_path, project,
                             projection_from_file, projection_from_text,
                             projection_to_file, serialize_projection)

SEGMENT = st.text(alphabet="abcdefg-", min_size=1, max_size=6).filter(lambda s: s.strip() == s)
PATHS = st.lists(SEGMENT, min_size=1, max_size=5).map(lambda segs: TagPath(tuple(segs)))


def test_parse_full_hierarchy_path():
    path = parse_tag_path("nominal:noun:proper-noun:person-name:no-final-consonant")
    assert len(path.segments) == 5
    assert str(path) == "nominal:noun:proper-noun:person-name:no-final-consonant"


def test_parse_single_segment():
    assert parse_tag_path("nominal").segments == ("nominal",)


def test_parse_round_trip():
    assert str(parse_tag_path("predicate:verb")) == "predicate:verb"


def test_parse_strips_redundant_whitespace():
    assert str(parse_tag_path("  a : b :c ")) == "a:b:c"


@pytest.mark.parametrize("bad", ["", "   ", "a::b", ":a", "a:"])
def test_parse_errors(bad):
    with pytest.raises(TagPathError):
        parse_tag_path(bad)


def test_parse_error_names_position():
    with pytest.raises(TagPathError, match="position 1"):
        parse_tag_path("a::b")


def test_project_first_prefix_wins():
    proj = TagsetProjection(
        ((parse_tag_path("nominal:noun:proper-noun"), "MP"),
         (parse_tag_path("nominal"), "MC")),
        "XX",
    )
    path = parse_tag_path("nominal:noun:proper-noun:person-name")
    assert project(path, proj) == "MP"
    assert project(parse_tag_path("nominal:noun:common"), proj) == "MC"
    assert project(parse_tag_path("predicate:verb"), proj) == "XX"


def test_project_exact_match_counts_as_prefix():
    proj = TagsetProjection(((parse_tag_path("a:b"), "L"),), "XX")
    assert project(parse_tag_path("a:b"), proj) == "L"


def test_project_rule_order_decides():
    # Derived by enumerating both orderings of a 2-rule projection by hand:
    # particle:case is more specific, so listing it first wins; reversed,
    # the bare particle prefix shadows it.
    case_first = TagsetProjection(
        ((parse_tag_path("particle:case"), "jC"), (parse_tag_path("particle"), "jS")),
        "XX",
    )
    general_first = TagsetProjection(
        ((parse_tag_path("particle"), "jS"), (parse_tag_path("particle:case"), "jC")),
        "XX",
    )
    path = parse_tag_path("particle:case")
    assert project(path, case_first) == "jC"
    assert project(path, general_first) == "jS"


TABLE_ROWS = [
    ("nominal:noun:proper", "MP"), ("nominal:noun:bound", "MD"),
    ("nominal:noun:common", "MC"), ("nominal:numeral", "S"),
    ("nominal:pronoun", "T"), ("predicate:verb", "D"),
    ("predicate:adjective", "H"), ("modifier:adnoun", "G"),
    ("modifier:adverb", "B"), ("particle:predicative", "y"),
    ("particle:case", "jC"), ("particle:conjunctive", "jJ"),
    ("particle:auxiliary", "jS"), ("ending:conjunctive", "mC"),
    ("ending:final", "mT"), ("ending:derivative", "mj"),
    ("affix:suffix", "-"), ("affix:prefix", "+"), ("ending:prefinal", "e"),
]


def test_projection_file_nineteen_labels(tmp_path):
    lines = [f"{prefix}\t{label}" for prefix, label in TABLE_ROWS]
    lines.append("DEFAULT\tXX")
    f = tmp_path / "proj.tsv"
    f.write_text("\n".join(lines) + "\n", encoding="utf-8")
    proj = projection_from_file(f)
    assert len(proj.rules) == 19
    assert len([lab for lab in proj.label_inventory() if lab != "XX"]) == 19


def test_projection_empty_rules_all_default():
    proj = projection_from_text("DEFAULT\tX\n")
    for text in ("a", "a:b", "zzz:q"):
        assert proj.project(parse_tag_path(text)) == "X"


def test_projection_shuffled_lines_same_behavior_when_disjoint():
    # Brute force over every path in a toy hierarchy: with non-overlapping
    # prefixes, rule order cannot matter.
    rules = [("na:x", "A"), ("nb:y", "B"), ("nc", "C")]
    fwd = projection_from_text(
        "\n".join(f"{p}\t{l}" for p, l in rules) + "\nDEFAULT\tZ\n")
    rev = projection_from_text(
        "\n".join(f"{p}\t{l}" for p, l in reversed(rules)) + "\nDEFAULT\tZ\n")
    hierarchy = ["na", "na:x", "na:x:1", "nb", "nb:y:2", "nc", "nc:q", "other"]
    for text in hierarchy:
        path = parse_tag_path(text)
        assert fwd.project(path) == rev.project(path)


def test_projection_duplicate_prefix_rejected():
    with pytest.raises(ProjectionError):
        projection_from_text("a\tX\na\tY\nDEFAULT\tZ\n")


def test_projection_missing_default_rejected():
    with pytest.raises(ProjectionError, match="DEFAULT"):
        projection_from_text("a\tX\n")


def test_projection_duplicate_default_rejected():
    with pytest.raises(ProjectionError):
        projection_from_text("DEFAULT\tX\nDEFAULT\tY\n")


def test_projection_label_with_whitespace_rejected():
    with pytest.raises(ProjectionError):
        TagsetProjection(((parse_tag_path("a"), "b c"),), "X")


def test_projection_file_round_trip(tmp_path):
    text = "a:b\tAB\nc\tC\nDEFAULT\tXX\n"
    f = tmp_path / "p.tsv"
    f.write_text(text, encoding="utf-8")
    proj = projection_from_file(f)
    out = tmp_path / "q.tsv"
    projection_to_file(proj, out)
    assert out.read_text(encoding="utf-8") == text


@given(PATHS, st.lists(SEGMENT, min_size=1, max_size=3))
def test_prefix_rule_matches_every_extension(path, extra):
    proj = TagsetProjection(((path, "HIT"),), "MISS")
    extended = TagPath(path.segments + tuple(extra))
    assert proj.project(extended) == "HIT"
    assert proj.project(path) == "HIT"


@given(PATHS)
def test_projection_is_deterministic(path):
    proj = TagsetProjection(
        ((parse_tag_path("a"), "A"), (parse_tag_path("b:c"), "BC")), "Z")
    assert proj.project(path) == proj.project(TagPath(tuple(path.segments)))


@given(st.lists(st.tuples(PATHS, st.sampled_from(["A", "B", "C"])), max_size=5))
def test_serialized_projection_behaves_identically(rules):
    seen = set()
    unique = []
    for prefix, label in rules:
        if str(prefix) not in seen:
            seen.add(str(prefix))
            unique.append((prefix, label))
    proj = TagsetProjection(tuple(unique), "Z")
    reparsed = projection_from_text(serialize_projection(proj))
    probes = [p for p, _ in unique] + [parse_tag_path("zz:unmatched")]
    for path in probes:
        assert proj.project(path) == reparsed.project(path)
