"""Command-line front end: analyze, train, tag, learn-rules, eval, synth, split.

The CLI only parses arguments, resolves the config file, and formats
output; all behavior lives in the library modules.  Exit codes: 0 ok,
1 usage, 2 segmentation failure, 3 decode/training failure, 4 file format.
"""

from __future__ import annotations

import argparse
import dataclasses
import io
import os
import sys
from dataclasses import dataclass

from . import corpus as corpus_mod
from . import hmm as hmm_mod
from . import synth as synth_mod
from . import tbl as tbl_mod
from .errors import (DecodeFailure, FileFormatError, MorphtagError,
                     SegmentationFailure, TrainingError)
from .lexicon import analyze_sentence, load_lexicon, save_connectivity, save_dictionary, tokenize
from .tagset import projection_from_file, projection_to_file


@dataclass
class PipelineConfig:
    """Paths and numeric parameters shared by the pipeline commands."""

    lexicon: str | None = None
    connectivity: str | None = None
    projection: str | None = None
    model: str | None = None
    rules: str | None = None
    lambda_trans: float = 0.1
    lambda_emit: float = 0.1
    unk_mass: float = 1e-4
    virtual_unseen: int = 1000
    eojeol_cap: int = 32
    sentence_cap: int = 256
    min_score: int = 2
    max_rules: int = 1000
    train_fraction: float = 0.70
    rules_fraction: float = 0.15
    test_fraction: float = 0.15
    seed: int = 13
    max_iters: int = 20
    tol: float = 1e-4


_CONFIG_FIELDS = {f.name: f for f in dataclasses.fields(PipelineConfig)}


def load_config(path) -> PipelineConfig:
    """Parse a ``key = value`` config file with ``#`` comments."""
    values = {}
    with io.open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            key, sep, value = stripped.partition("=")
            key = key.strip()
            value = value.split("#")[0].strip()
            if not sep or key not in _CONFIG_FIELDS:
                raise ValueError(f"{path}:{line_no}: unknown config line {stripped!r}")
            f = _CONFIG_FIELDS[key]
            if f.type in ("str | None", "str"):
                values[key] = value
            elif f.type == "int":
                values[key] = int(value)
            else:
                values[key] = float(value)
    return PipelineConfig(**values)


def resolve_config(args) -> PipelineConfig:
    """Config-file values overridden by any command-line flags."""
    config = load_config(args.config) if getattr(args, "config", None) else PipelineConfig()
    for name in _CONFIG_FIELDS:
        supplied = getattr(args, name, None)
        if supplied is not None:
            setattr(config, name, supplied)
    return config


def _require_files(*pairs):
    missing = [f"{label} file {path!r}" for label, path in pairs
               if path is None or not os.path.exists(path)]
    if missing:
        raise ValueError("missing " + ", ".join(missing))


def _load_resources(config):
    _require_files(("lexicon", config.lexicon), ("connectivity", config.connectivity),
                   ("projection", config.projection))
    lex = load_lexicon(config.lexicon, config.connectivity)
    proj = projection_from_file(config.projection)
    return lex, proj


def _smoothing(config) -> hmm_mod.Smoothing:
    return hmm_mod.Smoothing(config.lambda_trans, config.lambda_emit,
                             config.unk_mass, config.virtual_unseen)


def _read_sentences(path):
    with io.open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            tokens = tokenize(line)
            if tokens:
                yield tokens


def _open_output(path):
    return io.open(path, "w", encoding="utf-8") if path else sys.stdout


def cmd_analyze(args) -> int:
    config = resolve_config(args)
    lex, proj = _load_resources(config)
    out = _open_output(args.output)
    try:
        for i, tokens in enumerate(_read_sentences(args.input), start=1):
            lattice = analyze_sentence(tokens, lex, proj, config.eojeol_cap)
            out.write(f"# sentence {i}\n")
            for analysis in lattice.eojeols:
                out.write(f"{analysis.eojeol_surface}\n")
                for candidate in analysis.candidates:
                    body = " + ".join(f"{m.lemma}/{m.projected_tag}" for m in candidate)
                    out.write(f"  {body}\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def _em_corpus_from_text(path, lex, proj, cap):
    sentences = []
    for tokens in _read_sentences(path):
        lattice = analyze_sentence(tokens, lex, proj, cap)
        sentences.append(hmm_mod.em_sentence_from_lattice(lattice, lex, proj))
    return sentences


def cmd_train(args) -> int:
    config = resolve_config(args)
    smoothing = _smoothing(config)
    if args.mode == "supervised":
        _require_files(("corpus", args.corpus), ("projection", config.projection))
        proj = projection_from_file(config.projection)
        gold = corpus_mod.read_corpus(args.corpus, proj)
        model = hmm_mod.train_supervised(gold.sentences, proj.label_inventory(), smoothing)
    else:
        lex, proj = _load_resources(config)
        _require_files(("untagged text", args.untagged))
        em_corpus = _em_corpus_from_text(args.untagged, lex, proj, config.eojeol_cap)
        if args.mode == "em":
            _require_files(("model", args.model_in))
            init = hmm_mod.load_model(args.model_in)
        else:  # bootstrap-then-em
            _require_files(("bootstrap corpus", args.corpus))
            gold = corpus_mod.read_corpus(args.corpus, proj)
            init = hmm_mod.train_supervised(gold.sentences, proj.label_inventory(), smoothing)
        model, objectives = hmm_mod.baum_welch(init, em_corpus, config.max_iters, config.tol)
        for value in objectives:
            print(f"{value:.10f}")
    hmm_mod.save_model(model, args.model_out)
    return 0


def cmd_tag(args) -> int:
    config = resolve_config(args)
    lex, proj = _load_resources(config)
    model_path = args.model or config.model
    _require_files(("model", model_path))
    model = hmm_mod.load_model(model_path)
    rules = None
    rules_path = args.rules or config.rules
    if rules_path:
        _require_files(("rules", rules_path))
        rules = tbl_mod.load_rules(rules_path)
    tagged = []
    for tokens in _read_sentences(args.input):
        lattice = analyze_sentence(tokens, lex, proj, config.eojeol_cap)
        sentence = hmm_mod.tag_lattice(model, lattice, config.sentence_cap)
        if rules is not None:
            sentence = tbl_mod.apply_rules(rules, sentence)
        tagged.append(sentence)
    text = corpus_mod.corpus_to_text(tagged)
    out = _open_output(args.output)
    try:
        out.write(text)
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def cmd_learn_rules(args) -> int:
    config = resolve_config(args)
    _require_files(("first-tagged corpus", args.first), ("gold corpus", args.gold))
    first = corpus_mod.read_corpus(args.first)
    gold = corpus_mod.read_corpus(args.gold)
    rules = tbl_mod.learn_rules(first.sentences, gold.sentences,
                                min_score=config.min_score, max_rules=config.max_rules)
    tbl_mod.save_rules(rules, args.output)
    print(f"learned {len(rules)} rules")
    return 0


def cmd_eval(args) -> int:
    config = resolve_config(args)
    _require_files(("gold corpus", args.gold), ("system corpus", args.system),
                   ("lexicon", config.lexicon), ("connectivity", config.connectivity))
    lex = load_lexicon(config.lexicon, config.connectivity)
    proj = projection_from_file(config.projection) if config.projection else None
    gold = corpus_mod.read_corpus(args.gold, proj)
    system = corpus_mod.read_corpus(args.system)
    report = corpus_mod.evaluate(system.sentences, gold, lex, proj)
    baseline = None
    if args.baseline:
        base = corpus_mod.read_corpus(args.baseline)
        baseline = corpus_mod.evaluate(base.sentences, gold, lex, proj)
    print(corpus_mod.format_report_header())
    print(corpus_mod.format_report_row(args.label, report, baseline))
    return 0


def _parse_pair(text, flag):
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"{flag} expects 'MIN,MAX', got {text!r}")
    return int(parts[0]), int(parts[1])


def _parse_perturbation(text) -> synth_mod.PerturbationRule:
    fields = {}
    for chunk in text.split(","):
        key, sep, value = chunk.partition("=")
        if not sep:
            raise ValueError(f"bad --perturb item {chunk!r}")
        fields[key.strip()] = value.strip()
    try:
        rule = synth_mod.PerturbationRule(
            trigger_tag=fields.pop("trigger"),
            new_tag=fields.pop("new"),
            trigger_offset=int(fields.pop("offset", "1")),
            only_if_tag=fields.pop("onlyif", None),
        )
    except KeyError as exc:
        raise ValueError(f"--perturb missing {exc.args[0]!r}") from exc
    if fields:
        raise ValueError(f"--perturb has unknown keys {sorted(fields)}")
    return rule


def cmd_synth(args) -> int:
    spec = synth_mod.SynthSpec(
        n_tags=args.n_tags,
        n_ending_tags=args.n_ending_tags,
        vocab_size=args.vocab,
        ending_vocab=args.ending_vocab,
        ambiguity_rate=args.ambiguity,
        secondary_share=args.secondary_share,
        seed=args.seed if args.seed is not None else 0,
        n_sentences=args.sentences,
        eojeols_per_sentence=_parse_pair(args.eojeols, "--eojeols"),
        morphemes_per_eojeol=_parse_pair(args.morphemes, "--morphemes"),
        word_length=args.word_length,
        transition_weights=None,
        perturbations=tuple(_parse_perturbation(p) for p in args.perturb or ()),
    )
    result = synth_mod.generate_synthetic(spec)
    os.makedirs(args.outdir, exist_ok=True)
    corpus_mod.write_corpus(result.corpus, os.path.join(args.outdir, "corpus.txt"))
    save_dictionary(result.lexicon.entries, os.path.join(args.outdir, "dictionary.tsv"))
    save_connectivity(result.lexicon.connectivity,
                      os.path.join(args.outdir, "connectivity.tsv"))
    projection_to_file(result.projection, os.path.join(args.outdir, "projection.tsv"))
    print(f"sentences {len(result.corpus.sentences)}")
    print(f"morphemes {result.morpheme_count}")
    print(f"perturbed {len(result.perturbed_sites)} {result.perturbed_fraction:.4f}")
    return 0


def cmd_split(args) -> int:
    config = resolve_config(args)
    _require_files(("corpus", args.corpus))
    gold = corpus_mod.read_corpus(args.corpus)
    fractions = (config.train_fraction, config.rules_fraction, config.test_fraction)
    parts = corpus_mod.split_corpus(gold, fractions, config.seed)
    os.makedirs(args.outdir, exist_ok=True)
    names = ("train_em.txt", "train_rules.txt", "test.txt")
    for name, part in zip(names, parts):
        corpus_mod.write_corpus(part, os.path.join(args.outdir, name))
        print(f"{name} {len(part.sentences)}")
    return 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def _add_config_flags(p, *names):
    flags = {
        "lexicon": ("--lexicon", str), "connectivity": ("--connectivity", str),
        "projection": ("--projection", str), "model": ("--model", str),
        "rules": ("--rules", str),
        "lambda_trans": ("--lambda-trans", float), "lambda_emit": ("--lambda-emit", float),
        "unk_mass": ("--unk-mass", float), "virtual_unseen": ("--virtual-unseen", int),
        "eojeol_cap": ("--eojeol-cap", int), "sentence_cap": ("--sentence-cap", int),
        "min_score": ("--min-score", int), "max_rules": ("--max-rules", int),
        "train_fraction": ("--train-fraction", float),
        "rules_fraction": ("--rules-fraction", float),
        "test_fraction": ("--test-fraction", float),
        "seed": ("--seed", int), "max_iters": ("--max-iters", int), "tol": ("--tol", float),
    }
    p.add_argument("--config", help="key = value config file")
    for name in names:
        flag, typ = flags[name]
        p.add_argument(flag, dest=name, type=typ, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="morphtag", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="dump the segmentation lattice of raw text")
    p.add_argument("input")
    p.add_argument("-o", "--output", default=None)
    _add_config_flags(p, "lexicon", "connectivity", "projection", "eojeol_cap")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("train", help="train the tagging model")
    p.add_argument("--mode", required=True,
                   choices=("supervised", "em", "bootstrap-then-em"))
    p.add_argument("--corpus", help="tagged corpus (supervised / bootstrap)")
    p.add_argument("--untagged", help="raw text for EM modes")
    p.add_argument("--model-in", help="initial model for --mode em")
    p.add_argument("--model-out", required=True)
    _add_config_flags(p, "lexicon", "connectivity", "projection", "eojeol_cap",
                      "lambda_trans", "lambda_emit", "unk_mass", "virtual_unseen",
                      "max_iters", "tol")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("tag", help="tag raw text (optionally rule-corrected)")
    p.add_argument("input")
    p.add_argument("-o", "--output", default=None)
    _add_config_flags(p, "lexicon", "connectivity", "projection", "model", "rules",
                      "eojeol_cap", "sentence_cap")
    p.set_defaults(func=cmd_tag)

    p = sub.add_parser("learn-rules", help="learn error-correction rules")
    p.add_argument("--first", required=True, help="tagger output corpus")
    p.add_argument("--gold", required=True, help="hand-tagged corpus")
    p.add_argument("-o", "--output", required=True)
    _add_config_flags(p, "min_score", "max_rules")
    p.set_defaults(func=cmd_learn_rules)

    p = sub.add_parser("eval", help="score a tagged corpus against gold")
    p.add_argument("--gold", required=True)
    p.add_argument("--system", required=True)
    p.add_argument("--baseline", help="second system for the 'HMM alone' column")
    p.add_argument("--label", default="test")
    _add_config_flags(p, "lexicon", "connectivity", "projection")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("synth", help="generate a synthetic corpus + resources")
    p.add_argument("--outdir", required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--sentences", type=int, default=200)
    p.add_argument("--n-tags", type=int, default=8)
    p.add_argument("--n-ending-tags", type=int, default=2)
    p.add_argument("--vocab", type=int, default=60)
    p.add_argument("--ending-vocab", type=int, default=8)
    p.add_argument("--ambiguity", type=float, default=0.3)
    p.add_argument("--secondary-share", type=float, default=0.08)
    p.add_argument("--word-length", type=int, default=3)
    p.add_argument("--eojeols", default="3,6")
    p.add_argument("--morphemes", default="2,3")
    p.add_argument("--perturb", action="append",
                   help="trigger=TAG,new=TAG[,offset=N][,onlyif=TAG] (repeatable)")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("split", help="seeded train/rules/test split")
    p.add_argument("--corpus", required=True)
    p.add_argument("--outdir", required=True)
    _add_config_flags(p, "train_fraction", "rules_fraction", "test_fraction", "seed")
    p.set_defaults(func=cmd_split)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args)
    except SegmentationFailure as exc:
        print(f"segmentation failed: {exc}", file=sys.stderr)
        return 2
    except (DecodeFailure, TrainingError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except FileFormatError as exc:
        print(f"file format error: {exc}", file=sys.stderr)
        return 4
    except MorphtagError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
