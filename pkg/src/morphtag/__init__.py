"""Two-phase morpheme-level POS disambiguation for agglutinative text.

Pipeline: a dictionary-driven segmenter turns each sentence into a lattice
of candidate morpheme analyses, a bigram tagging model picks the best
analysis by Viterbi score, and an ordered list of learned correction rules
rewrites tags the statistical pass gets wrong.
"""

from .corpus import (EvalReport, GoldCorpus, evaluate, format_report_header,
                     format_report_row, read_corpus, split_corpus, write_corpus)
from .errors import (DecodeFailure, FileFormatError, MorphtagError,
                     SegmentationFailure, TrainingError)
from .hmm import (BOS, HmmModel, Smoothing, TaggedEojeol, TaggedSentence,
                  baum_welch, em_sentence_from_lattice, load_model, save_model,
                  score_sequence, tag_lattice, train_supervised, viterbi)
from .kernels import COMPILED as KERNELS_COMPILED
from .lexicon import (ConnectivityTable, EojeolAnalysis, LexEntry, Lexicon,
                      Morpheme, SentenceLattice, analyze_sentence, load_lexicon,
                      segment, tokenize)
from .synth import PerturbationRule, SynthResult, SynthSpec, generate_synthetic
from .tagset import (TagPath, TagsetProjection, parse_tag_path, project,
                     projection_from_file, projection_to_file)
from .tbl import (ContextProbe, Rule, RuleList, RuleSchema, apply_rules,
                  apply_rules_corpus, enumerate_schemas, learn_rules,
                  load_rules, save_rules, score_rule)

__version__ = "0.1.0"
