"""Software-mention recognition: flat tagging and gate/extract/type cascades."""

from .corpus import (
    Corpus,
    LabeledSentence,
    Sentence,
    StatsReport,
    Token,
    corpus_stats,
    entity_distribution,
    parse_conll,
    read_conll,
    serialize_conll,
    write_conll,
)
from .evaluation import (
    ClassMetrics,
    EvalReport,
    compare_approaches,
    diagnose_stage1,
    diagnose_stage2,
    diagnose_stage3,
    evaluate,
    match_exact,
)
from .features import SpanQuery, featurize_sentence, featurize_span_query, featurize_token
from .labels import ENTITY_TYPES, EntityGroup, EntityRole, EntityType, TagScheme, entity_type
from .models import (
    ChainTagger,
    SentenceGate,
    SpanTypeClassifier,
    load_external_predictions,
    load_model,
    save_model,
    train_gate,
    train_span_classifier,
    train_tagger,
    viterbi_decode,
)
from .pipeline import (
    CascadeRecognizer,
    PipelineSpec,
    SentencePrediction,
    predict_corpus,
    run_approach1,
    run_approach2,
    run_approach3,
)
from .spans import (
    Span,
    TagSequence,
    apply_types,
    collapse_scheme,
    decode_bio,
    encode_bio,
    sentence_entity_label,
)

__version__ = "0.1.0"
