# Dictionary builder module
from src.dictionary_builder.builder import (
    DictionaryBuilder,
    best_candidate,
    build_dictionary,
    enumerate_candidates,
    enumerate_symbol_candidates,
    select_template,
    template_threshold,
)
from src.dictionary_builder.models import (
    AxisTemplate,
    BuildMetadata,
    CandidateScore,
    Dictionary,
    QueryTemplate,
)
from src.dictionary_builder.sweep import nn_sweep, sweep_profile
