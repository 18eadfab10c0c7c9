"""Automatic merging of morphosyntactic lexica encoded in LMF."""

from .fs import FlatFS, LexEntry, Lexicon, entry_from_raw, subsumes, unify_entries, unify_flat
from .lmf_io import RawEntry, RawLmfDocument, import_tagline, parse_lmf, serialize_lmf
from .mapping import MappingParams, MappingTable, jaccard, learn_mapping, mapping_report
from .convert import apply_mapping, conversion_report
from .merge import MergeResult, Outcome, lexicon_stats, merge
from .units import (
    VARIABLE,
    Level,
    MinimalUnit,
    OpenParams,
    abstract_open_values,
    detect_open_features,
    find_minimal_units,
    occurrence_vector,
)

__version__ = "0.1.0"
