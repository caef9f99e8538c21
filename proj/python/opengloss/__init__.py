"""Python surface of the OpenGloss engine.

Thin convenience layer over the ``_opengloss`` extension: operations that
return JSON strings from the C++ side come back as plain dicts/lists here.
"""

import json as _json

try:
    from . import _opengloss as _ext  # installed wheel layout
except ImportError:
    import _opengloss as _ext  # in-tree build: extension sits on sys.path

EdgePriority = _ext.EdgePriority
EdgeType = _ext.EdgeType
EntryParseError = _ext.EntryParseError
IoError = _ext.IoError
NormalizationError = _ext.NormalizationError
PartOfSpeech = _ext.PartOfSpeech
QaVerdict = _ext.QaVerdict
classify_priority = _ext.classify_priority
edge_type_name = _ext.edge_type_name
normalize_lemma = _ext.normalize_lemma
select_seed_lexemes = _ext.select_seed_lexemes

__all__ = [
    "EdgePriority",
    "EdgeType",
    "EntryParseError",
    "IoError",
    "NormalizationError",
    "PartOfSpeech",
    "QaVerdict",
    "build_graph",
    "classify_priority",
    "edge_type_name",
    "extract_edges",
    "generate",
    "normalize_lemma",
    "parse_entry",
    "qa_run",
    "select_seed_lexemes",
    "stats_report",
    "validate_entry",
    "vocab_overlap",
]


def parse_entry(line):
    """Parse one JSONL entry line into its canonical dict form."""
    return _json.loads(_ext.parse_entry_json(line))


def validate_entry(entry, strict=False):
    """Validate an entry (dict or JSON string); returns (ok, issues)."""
    if not isinstance(entry, str):
        entry = _json.dumps(entry)
    return _ext.validate_entry_json(entry, strict)


def extract_edges(entry):
    """All graph edges extracted from one entry (dict or JSON string)."""
    if not isinstance(entry, str):
        entry = _json.dumps(entry)
    return _json.loads(_ext.extract_edges_json(entry))


def build_graph(shards, edge_file="", prune_derivations=True, jobs=1):
    return _json.loads(_ext.build_graph(shards, str(edge_file), prune_derivations, jobs))


def stats_report(shards, jobs=1):
    return _json.loads(_ext.stats_report(shards, jobs))


def vocab_overlap(shards, wordlist, underscore_normalize=False):
    return _json.loads(_ext.vocab_overlap(shards, wordlist, underscore_normalize))


def generate(seeds, output, **kwargs):
    return _json.loads(_ext.generate(seeds, output, **kwargs))


def qa_run(shards, sample, seed=42, wordnet_aligned=True):
    return _json.loads(_ext.qa_run(shards, sample, seed, wordnet_aligned))
