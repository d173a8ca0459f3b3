from .config import PipelineConfig, config_from_obj, config_to_obj, load_config
from .generate import CorpusStats, generate, load_tables
from .samples import Sample, serialize_answer
from .stats import stats_corpus
from .validate import Report, Violation, validate_corpus

__all__ = [
    "CorpusStats",
    "PipelineConfig",
    "Report",
    "Sample",
    "Violation",
    "config_from_obj",
    "config_to_obj",
    "generate",
    "load_config",
    "load_tables",
    "serialize_answer",
    "stats_corpus",
    "validate_corpus",
]
