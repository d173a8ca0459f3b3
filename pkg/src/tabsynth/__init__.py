"""Synthesis of tabular-reasoning training data.

Typed program templates (SQL queries, logical forms, arithmetic chains)
are sampled against relational tables, executed exactly, and realized as
natural-language questions and claims; the result is a JSONL corpus whose
every line can be re-checked by re-executing its provenance program.
"""
from .errors import TabsynthError
from .execution import exec_program
from .programs.parse import parse_program
from .programs.render import print_program
from .programs.templates import parse_template
from .sampling import SamplerConfig, sample_program
from .tables import Table, load_table

__version__ = "0.1.0"

__all__ = [
    "SamplerConfig",
    "Table",
    "TabsynthError",
    "__version__",
    "exec_program",
    "load_table",
    "parse_program",
    "parse_template",
    "print_program",
    "sample_program",
]
