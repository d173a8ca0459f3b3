from .arith import exec_arith
from .claims import decide_claim_arg
from .logic import exec_logic
from .result import ExecResult
from .sql import exec_sql

from ..programs.ast import family_of


def exec_program(program, table):
    family = family_of(program)
    if family == "sql":
        return exec_sql(program, table)
    if family == "logic":
        return exec_logic(program, table)
    return exec_arith(program, table)


__all__ = [
    "ExecResult", "decide_claim_arg", "exec_arith", "exec_logic",
    "exec_program", "exec_sql",
]
