"""Recursive-descent parsers for the three program grammars.

Each parser runs in one of two modes: template mode recognizes the
placeholder patterns cK / cK_number / valK, instantiated mode treats every
identifier as a concrete name (a real table may have a column literally
called "c1").  Quoting: backticks for identifiers (doubled to escape),
single quotes for text literals (doubled to escape).
"""
from __future__ import annotations

import re
from decimal import Decimal

from ..errors import ArityError, ParseError
from ..values import Number, Text, parse_value
from .ast import (
    ARITH_BINARY_OPS, ARITH_TABLE_OPS, BOOL_ARG, COL, LOGIC_SIGNATURES,
    NTH, OUT_BOOL, ROWS, SCALAR_ARG, VAL, AllRows, ArithProgram, CellSel,
    CellSlot, ColumnName, ColumnSlot, Condition, Literal, LogicNode,
    OrderBy, SelectAgg, SelectColumn, SelectDiff, SqlQuery, Step, StepRef,
    ValueSlot,
)

COLUMN_SLOT_RE = re.compile(r"c([1-9]\d*)(_number)?\Z")
VALUE_SLOT_RE = re.compile(r"val([1-9]\d*)\Z")

SQL_KEYWORDS = frozenset(
    {"select", "from", "where", "and", "order", "by", "asc", "desc",
     "limit", "w", "count", "sum", "max", "min"}
)
SQL_AGGS = ("count", "sum", "max", "min")


def _unquote_backtick(token: str) -> str:
    return token[1:-1].replace("``", "`")


def _unquote_single(token: str) -> str:
    return token[1:-1].replace("''", "'")


# --- SQL ---

_SQL_TOKEN = re.compile(
    r"""\s*(
        `(?:[^`]|``)*`
      | '(?:[^']|'')*'
      | \d+(?:\.\d+)?%?
      | \.\d+%?
      | [A-Za-z_][A-Za-z0-9_]*
      | [-=><(),*]
    )""",
    re.X,
)


def _tokenize_sql(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _SQL_TOKEN.match(text, pos)
        if not m:
            rest = text[pos:].strip()
            if not rest:
                break
            raise ParseError(f"unexpected character {rest[0]!r}", pos)
        tokens.append((m.group(1), m.start(1)))
        pos = m.end()
    return tokens


class _SqlParser:
    def __init__(self, text: str, template: bool):
        self.text = text
        self.template = template
        self.tokens = _tokenize_sql(text)
        self.i = 0

    def peek(self) -> str | None:
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def pos(self) -> int:
        return self.tokens[self.i][1] if self.i < len(self.tokens) else len(self.text)

    def take(self) -> str:
        if self.i >= len(self.tokens):
            raise ParseError("unexpected end of query", len(self.text))
        tok = self.tokens[self.i][0]
        self.i += 1
        return tok

    def expect(self, word: str):
        tok = self.peek()
        if tok != word:
            raise ParseError(f"expected {word!r}, found {tok!r}", self.pos())
        self.take()

    def colref(self):
        tok = self.peek()
        if tok is None:
            raise ParseError("expected a column name", self.pos())
        if tok.startswith("`"):
            return ColumnName(_unquote_backtick(self.take()))
        if tok.startswith("'") or tok[0].isdigit() or tok[0] == ".":
            raise ParseError(f"expected a column name, found {tok!r}", self.pos())
        if self.template:
            m = COLUMN_SLOT_RE.fullmatch(tok)
            if m:
                self.take()
                return ColumnSlot(int(m.group(1)), numeric=bool(m.group(2)))
        if tok in SQL_KEYWORDS:
            raise ParseError(f"reserved word {tok!r} must be backtick-quoted", self.pos())
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", tok):
            raise ParseError(f"expected a column name, found {tok!r}", self.pos())
        return ColumnName(self.take())

    def operand(self):
        tok = self.peek()
        if tok is None:
            raise ParseError("expected a comparison operand", self.pos())
        if tok == "-":
            self.take()
            num = self.peek()
            if num is None or not (num[0].isdigit() or num[0] == "."):
                raise ParseError("expected a number after '-'", self.pos())
            value = parse_value("-" + self.take())
            return Literal(value)
        if tok.startswith("'"):
            return Literal(Text(_unquote_single(self.take())))
        if tok[0].isdigit() or tok[0] == ".":
            return Literal(parse_value(self.take()))
        if self.template:
            m = VALUE_SLOT_RE.fullmatch(tok)
            if m:
                self.take()
                return ValueSlot(int(m.group(1)))
        raise ParseError(f"text operand {tok!r} must be single-quoted", self.pos())

    def parse(self) -> SqlQuery:
        self.expect("select")
        select = self.select_clause()
        self.expect("from")
        self.expect("w")
        where: list[Condition] = []
        if self.peek() == "where":
            self.take()
            where.append(self.condition())
            while self.peek() == "and":
                self.take()
                where.append(self.condition())
        order_by = None
        if self.peek() == "order":
            self.take()
            self.expect("by")
            col = self.colref()
            descending = False
            if self.peek() in ("asc", "desc"):
                descending = self.take() == "desc"
            order_by = OrderBy(col, descending)
        limit = None
        if self.peek() == "limit":
            self.take()
            tok = self.take()
            if not tok.isdigit() or int(tok) < 1:
                raise ParseError(f"limit must be a positive integer, found {tok!r}")
            limit = int(tok)
        if self.peek() is not None:
            raise ParseError(f"trailing input {self.peek()!r}", self.pos())
        return SqlQuery(select, tuple(where), order_by, limit)

    def select_clause(self):
        tok = self.peek()
        if tok in SQL_AGGS:
            fn = self.take()
            self.expect("(")
            col = self.colref()
            self.expect(")")
            return SelectAgg(fn, col)
        col = self.colref()
        if self.peek() == "-":
            self.take()
            right = self.colref()
            return SelectDiff(col, right)
        return SelectColumn(col)

    def condition(self) -> Condition:
        col = self.colref()
        op = self.peek()
        if op not in ("=", ">", "<"):
            raise ParseError(f"expected one of = > <, found {op!r}", self.pos())
        self.take()
        return Condition(col, op, self.operand())


def parse_sql(text: str, template: bool = False) -> SqlQuery:
    return _SqlParser(text, template).parse()


# --- Logical forms ---

def _tokenize_logic(text: str) -> list[tuple[str, int]]:
    """Tokens: '{', '}', ';', or a text run.  Quoted spans (backtick or
    single quote) inside a run may contain structural characters."""
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "{};":
            tokens.append((ch, i))
            i += 1
            continue
        start = i
        while i < n and text[i] not in "{};":
            if text[i] in "`'":
                quote = text[i]
                i += 1
                while i < n:
                    if text[i] == quote:
                        if i + 1 < n and text[i + 1] == quote:
                            i += 2
                            continue
                        i += 1
                        break
                    i += 1
                else:
                    raise ParseError("unterminated quote", start)
            else:
                i += 1
        tokens.append((text[start:i].strip(), start))
    return tokens


class _LogicParser:
    def __init__(self, text: str, template: bool):
        self.text = text
        self.template = template
        self.tokens = _tokenize_logic(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def pos(self):
        return self.tokens[self.i][1] if self.i < len(self.tokens) else len(self.text)

    def take(self):
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of program", self.pos())
        self.i += 1
        return tok

    def parse(self) -> LogicNode:
        node = self.node()
        if self.peek() is not None:
            raise ParseError(f"trailing input {self.peek()!r}", self.pos())
        _, out = LOGIC_SIGNATURES[node.op]
        if out != OUT_BOOL:
            raise ParseError(f"logic program must be a claim, but root {node.op!r} "
                             f"yields a {out}")
        return node

    def node(self) -> LogicNode:
        pos = self.pos()
        name = self.take()
        if name in "{};":
            raise ParseError(f"expected an operator name, found {name!r}", pos)
        if name not in LOGIC_SIGNATURES:
            raise ParseError(f"unknown operator {name!r}", pos)
        self.expect("{")
        raw_args = [self.argument()]
        while self.peek() == ";":
            self.take()
            raw_args.append(self.argument())
        self.expect("}")
        positions, _ = LOGIC_SIGNATURES[name]
        if len(raw_args) != len(positions):
            raise ArityError(
                f"{name} takes {len(positions)} arguments, found {len(raw_args)}"
            )
        args = tuple(self.classify(a, kind, name) for a, kind in zip(raw_args, positions))
        return LogicNode(name, args)

    def expect(self, word: str):
        tok = self.peek()
        if tok != word:
            raise ParseError(f"expected {word!r}, found {tok!r}", self.pos())
        self.take()

    def argument(self):
        """A nested node (text run followed by '{') or a leaf text run."""
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of program", self.pos())
        nxt = self.tokens[self.i + 1][0] if self.i + 1 < len(self.tokens) else None
        if nxt == "{":
            return self.node()
        pos = self.pos()
        leaf = self.take()
        if leaf in "{};" or not leaf:
            raise ParseError(f"expected an argument, found {leaf!r}", pos)
        return ("leaf", leaf, pos)

    def classify(self, arg, kind: str, op: str):
        if isinstance(arg, LogicNode):
            _, out = LOGIC_SIGNATURES[arg.op]
            if kind == ROWS and out == "rows":
                return arg
            if kind == SCALAR_ARG and out == "scalar":
                return arg
            if kind == BOOL_ARG and out == "bool":
                return arg
            raise ParseError(f"{op}: subexpression {arg.op!r} yields a {out}, "
                             f"but a {kind} argument is required")
        _, leaf, pos = arg
        if kind == ROWS:
            if leaf == "all_rows":
                return AllRows()
            raise ParseError(f"{op}: expected all_rows or a row expression, "
                             f"found {leaf!r}", pos)
        if kind == COL:
            return self.column_leaf(leaf, pos)
        if kind in (VAL, SCALAR_ARG):
            return self.value_leaf(leaf, pos)
        if kind == NTH:
            if not leaf.isdigit() or int(leaf) < 1:
                raise ParseError(f"{op}: rank must be a positive integer, "
                                 f"found {leaf!r}", pos)
            return int(leaf)
        if kind == BOOL_ARG:
            raise ParseError(f"{op}: expected a claim subexpression, found {leaf!r}", pos)
        raise AssertionError(kind)

    def column_leaf(self, leaf: str, pos: int):
        if leaf.startswith("`") and leaf.endswith("`") and len(leaf) >= 2:
            return ColumnName(_unquote_backtick(leaf))
        if leaf.startswith("'"):
            raise ParseError(f"expected a column name, found string {leaf}", pos)
        if self.template:
            m = COLUMN_SLOT_RE.fullmatch(leaf)
            if m:
                return ColumnSlot(int(m.group(1)), numeric=bool(m.group(2)))
        if leaf == "all_rows":
            raise ParseError("all_rows is not a column name", pos)
        return ColumnName(leaf)

    def value_leaf(self, leaf: str, pos: int):
        if self.template:
            m = VALUE_SLOT_RE.fullmatch(leaf)
            if m:
                return ValueSlot(int(m.group(1)))
        if leaf.startswith("'") and leaf.endswith("'") and len(leaf) >= 2:
            return Literal(Text(_unquote_single(leaf)))
        # bare leaves are unambiguous in value position: number or text
        value = parse_value(leaf)
        if isinstance(value, Number):
            return Literal(value)
        return Literal(Text(leaf))


def parse_logic(text: str, template: bool = False) -> LogicNode:
    return _LogicParser(text, template).parse()


# --- Arithmetic expressions ---

def _scan_arith_atoms(text: str, start: int) -> tuple[list[tuple[str, int]], int]:
    """Scan a parenthesized argument list starting at the '('.  Returns the
    raw atom strings (with positions) and the index just past ')'."""
    i = start + 1
    atoms = []
    atom_start = i
    depth = 1
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "`":
            i += 1
            while i < n:
                if text[i] == "`":
                    if i + 1 < n and text[i + 1] == "`":
                        i += 2
                        continue
                    i += 1
                    break
                i += 1
            else:
                raise ParseError("unterminated backtick quote", atom_start)
            continue
        if ch == "(":
            raise ParseError("nested parentheses are not allowed", i)
        if ch == ")":
            depth -= 1
            atoms.append((text[atom_start:i].strip(), atom_start))
            return atoms, i + 1
        if ch == ",":
            atoms.append((text[atom_start:i].strip(), atom_start))
            atom_start = i + 1
        i += 1
    raise ParseError("missing closing parenthesis", start)


def _split_unquoted_of(atom: str) -> tuple[str, str] | None:
    """Find the rightmost ' of ' separator outside backtick quotes."""
    spans = []
    i = 0
    while i < len(atom):
        if atom[i] == "`":
            start = i
            i += 1
            while i < len(atom):
                if atom[i] == "`":
                    if i + 1 < len(atom) and atom[i + 1] == "`":
                        i += 2
                        continue
                    i += 1
                    break
                i += 1
            spans.append((start, i))
        else:
            i += 1
    idx = len(atom)
    while True:
        idx = atom.rfind(" of ", 0, idx)
        if idx < 0:
            return None
        if not any(s <= idx < e for s, e in spans):
            return atom[:idx], atom[idx + 4:]
        # separator is inside a quote; keep looking leftward


def _arith_name(atom: str, pos: int):
    if atom.startswith("`") and atom.endswith("`") and len(atom) >= 2:
        name = _unquote_backtick(atom)
    else:
        name = atom
    if not name:
        raise ParseError("empty name", pos)
    return name


class _ArithParser:
    def __init__(self, text: str, template: bool):
        self.text = text
        self.template = template

    def parse(self) -> ArithProgram:
        text = self.text
        steps = []
        i = 0
        n = len(text)
        while True:
            while i < n and text[i].isspace():
                i += 1
            if i >= n:
                break
            m = re.match(r"[a-z_]+", text[i:])
            if not m:
                raise ParseError(f"expected an operation name at {text[i:i+12]!r}", i)
            op = m.group(0)
            j = i + m.end()
            while j < n and text[j].isspace():
                j += 1
            if j >= n or text[j] != "(":
                raise ParseError(f"expected '(' after {op!r}", j)
            atoms, j = _scan_arith_atoms(text, j)
            steps.append(self.step(op, atoms, len(steps)))
            while j < n and text[j].isspace():
                j += 1
            if j >= n:
                break
            if text[j] != ",":
                raise ParseError(f"expected ',' between steps, found {text[j]!r}", j)
            i = j + 1
        if not steps:
            raise ParseError("empty program")
        return ArithProgram(tuple(steps))

    def step(self, op: str, atoms, index: int) -> Step:
        if op in ARITH_BINARY_OPS:
            if len(atoms) != 2:
                raise ArityError(f"{op} takes 2 arguments, found {len(atoms)}")
            return Step(op, tuple(self.scalar_atom(a, p, index) for a, p in atoms))
        if op in ARITH_TABLE_OPS:
            if len(atoms) != 1:
                raise ArityError(f"{op} takes 1 argument, found {len(atoms)}")
            return Step(op, (self.column_atom(*atoms[0]),))
        raise ParseError(f"unknown operation {op!r}")

    def scalar_atom(self, atom: str, pos: int, step_index: int):
        if not atom:
            raise ParseError("empty argument", pos)
        if atom.startswith("#"):
            digits = atom[1:]
            if not digits.isdigit():
                raise ParseError(f"bad step reference {atom!r}", pos)
            ref = int(digits)
            if ref >= step_index:
                raise ParseError(f"step reference #{ref} does not point backward", pos)
            return StepRef(ref)
        if self.template:
            m = VALUE_SLOT_RE.fullmatch(atom)
            if m:
                return CellSlot(int(m.group(1)))
        split = _split_unquoted_of(atom)
        if split is not None:
            col, row = split
            return CellSel(_arith_name(col.strip(), pos), _arith_name(row.strip(), pos))
        value = parse_value(atom)
        if isinstance(value, Number):
            return Literal(value)
        raise ParseError(
            f"expected a number, cell selector, or step reference, found {atom!r}", pos
        )

    def column_atom(self, atom: str, pos: int):
        if not atom:
            raise ParseError("empty argument", pos)
        if self.template:
            m = COLUMN_SLOT_RE.fullmatch(atom)
            if m:
                return ColumnSlot(int(m.group(1)), numeric=True)
        if atom.startswith("#") or isinstance(parse_value(atom), Number):
            raise ParseError(f"expected a column name, found {atom!r}", pos)
        return ColumnName(_arith_name(atom, pos))


def parse_arith(text: str, template: bool = False) -> ArithProgram:
    return _ArithParser(text, template).parse()


_PARSERS = {"sql": parse_sql, "logic": parse_logic, "arith": parse_arith}


def parse_program(text: str, family: str, template: bool = False):
    """Parse one program.  family is sql | logic | arith."""
    if family not in _PARSERS:
        raise ParseError(f"unknown family {family!r}")
    return _PARSERS[family](text, template)
