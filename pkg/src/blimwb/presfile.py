"""Reading and writing the plain-text presentation format.

::

    # comments run to the end of the line
    name: Q8
    gens: x, y
    rels: x^4, y^2*x^-2, y^-1*x*y*x

Expressions are products of ``id``, ``id^k``, ``[u, v]`` and ``(u)``; ``u = v``
stands for ``u*v^-1``.  A power may also follow a bracket or parenthesis, and
``1`` denotes the empty word.
"""

from __future__ import annotations

import re
from pathlib import Path

from .errors import InputError
from .words import FreePresentation, Word, commutator

_TOKEN = re.compile(r"\s*(?:(?P<id>[A-Za-z_][A-Za-z0-9_']*)|(?P<int>[+-]?\d+)|(?P<sym>[\^*\[\](),=]))")


class PresentationSyntaxError(InputError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class _Parser:
    def __init__(self, text: str, line: int, col0: int, names: dict[str, int]):
        self.text = text
        self.line = line
        self.col0 = col0
        self.names = names
        self.tokens = []
        pos = 0
        while text[pos:].strip():
            m = _TOKEN.match(text, pos)
            if not m:
                bad = len(text) - len(text[pos:].lstrip())
                self.fail(f"unexpected character {text[bad]!r}", bad)
            kind = m.lastgroup
            start = m.start(kind)
            self.tokens.append((kind, m.group(kind), start))
            pos = m.end()
        self.i = 0

    def fail(self, message: str, pos: int | None = None):
        if pos is None:
            pos = self.tokens[self.i][2] if self.i < len(self.tokens) else len(self.text)
        raise PresentationSyntaxError(message, self.line, self.col0 + pos + 1)

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, len(self.text))

    def take(self, value: str):
        kind, val, _ = self.peek()
        if val != value:
            self.fail(f"expected {value!r}" + (f", found {val!r}" if val is not None else " before end of line"))
        self.i += 1

    def expr_list(self) -> list[Word]:
        out = [self.expr()]
        while self.peek()[1] == ",":
            self.i += 1
            out.append(self.expr())
        if self.i != len(self.tokens):
            self.fail(f"unexpected {self.peek()[1]!r}")
        return out

    def expr(self) -> Word:
        w = self.product()
        if self.peek()[1] == "=":
            self.i += 1
            w = w * ~self.product()
            if self.peek()[1] == "=":
                self.fail("chained equalities are not supported")
        return w

    def product(self) -> Word:
        w = self.term()
        while self.peek()[1] == "*":
            self.i += 1
            w = w * self.term()
        return w

    def term(self) -> Word:
        kind, val, pos = self.peek()
        if kind == "id":
            if val not in self.names:
                self.fail(f"unknown generator {val!r}")
            self.i += 1
            w = Word.gen(self.names[val])
        elif kind == "int" and val == "1":
            self.i += 1
            w = Word()
        elif val == "[":
            self.i += 1
            u = self.expr()
            self.take(",")
            v = self.expr()
            self.take("]")
            w = commutator(u, v)
        elif val == "(":
            self.i += 1
            w = self.expr()
            self.take(")")
        else:
            self.fail("expected a generator, '[' or '('" + (f", found {val!r}" if val is not None else " before end of line"))
        if self.peek()[1] == "^":
            self.i += 1
            kind, val, pos = self.peek()
            if kind != "int":
                self.fail("expected an integer exponent")
            k = int(val)
            if k == 0:
                self.fail("zero exponent", pos)
            self.i += 1
            w = w ** k
        return w


def _split_names(text: str, line: int, col0: int) -> list[str]:
    names = [s.strip() for s in text.split(",")] if text.strip() else []
    for n in names:
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", n):
            raise PresentationSyntaxError(f"bad generator name {n!r}", line, col0 + text.find(n) + 1 if n else col0 + 1)
    return names


def parse_presentation(text: str, name: str = "") -> FreePresentation:
    gens: list[str] | None = None
    pending: list[tuple[str, int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        key, sep, rest = line.partition(":")
        key = key.strip()
        col0 = line.index(":") + 1 if sep else 0
        if not sep or key not in ("gens", "rels", "name"):
            raise PresentationSyntaxError("expected 'gens:', 'rels:' or 'name:'", lineno, 1)
        if key == "name":
            name = rest.strip()
        elif key == "gens":
            if gens is not None:
                raise PresentationSyntaxError("generators declared twice", lineno, 1)
            gens = _split_names(rest, lineno, col0)
        else:
            pending.append((rest, lineno, col0))
    if gens is None:
        raise PresentationSyntaxError("missing 'gens:' line", 1, 1)
    if len(set(gens)) != len(gens):
        raise InputError("duplicate generator names")
    index = {g: i for i, g in enumerate(gens)}
    rels: list[Word] = []
    for rest, lineno, col0 in pending:
        if rest.strip():
            rels.extend(_Parser(rest, lineno, col0, index).expr_list())
    return FreePresentation(tuple(gens), tuple(rels), name)


def format_presentation(P: FreePresentation) -> str:
    lines = []
    if P.name:
        lines.append(f"name: {P.name}")
    lines.append("gens: " + ", ".join(P.generator_names))
    if P.relators:
        lines.append("rels: " + ", ".join(r.format(P.generator_names) for r in P.relators))
    return "\n".join(lines) + "\n"


def load_presentation(path: str | Path) -> FreePresentation:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    P = parse_presentation(text, path.stem)
    if not P.name:
        P = FreePresentation(P.generator_names, P.relators, path.stem)
    return P


CORPUS_DIR = Path(__file__).with_name("corpus")
MAIN_CORPUS = ("C2", "C4", "C2xC2", "Q8", "D4", "S3")
FREE_CORPUS = ("free1", "free2", "free3")


def corpus_path(name: str) -> Path:
    return CORPUS_DIR / f"{name}.pres"


def load_corpus(names=MAIN_CORPUS) -> list[FreePresentation]:
    return [load_presentation(corpus_path(n)) for n in names]
