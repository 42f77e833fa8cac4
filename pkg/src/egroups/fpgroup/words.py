"""Words, presentations and the presentation text format.

Format (UTF-8, '#' starts a comment, ';' or newline ends a statement)::

    gens: x y z
    rel: x^4 = y^4 = [y,z] = 1, x^2 = z^2 = [x,y], (xz)^2 = y^2

Word grammar: a word is a juxtaposition of factors, where a factor is
``NAME``, ``NAME^INT``, ``(word)^INT`` or ``[word,word]``; ``1`` is the
empty word and INT is a nonzero signed integer.  ``[u,v]`` means
u^-1 v^-1 u v.  A chain ``u1 = u2 = ... = uk`` becomes the relators
u_i uk^-1 for i < k, and a bare word ``w`` means ``w = 1``.  Adjacent
single-letter generator names may be run together (``xz`` is x z).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Union

from ..errors import EGroupsError


class PresentationSyntaxError(EGroupsError, ValueError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Gen:
    name: str
    exp: int = 1

    def __str__(self):
        return self.name if self.exp == 1 else f"{self.name}^{self.exp}"


@dataclass(frozen=True)
class Power:
    word: "Word"
    exp: int

    def __str__(self):
        return f"({self.word})^{self.exp}"


@dataclass(frozen=True)
class Comm:
    left: "Word"
    right: "Word"

    def __str__(self):
        return f"[{self.left},{self.right}]"


Factor = Union[Gen, Power, Comm]


@dataclass(frozen=True)
class Word:
    factors: tuple = ()

    def __str__(self):
        return " ".join(str(f) for f in self.factors) if self.factors else "1"

    def letters(self, index: dict[str, int]) -> list[int]:
        """Expand to free-reduced letters: 2g for generator g, 2g+1 for its inverse."""
        return free_reduce(_expand(self, index))


def _expand(w: Word, index: dict[str, int]) -> list[int]:
    out: list[int] = []
    for f in w.factors:
        if isinstance(f, Gen):
            g = index[f.name]
            out.extend([2 * g + (f.exp < 0)] * abs(f.exp))
        elif isinstance(f, Power):
            body = _expand(f.word, index)
            if f.exp < 0:
                body = invert_letters(body)
            out.extend(body * abs(f.exp))
        else:
            u = _expand(f.left, index)
            v = _expand(f.right, index)
            out.extend(invert_letters(u) + invert_letters(v) + u + v)
    return out


def invert_letters(letters: list[int]) -> list[int]:
    return [x ^ 1 for x in reversed(letters)]


def free_reduce(letters: list[int]) -> list[int]:
    out: list[int] = []
    for x in letters:
        if out and out[-1] == x ^ 1:
            out.pop()
        else:
            out.append(x)
    return out


def letters_to_runs(letters) -> list[tuple[int, int]]:
    """Run-length form [(generator, signed exponent), ...]."""
    runs: list[tuple[int, int]] = []
    for x in letters:
        g, s = x >> 1, (-1 if x & 1 else 1)
        if runs and runs[-1][0] == g and (runs[-1][1] > 0) == (s > 0):
            runs[-1] = (g, runs[-1][1] + s)
        else:
            runs.append((g, s))
    return runs


def format_letters(letters, names) -> str:
    if not letters:
        return "1"
    return " ".join(names[g] if e == 1 else f"{names[g]}^{e}" for g, e in letters_to_runs(letters))


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relators: tuple[tuple[int, ...], ...]
    name: str = ""
    tags: dict = field(default_factory=dict, compare=False, hash=False)

    @property
    def ngens(self) -> int:
        return len(self.generators)

    def relator_runs(self) -> list[list[tuple[int, int]]]:
        return [letters_to_runs(r) for r in self.relators]

    def to_text(self) -> str:
        lines = [f"gens: {' '.join(self.generators)}"]
        lines += [f"rel: {format_letters(r, self.generators)}" for r in self.relators]
        return "\n".join(lines) + "\n"

    def __str__(self):
        rels = ", ".join(format_letters(r, self.generators) for r in self.relators)
        return f"< {' '.join(self.generators)} | {rels} >"


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<int>[+-]?\d+)|(?P<sym>[\^()\[\],=]))"
)


class _Parser:
    def __init__(self, text: str, gens: dict[str, int], line: int, col0: int):
        self.text = text
        self.gens = gens
        self.line = line
        self.col0 = col0
        self.pos = 0
        self.toks = self._tokenize()
        self.i = 0

    def _err(self, msg: str, pos: int | None = None):
        pos = self.pos if pos is None else pos
        raise PresentationSyntaxError(msg, self.line, self.col0 + pos + 1)

    def _tokenize(self):
        toks = []
        pos = 0
        n = len(self.text)
        while pos < n:
            if self.text[pos].isspace():
                pos += 1
                continue
            m = _TOKEN.match(self.text, pos)
            if not m or m.end() == pos:
                self.pos = pos
                self._err(f"unexpected character {self.text[pos]!r}")
            start = m.start(m.lastgroup)
            if m.lastgroup == "name":
                for name in self._split_name(m.group("name"), start):
                    toks.append(("name", name, start))
            else:
                toks.append((m.lastgroup, m.group(m.lastgroup), start))
            pos = m.end()
        toks.append(("eof", "", n))
        return toks

    def _split_name(self, s: str, start: int) -> list[str]:
        if s in self.gens:
            return [s]
        # run-together names: unique-preferring longest-match decomposition
        best: dict[int, list[str] | None] = {len(s): []}
        for i in range(len(s) - 1, -1, -1):
            best[i] = None
            for j in range(len(s), i, -1):
                if s[i:j] in self.gens and best.get(j) is not None:
                    best[i] = [s[i:j]] + best[j]
                    break
        if best[0] is None:
            self.pos = start
            self._err(f"undeclared generator {s!r}")
        return best[0]

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None, value=None):
        tok = self.toks[self.i]
        if (kind and tok[0] != kind) or (value is not None and tok[1] != value):
            self.pos = tok[2]
            want = value if value is not None else kind
            self._err(f"expected {want!r}, found {tok[1] or 'end of input'!r}")
        self.i += 1
        return tok

    def exponent(self) -> int:
        tok = self.take("int")
        v = int(tok[1])
        if v == 0:
            self.pos = tok[2]
            self._err("zero exponent")
        return v

    def word(self) -> Word:
        factors = []
        while True:
            kind, val, pos = self.peek()
            if kind == "name":
                self.take()
                if self.peek()[1] == "^":
                    self.take()
                    factors.append(Gen(val, self.exponent()))
                else:
                    factors.append(Gen(val))
            elif kind == "int" and val == "1":
                self.take()
                if self.peek()[1] == "^":
                    self.take()
                    self.exponent()
            elif val == "(":
                self.take()
                inner = self.word()
                self.take("sym", ")")
                exp = 1
                if self.peek()[1] == "^":
                    self.take()
                    exp = self.exponent()
                factors.append(Power(inner, exp))
            elif val == "[":
                self.take()
                parts = [self.word()]
                while self.peek()[1] == ",":
                    self.take()
                    parts.append(self.word())
                self.take("sym", "]")
                if len(parts) < 2:
                    self.pos = pos
                    self._err("commutator needs at least two entries")
                # [u,v,w] is left-normed [[u,v],w]
                c = Comm(parts[0], parts[1])
                for w in parts[2:]:
                    c = Comm(Word((c,)), w)
                if self.peek()[1] == "^":
                    self.take()
                    factors.append(Power(Word((c,)), self.exponent()))
                else:
                    factors.append(c)
            elif kind == "int":
                self.pos = pos
                self._err(f"unexpected integer {val!r}")
            else:
                break
        return Word(tuple(factors))

    def chains(self) -> list[list[Word]]:
        out = []
        while True:
            chain = [self.word()]
            while self.peek()[1] == "=":
                self.take()
                chain.append(self.word())
            out.append(chain)
            if self.peek()[1] == ",":
                self.take()
                continue
            break
        self.take("eof")
        return out


def parse_word(text: str, generators) -> Word:
    gens = {g: i for i, g in enumerate(generators)}
    p = _Parser(text, gens, 1, 0)
    w = p.word()
    p.take("eof")
    return w


def chain_relators(chain: list[Word], index: dict[str, int]) -> list[list[int]]:
    """Split u1 = ... = uk into u_i uk^-1 (i < k); a lone word is itself a relator."""
    if len(chain) == 1:
        return [chain[0].letters(index)]
    last = chain[-1].letters(index)
    return [free_reduce(w.letters(index) + invert_letters(last)) for w in chain[:-1]]


def parse_presentation(text: str, name: str = "") -> Presentation:
    gens: list[str] = []
    index: dict[str, int] = {}
    relators: list[tuple[int, ...]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        col = 0
        for stmt in line.split(";"):
            stripped = stmt.strip()
            offset = col + (len(stmt) - len(stmt.lstrip()))
            col += len(stmt) + 1
            if not stripped:
                continue
            key, sep, body = stripped.partition(":")
            key = key.strip()
            if not sep or key not in ("gens", "rel"):
                raise PresentationSyntaxError("statement must start with 'gens:' or 'rel:'", lineno, offset + 1)
            body_col = offset + len(key) + 1
            if key == "gens":
                for g in body.replace(",", " ").split():
                    if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", g):
                        raise PresentationSyntaxError(f"bad generator name {g!r}", lineno, body_col + 1)
                    if g in index:
                        raise PresentationSyntaxError(f"duplicate generator {g!r}", lineno, body_col + 1)
                    index[g] = len(gens)
                    gens.append(g)
            else:
                if not gens:
                    raise PresentationSyntaxError("'rel:' before 'gens:'", lineno, offset + 1)
                for chain in _Parser(body, index, lineno, body_col).chains():
                    for rel in chain_relators(chain, index):
                        if rel:
                            relators.append(tuple(rel))
    if not gens:
        raise PresentationSyntaxError("no 'gens:' statement", 1, 1)
    return Presentation(tuple(gens), tuple(relators), name=name)
