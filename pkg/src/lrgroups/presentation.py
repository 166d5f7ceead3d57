"""Words in free groups, finite presentations and their text format.

A word is stored as a tuple of *letters*.  Generator number ``i`` is the
letter ``2*i`` and its inverse is ``2*i + 1``, so ``letter ^ 1`` inverts a
letter and a letter doubles as a column index of a coset table.

Conventions used throughout the package::

    u^v   = v^-1 u v
    [u,v] = u^-1 v^-1 u v

Text format
-----------

::

    # comment
    gens: x y s t a
    rels: x^2, y^2, s^3, t^2, a^2, [x,y], s^t = s^-1,
          x^s = y, y^s = x*y, x^t = y, [s,a], [t,a]

* ``gens:`` lists generator names separated by blanks or commas.
* ``rels:`` is followed by relations separated by commas, semicolons or
  newlines (commas inside brackets do not separate).  A relation is either a
  single word (a relator) or ``u = v``, stored as the relator ``u v^-1``.
* A word is a product of factors, written by juxtaposition or with ``*``.
  A factor is an atom followed by any number of ``^e`` suffixes, where ``e``
  is an integer (``^-1``, ``^{-1}``, ``^(2)``) or an atom (conjugation).
* Atoms: a name, ``1`` (identity), ``(w)``, ``{w}`` or a commutator
  ``[u,v]``.  A run of letters such as ``xy`` is split into declared
  generator names by longest match, so ``qrsp^-1`` reads as ``q r s p^-1``:
  a suffix binds to the last name of the run.  As a conjugating exponent
  the whole run is used, so ``a^xy`` is ``a^(x*y)``.
* ``gens`` and ``rels`` may share a line when separated by ``;``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence


class PresentationError(ValueError):
    """Malformed presentation text.  ``line``/``col`` are 1-based."""

    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        if line is not None:
            message = f"{message} (line {line}, column {col})"
        super().__init__(message)


class UndeclaredGenerator(PresentationError):
    pass


def inverse_letter(letter: int) -> int:
    return letter ^ 1


def free_reduce(letters: Iterable[int]) -> tuple[int, ...]:
    out: list[int] = []
    for a in letters:
        if out and out[-1] == a ^ 1:
            out.pop()
        else:
            out.append(a)
    return tuple(out)


def cyclic_reduce(letters: Sequence[int]) -> tuple[int, ...]:
    w = free_reduce(letters)
    i, j = 0, len(w)
    while j - i >= 2 and w[i] == w[j - 1] ^ 1:
        i += 1
        j -= 1
    return w[i:j]


@dataclass(frozen=True)
class Word:
    """An immutable word; ``letters`` uses the ``2*i`` / ``2*i+1`` encoding."""

    letters: tuple[int, ...] = ()

    @classmethod
    def gen(cls, i: int, exponent: int = 1) -> "Word":
        letter = 2 * i if exponent > 0 else 2 * i + 1
        return cls((letter,) * abs(exponent))

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __bool__(self):
        return bool(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return Word(free_reduce(self.letters + other.letters))

    def __pow__(self, n: int) -> "Word":
        base = self if n >= 0 else self.inverse()
        return Word(free_reduce(base.letters * abs(n)))

    def inverse(self) -> "Word":
        return Word(tuple(a ^ 1 for a in reversed(self.letters)))

    def reduce(self) -> "Word":
        return Word(free_reduce(self.letters))

    def cyclically_reduced(self) -> "Word":
        return Word(cyclic_reduce(self.letters))

    def conj(self, by: "Word") -> "Word":
        """``self^by = by^-1 self by``."""
        return by.inverse() * self * by

    def signed(self) -> list[tuple[int, int]]:
        return [(a >> 1, -1 if a & 1 else 1) for a in self.letters]

    def generators_used(self) -> frozenset[int]:
        return frozenset(a >> 1 for a in self.letters)

    def format(self, names: Sequence[str]) -> str:
        """Render as ``x^-1*y^2*x``; the empty word is ``1``."""
        if not self.letters:
            return "1"
        parts = []
        w = self.letters
        i = 0
        while i < len(w):
            j = i
            while j < len(w) and w[j] == w[i]:
                j += 1
            name = names[w[i] >> 1]
            e = (j - i) * (-1 if w[i] & 1 else 1)
            parts.append(name if e == 1 else f"{name}^{e}")
            i = j
        return "*".join(parts)


def commutator(u: Word, v: Word) -> Word:
    return u.inverse() * v.inverse() * u * v


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relators: tuple[Word, ...]
    _cyclic: tuple[Word, ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        if not self.generators:
            raise PresentationError("empty generator list")
        if len(set(self.generators)) != len(self.generators):
            raise PresentationError("duplicate generator names")
        ng = len(self.generators)
        rels = []
        for r in self.relators:
            if any(a >> 1 >= ng for a in r.letters):
                raise PresentationError("relator uses an undeclared generator")
            r = r.reduce()
            if r:
                rels.append(r)
        object.__setattr__(self, "relators", tuple(rels))
        cyc = []
        for r in rels:
            c = r.cyclically_reduced()
            if c:
                cyc.append(c)
        object.__setattr__(self, "_cyclic", tuple(cyc))

    @property
    def ngens(self) -> int:
        return len(self.generators)

    @property
    def cyclic_relators(self) -> tuple[Word, ...]:
        return self._cyclic

    def index(self, name: str) -> int:
        return self.generators.index(name)

    def word(self, text: str) -> Word:
        """Parse a single word over this presentation's generators."""
        return parse_word(text, self.generators)

    def words(self, texts: Iterable[str]) -> list[Word]:
        return [self.word(t) for t in texts]

    def gen_words(self, names: Iterable[str] | None = None) -> list[Word]:
        if names is None:
            names = self.generators
        return [Word.gen(self.index(n)) for n in names]

    def format_word(self, w: Word) -> str:
        return w.format(self.generators)

    def format(self) -> str:
        rels = ",\n      ".join(self.format_word(r) for r in self.relators)
        return f"gens: {' '.join(self.generators)}\nrels: {rels}\n"

    def restrict(self, names: Sequence[str]) -> "Presentation":
        """Sub-presentation on ``names`` keeping every relator over them."""
        keep = {self.index(n) for n in names}
        new_index = {self.index(n): k for k, n in enumerate(names)}
        rels = []
        for r in self.relators:
            if r.generators_used() <= keep:
                rels.append(Word(tuple(2 * new_index[a >> 1] + (a & 1) for a in r.letters)))
        return Presentation(tuple(names), tuple(rels))

    def translate(self, w: Word, target: "Presentation") -> Word:
        """Re-express ``w`` over ``target`` by matching generator names."""
        out = []
        pos = {g: j for j, g in enumerate(target.generators)}
        for a in w.letters:
            name = self.generators[a >> 1]
            if name not in pos:
                raise UndeclaredGenerator(f"generator {name!r} not in {list(target.generators)}")
            out.append(2 * pos[name] + (a & 1))
        return Word(tuple(out))


# ---------------------------------------------------------------------------
# parser

_TOKEN = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>#[^\n]*)"
    r"|(?P<int>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_']*)"
    r"|(?P<op>[\^\*=,;\-\(\)\[\]\{\}:])"
)


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise PresentationError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            toks.append(_Tok("nl", "\n", line, pos - line_start + 1))
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            toks.append(_Tok(kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


class _Parser:
    def __init__(self, toks: list[_Tok], names: Sequence[str]):
        self.toks = toks
        self.i = 0
        self.names = list(names)
        self.lookup = {n: k for k, n in enumerate(self.names)}
        self.by_length = sorted(self.names, key=len, reverse=True)
        self.depth = 0

    # token helpers; newlines are insignificant inside brackets
    def peek(self) -> _Tok:
        j = self.i
        while self.depth and self.toks[j].kind == "nl":
            j += 1
        return self.toks[j]

    def next(self) -> _Tok:
        while self.depth and self.toks[self.i].kind == "nl":
            self.i += 1
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> _Tok:
        t = self.next()
        if t.text != text:
            raise PresentationError(f"expected {text!r}, found {t.text or 'end of input'!r}", t.line, t.col)
        return t

    def split_ident(self, t: _Tok) -> Word:
        s = t.text
        out: list[int] = []
        pos = 0
        while pos < len(s):
            for n in self.by_length:
                if s.startswith(n, pos):
                    out.append(2 * self.lookup[n])
                    pos += len(n)
                    break
            else:
                raise UndeclaredGenerator(f"undeclared generator in {s!r}", t.line, t.col + pos)
        return Word(tuple(out))

    def starts_atom(self, t: _Tok) -> bool:
        return t.kind == "ident" or t.text in ("(", "{", "[") or (t.kind == "int" and t.text == "1")

    def atom(self) -> Word:
        t = self.next()
        if t.kind == "ident":
            return self.split_ident(t)
        if t.kind == "int":
            if t.text != "1":
                raise PresentationError(f"unexpected integer {t.text}", t.line, t.col)
            return Word()
        if t.text in ("(", "{"):
            close = ")" if t.text == "(" else "}"
            self.depth += 1
            w = self.expr()
            self.expect(close)
            self.depth -= 1
            return w
        if t.text == "[":
            self.depth += 1
            u = self.expr()
            self.expect(",")
            v = self.expr()
            self.expect("]")
            self.depth -= 1
            return commutator(u, v)
        raise PresentationError(f"unexpected token {t.text or 'end of input'!r}", t.line, t.col)

    def integer_exponent(self) -> int | None:
        """Try to read ``n``, ``-n``, ``(n)``, ``{-n}``; None if not an integer."""
        save = self.i
        t = self.peek()
        brace = None
        if t.text in ("(", "{"):
            brace = ")" if t.text == "(" else "}"
            self.next()
            t = self.peek()
        sign = 1
        if t.text == "-":
            self.next()
            sign = -1
            t = self.peek()
        if t.kind == "int":
            self.next()
            value = sign * int(t.text)
            if brace is not None:
                if self.peek().text != brace:
                    self.i = save
                    return None
                self.next()
            return value
        self.i = save
        return None

    def factor(self) -> Word:
        prefix = Word()
        t = self.peek()
        if t.kind == "ident":
            # in a run like ``te^-1`` the exponent binds to the last name only
            self.next()
            run = self.split_ident(t)
            prefix, w = Word(run.letters[:-1]), Word(run.letters[-1:])
        else:
            w = self.atom()
        while self.peek().text == "^":
            self.next()
            e = self.integer_exponent()
            if e is not None:
                w = w ** e
            else:
                w = w.conj(self.atom())
        return prefix * w

    def expr(self) -> Word:
        t = self.peek()
        if not self.starts_atom(t):
            raise PresentationError(f"expected a word, found {t.text or 'end of input'!r}", t.line, t.col)
        w = self.factor()
        while True:
            t = self.peek()
            if t.text == "*":
                self.next()
                w = w * self.factor()
            elif self.starts_atom(t):
                w = w * self.factor()
            else:
                return w

    def relation(self) -> Word:
        lhs = self.expr()
        if self.peek().text == "=":
            self.next()
            rhs = self.expr()
            return lhs * rhs.inverse()
        return lhs


def _split_sections(toks: list[_Tok]) -> tuple[list[_Tok], list[_Tok]]:
    def find(word):
        for k in range(len(toks) - 1):
            if toks[k].kind == "ident" and toks[k].text == word and toks[k + 1].text == ":":
                return k
        return None

    g = find("gens")
    r = find("rels")
    if g is None:
        t = toks[0]
        raise PresentationError("missing 'gens:' section", t.line, t.col)
    if r is not None and r < g:
        t = toks[r]
        raise PresentationError("'rels:' must follow 'gens:'", t.line, t.col)
    for t in toks[:g]:
        if t.kind != "nl":
            raise PresentationError(f"unexpected {t.text!r} before 'gens:'", t.line, t.col)
    gen_toks = toks[g + 2 : r if r is not None else len(toks) - 1]
    rel_toks = toks[r + 2 :] if r is not None else [toks[-1]]
    return gen_toks, rel_toks


def parse_presentation(text: str) -> Presentation:
    toks = _tokenize(text)
    gen_toks, rel_toks = _split_sections(toks)
    names = []
    for t in gen_toks:
        if t.kind in ("nl",) or t.text in (",", ";"):
            continue
        if t.kind != "ident":
            raise PresentationError(f"bad generator name {t.text!r}", t.line, t.col)
        if t.text in names:
            raise PresentationError(f"duplicate generator {t.text!r}", t.line, t.col)
        names.append(t.text)
    if not names:
        t = gen_toks[0] if gen_toks else toks[0]
        raise PresentationError("empty generator list", t.line, t.col)

    p = _Parser(rel_toks, names)
    rels = []
    while True:
        t = p.peek()
        if t.kind == "eof":
            break
        if t.kind == "nl" or t.text in (",", ";"):
            p.next()
            continue
        rels.append(p.relation())
        t = p.peek()
        if not (t.kind in ("nl", "eof") or t.text in (",", ";")):
            raise PresentationError(f"unexpected token {t.text!r}", t.line, t.col)
    return Presentation(tuple(names), tuple(rels))


def parse_word(text: str, names: Sequence[str]) -> Word:
    p = _Parser(_tokenize(text), names)
    p.depth = 1  # newlines are just blanks here
    w = p.expr()
    t = p.peek()
    if t.kind != "eof":
        raise PresentationError(f"trailing input {t.text!r}", t.line, t.col)
    return w


def parse_word_list(text: str, names: Sequence[str]) -> list[Word]:
    """Comma-separated words, e.g. ``"xy, t, a, a^x"``."""
    p = _Parser(_tokenize(text), names)
    p.depth = 1
    out = []
    while p.peek().kind != "eof":
        if p.peek().text == ",":
            p.next()
            continue
        out.append(p.expr())
    return out


def format_presentation(pres: Presentation) -> str:
    return pres.format()
