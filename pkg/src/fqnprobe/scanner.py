"""Compilation-free extraction of cannot-be-resolved simple names from partial Java.

The scanner works on a lenient token stream and a handful of local patterns:

* ``Type ident (= ; , ) :)``  declared type of a variable or parameter
* ``new Type``                instantiated type (constructor, generic or array)
* ``x.m`` at a chain start    receiver ``x`` and member ``m`` (``m()`` if invoked)

Later links of a call chain (``.toLowerCase()`` in ``br.readLine().toLowerCase()``)
never produce hits.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum

from .corpus import NameKind

JAVA_KEYWORDS = frozenset(
    """
    abstract assert boolean break byte case catch char class const continue default do
    double else enum extends final finally float for goto if implements import instanceof
    int interface long native new package private protected public return short static
    strictfp super switch synchronized this throw throws transient try void volatile while
    true false null var yield
    """.split()
)
PRIMITIVES = frozenset("boolean byte char double float int long short void".split())
PACKAGE_ROOTS = frozenset("java javax android androidx com org net sun jdk".split())

_DECL_FOLLOW = frozenset({"=", ";", ",", ")", ":"})
_GENERIC_ALLOWED = frozenset({",", ".", "?", "[", "]", "&"})
_GENERIC_KEYWORDS = frozenset({"extends", "super"}) | PRIMITIVES
_LOOKAHEAD = 64


class TokenKind(Enum):
    IDENT = "ident"
    KEYWORD = "keyword"
    LITERAL = "literal"
    PUNCT = "punct"
    GENERIC_OPEN = "generic_open"
    GENERIC_CLOSE = "generic_close"


@dataclass(frozen=True)
class Token:
    text: str
    kind: TokenKind
    line: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>//[^\n]*|/\*.*?(?:\*/|\Z))
  | (?P<literal>
        \"\"\".*?(?:\"\"\"|\Z)
      | "(?:\\.|[^"\\\n])*"?
      | '(?:\\.|[^'\\\n])*'?
      | 0[xXbB][0-9a-fA-F_]+[lL]?
      | \d[\d_]*(?:\.[\d_]*)?(?:[eE][+-]?\d+)?[fFdDlL]?
      | \.\d+(?:[eE][+-]?\d+)?[fFdD]?
    )
  | (?P<ident>(?:[^\W\d]|\$)(?:\w|\$)*)
  | (?P<op>>>>=|>>=|<<=|\.\.\.|->|::|\+\+|--|&&|\|\||==|!=|<=|>=|<<|[+\-*/%&|^]=)
  | (?P<char>.)
    """,
    re.VERBOSE | re.DOTALL,
)


def tokenize_lenient(source: str) -> list[Token]:
    """Tokenize arbitrary text as Java; comments are dropped and nothing raises.

    Shift operators ``>>``/``>>>`` come out as single ``>`` tokens so nested
    generics close cleanly; each ``<``/``>`` judged to be a type-argument
    bracket is re-tagged ``GENERIC_OPEN``/``GENERIC_CLOSE``.
    """
    tokens: list[Token] = []
    line = 1
    for m in _TOKEN_RE.finditer(source):
        text = m.group()
        kind = m.lastgroup
        if kind == "literal":
            tokens.append(Token(text, TokenKind.LITERAL, line))
        elif kind == "ident":
            tk = TokenKind.KEYWORD if text in JAVA_KEYWORDS else TokenKind.IDENT
            tokens.append(Token(text, tk, line))
        elif kind in ("op", "char"):
            tokens.append(Token(text, TokenKind.PUNCT, line))
        line += text.count("\n")
    _mark_generics(tokens)
    return tokens


def _mark_generics(tokens: list[Token]) -> None:
    i = 0
    n = len(tokens)
    while i < n:
        tok = tokens[i]
        if tok.text == "<" and tok.kind is TokenKind.PUNCT and i > 0 and (
            tokens[i - 1].kind is TokenKind.IDENT or tokens[i - 1].text == "."
        ):
            end = _generic_close(tokens, i)
            if end is not None:
                for j in range(i, end + 1):
                    t = tokens[j]
                    if t.text == "<":
                        tokens[j] = Token("<", TokenKind.GENERIC_OPEN, t.line)
                    elif t.text == ">":
                        tokens[j] = Token(">", TokenKind.GENERIC_CLOSE, t.line)
                i = end + 1
                continue
        i += 1


def _generic_close(tokens: list[Token], start: int) -> int | None:
    depth = 0
    for j in range(start, min(len(tokens), start + _LOOKAHEAD)):
        t = tokens[j]
        if t.text == "<":
            depth += 1
        elif t.text == ">":
            depth -= 1
            if depth == 0:
                return j
        elif t.kind is TokenKind.IDENT or t.text in _GENERIC_ALLOWED:
            continue
        elif t.kind is TokenKind.KEYWORD and t.text in _GENERIC_KEYWORDS:
            continue
        else:
            return None
    return None


def canonical_form(base: str, *, generic: bool = False, array: bool = False, constructor: bool = False) -> str:
    """Attach the single form suffix; array beats generic beats constructor."""
    if array:
        return base + "[]"
    if generic:
        return base + "<>"
    if constructor:
        return base + "()"
    return base


@dataclass(frozen=True)
class ScanHit:
    simple_name: str
    kind: NameKind
    line: int
    occurrence_count: int = 1


@dataclass
class _TypeRef:
    base: str
    line: int
    end: int
    primitive: bool = False
    qualified: bool = False
    generic: bool = False
    array: bool = False
    args: list["_TypeRef"] = field(default_factory=list)


class _Scan:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.n = len(tokens)
        self.order: list[str] = []
        self.first: dict[str, tuple[NameKind, int]] = {}
        self.counts: dict[str, int] = {}

    def text(self, i: int) -> str | None:
        return self.toks[i].text if 0 <= i < self.n else None

    def kind(self, i: int) -> TokenKind | None:
        return self.toks[i].kind if 0 <= i < self.n else None

    def record(self, name: str, kind: NameKind, line: int) -> None:
        if name not in self.first:
            self.first[name] = (kind, line)
            self.order.append(name)
            self.counts[name] = 0
        self.counts[name] += 1

    def emit_type(self, ref: _TypeRef, kind: NameKind, constructor: bool = False) -> None:
        if not ref.primitive and not ref.qualified:
            name = canonical_form(ref.base, generic=ref.generic, array=ref.array, constructor=constructor)
            self.record(name, kind, ref.line)
        for arg in ref.args:
            self.emit_type(arg, kind)

    def parse_type(self, i: int) -> _TypeRef | None:
        tok = self.toks[i] if i < self.n else None
        if tok is None:
            return None
        if tok.kind is TokenKind.KEYWORD and tok.text in PRIMITIVES:
            ref = _TypeRef(tok.text, tok.line, i + 1, primitive=True)
        elif tok.kind is TokenKind.IDENT:
            parts = [tok.text]
            j = i + 1
            while self.text(j) == "." and self.kind(j + 1) is TokenKind.IDENT:
                parts.append(self.toks[j + 1].text)
                j += 2
            ref = _TypeRef(".".join(parts), tok.line, j)
            ref.qualified = len(parts) > 1 and parts[0][:1].islower()
            if self.kind(j) is TokenKind.GENERIC_OPEN:
                ref.generic = True
                j = self._parse_args(j + 1, ref)
                if j is None:
                    return None
            ref.end = j
        else:
            return None
        j = ref.end
        while True:
            if self.text(j) == "[" and self.text(j + 1) == "]":
                ref.array = True
                j += 2
            elif self.text(j) == "...":
                ref.array = True
                j += 1
            else:
                break
        ref.end = j
        return ref

    def _parse_args(self, j: int, ref: _TypeRef) -> int | None:
        while j < self.n:
            tok = self.toks[j]
            if tok.kind is TokenKind.GENERIC_CLOSE:
                return j + 1
            if tok.text == ",":
                j += 1
            elif tok.text == "?":
                j += 1
                if self.text(j) in ("extends", "super"):
                    bound = self.parse_type(j + 1)
                    if bound is None:
                        return None
                    ref.args.append(bound)
                    j = bound.end
            else:
                arg = self.parse_type(j)
                if arg is None:
                    return None
                ref.args.append(arg)
                j = arg.end
                while self.text(j) == "&":
                    extra = self.parse_type(j + 1)
                    if extra is None:
                        return None
                    ref.args.append(extra)
                    j = extra.end
        return None

    def chain_start(self, i: int) -> bool:
        prev = self.text(i - 1)
        if prev not in (".", "::"):
            return True
        return prev == "." and self.text(i - 2) == "this" and self.text(i - 3) not in (".", "::")

    def skip_balanced(self, i: int) -> int:
        depth = 0
        while i < self.n:
            if self.toks[i].text == "(":
                depth += 1
            elif self.toks[i].text == ")":
                depth -= 1
                if depth <= 0:
                    return i + 1
            i += 1
        return i

    def run(self) -> list[ScanHit]:
        i = 0
        while i < self.n:
            tok = self.toks[i]
            if tok.text in ("import", "package") and self.text(i - 1) in (None, ";", "{", "}"):
                while i < self.n and self.toks[i].text != ";":
                    i += 1
                i += 1
            elif tok.text == "@" and self.kind(i + 1) is TokenKind.IDENT:
                i += 2
                while self.text(i) == "." and self.kind(i + 1) is TokenKind.IDENT:
                    i += 2
                if self.text(i) == "(":
                    i = self.skip_balanced(i)
            elif tok.text == "new" and tok.kind is TokenKind.KEYWORD:
                ref = self.parse_type(i + 1)
                if ref is None:
                    i += 1
                    continue
                if self.text(ref.end) == "[":
                    ref.array = True
                self.emit_type(ref, NameKind.INST_TYPE, constructor=self.text(ref.end) == "(")
                i = ref.end
            elif tok.kind is TokenKind.IDENT and self.chain_start(i):
                i = self._at_identifier(i)
            elif tok.text == "super" and self.text(i + 1) == ".":
                i += 3
            else:
                i += 1
        return [
            ScanHit(name, self.first[name][0], self.first[name][1], self.counts[name])
            for name in self.order
        ]

    def _at_identifier(self, i: int) -> int:
        ref = self.parse_type(i)
        if ref is not None and self.kind(ref.end) is TokenKind.IDENT and (
            ref.end + 1 >= self.n or self.text(ref.end + 1) in _DECL_FOLLOW
        ):
            self.emit_type(ref, NameKind.DECL_TYPE)
            return ref.end + 1
        tok = self.toks[i]
        if self.text(i + 1) != ".":
            return i + 1
        if tok.text in PACKAGE_ROOTS:
            j = i + 1
            while self.text(j) == "." and self.kind(j + 1) is TokenKind.IDENT:
                j += 2
            return j
        j = i + 2
        if self.kind(j) is TokenKind.GENERIC_OPEN:
            while j < self.n and self.kind(j) is not TokenKind.GENERIC_CLOSE:
                j += 1
            j += 1
        member = self.toks[j] if j < self.n else None
        if member is None:
            return j
        if member.kind is TokenKind.IDENT:
            self.record(tok.text, NameKind.RECEIVER, tok.line)
            called = self.text(j + 1) == "("
            self.record(canonical_form(member.text, constructor=called), NameKind.MEMBER, member.line)
            return j + 1
        if member.kind is TokenKind.KEYWORD:
            self.record(tok.text, NameKind.RECEIVER, tok.line)
        return i + 2


def extract_simple_names(source: str) -> list[ScanHit]:
    """Unique form-tagged simple names in order of first occurrence."""
    return _Scan(tokenize_lenient(source)).run()
