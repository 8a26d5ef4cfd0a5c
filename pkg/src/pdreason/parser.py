"""Text formats: p-rule files (.pd) and abstract argumentation graphs (.aaf).

A .pd file holds one statement per rule::

    # comment
    goodExamScore <- hardStudy : 0.8.
    ~hardStudy <- lazy : 1.
    timeForExtraExp <- : 0.5.

An .aaf file uses the ASPARTIX-style ``arg(a).`` and ``att(a,b).`` facts.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .model import Atom, Literal, PDFramework, PRule


@dataclass(frozen=True)
class SourceSpan:
    line: int
    column: int
    offset: int  # byte offset into the UTF-8 encoded text

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


class ParseError(ValueError):
    def __init__(self, message: str, span: SourceSpan):
        super().__init__(f"{span}: {message}")
        self.message = message
        self.span = span


@dataclass
class _Token:
    kind: str
    text: str
    span: SourceSpan


_PD_TOKENS = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<arrow><-)
  | (?P<number>(?:\d+(?:\.\d+)?|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[~,:.])
    """,
    re.VERBOSE,
)


class _Spans:
    """Maps character offsets to 1-based line/column and byte offsets."""

    def __init__(self, text: str):
        self.text = text
        self.line_starts = [0] + [m.end() for m in re.finditer("\n", text)]

    def at(self, pos: int) -> SourceSpan:
        lo, hi = 0, len(self.line_starts) - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if self.line_starts[mid] <= pos:
                lo = mid
            else:
                hi = mid - 1
        col = pos - self.line_starts[lo] + 1
        return SourceSpan(lo + 1, col, len(self.text[:pos].encode("utf-8")))


def _tokenize(text: str, pattern: re.Pattern, skip: tuple[str, ...]) -> list[_Token]:
    spans = _Spans(text)
    tokens = []
    pos = 0
    while pos < len(text):
        m = pattern.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", spans.at(pos))
        kind = m.lastgroup
        if kind not in skip:
            tok_kind = m.group(kind) if kind == "punct" else kind
            tokens.append(_Token(tok_kind, m.group(kind), spans.at(pos)))
        pos = m.end()
    tokens.append(_Token("eof", "", spans.at(len(text))))
    return tokens


class _Cursor:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.i = 0

    @property
    def peek(self) -> _Token:
        return self.tokens[self.i]

    def take(self, kind: str, what: str | None = None) -> _Token:
        tok = self.peek
        if tok.kind != kind:
            found = "end of input" if tok.kind == "eof" else repr(tok.text)
            raise ParseError(f"expected {what or kind!s}, found {found}", tok.span)
        self.i += 1
        return tok


def parse_pd(text: str) -> PDFramework:
    cur = _Cursor(_tokenize(text, _PD_TOKENS, ("ws", "comment")))
    atoms: dict[str, Atom] = {}

    def literal() -> Literal:
        positive = True
        while cur.peek.kind == "~":
            cur.take("~")
            positive = not positive
        name = cur.take("name", "atom name").text
        if name not in atoms:
            atoms[name] = Atom(len(atoms), name)
        return Literal(atoms[name], positive)

    rules = []
    while cur.peek.kind != "eof":
        start = cur.peek.span
        head = literal()
        cur.take("arrow", "'<-'")
        body = []
        if cur.peek.kind in ("name", "~"):
            body.append(literal())
            while cur.peek.kind == ",":
                cur.take(",")
                body.append(literal())
        cur.take(":", "':'")
        num = cur.take("number", "probability")
        theta = float(num.text)
        if not 0.0 <= theta <= 1.0:
            raise ParseError(f"probability {num.text} is outside [0, 1]", num.span)
        cur.take(".", "'.' ending the rule")
        try:
            rules.append(PRule.make(head, body, theta))
        except ValueError as exc:
            raise ParseError(str(exc), start) from None
    return PDFramework(tuple(atoms.values()), tuple(rules))


def format_theta(theta: float) -> str:
    return format(theta, ".6g")


def serialize_pd(framework: PDFramework) -> str:
    lines = []
    for rule in framework.rules:
        body = ", ".join(str(b) for b in rule.body)
        arrow = f"<- {body} :" if body else "<- :"
        lines.append(f"{rule.head} {arrow} {format_theta(rule.theta)}.")
    return "".join(line + "\n" for line in lines)


@dataclass
class AAGraph:
    arguments: list[str] = field(default_factory=list)
    attacks: list[tuple[str, str]] = field(default_factory=list)

    def attackers(self, arg: str) -> list[str]:
        """Attackers of ``arg`` in declaration order of the attackers."""
        found = {a for a, b in self.attacks if b == arg}
        return [a for a in self.arguments if a in found]


_AA_TOKENS = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>[%\#][^\n]*)
  | (?P<name>[A-Za-z0-9_]+)
  | (?P<punct>[(),.])
    """,
    re.VERBOSE,
)


def parse_aa(text: str) -> AAGraph:
    cur = _Cursor(_tokenize(text, _AA_TOKENS, ("ws", "comment")))
    graph = AAGraph()
    declared: set[str] = set()
    pending: list[tuple[str, str, SourceSpan]] = []
    seen_attacks: set[tuple[str, str]] = set()
    while cur.peek.kind != "eof":
        kw = cur.take("name", "'arg' or 'att'")
        if kw.text == "arg":
            cur.take("(", "'('")
            name = cur.take("name", "argument name")
            cur.take(")", "')'")
            cur.take(".", "'.'")
            if name.text in declared:
                raise ParseError(f"argument {name.text!r} declared twice", name.span)
            declared.add(name.text)
            graph.arguments.append(name.text)
        elif kw.text == "att":
            cur.take("(", "'('")
            a = cur.take("name", "argument name")
            cur.take(",", "','")
            b = cur.take("name", "argument name")
            cur.take(")", "')'")
            cur.take(".", "'.'")
            pending.append((a.text, b.text, a.span))
        else:
            raise ParseError(f"unknown statement {kw.text!r}", kw.span)
    for a, b, span in pending:
        for end in (a, b):
            if end not in declared:
                raise ParseError(f"attack refers to undeclared argument {end!r}", span)
        if (a, b) not in seen_attacks:
            seen_attacks.add((a, b))
            graph.attacks.append((a, b))
    return graph


def serialize_aa(graph: AAGraph) -> str:
    out = [f"arg({a})." for a in graph.arguments]
    out += [f"att({a},{b})." for a, b in graph.attacks]
    return "".join(line + "\n" for line in out)
