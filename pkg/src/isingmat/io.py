"""Plain-text instance and certificate formats.

Instance file::

    # comment lines and blank lines are ignored
    5 3                  <- element count m, row count r
    10011                <- r rows of m characters over {0,1}
    01010
    00111
    WEIGHTS 1 3/2 0.25 2 0
    ELEMENTS a b c d e   <- optional; default labels e0 .. e(m-1)

Certificate grammar::

    tree := leaf(TAG,[LABELS]) | sum(K,[LABELS],tree,tree)

with TAG one of graphic, cographic, r10, small and K one of 1, 2, 3.
Whitespace and newlines between tokens are ignored.
"""

from __future__ import annotations

import re
from fractions import Fraction
from pathlib import Path

from .decompose import CertLeaf, CertSum, Certificate, LEAF_TAGS
from .gf2 import Gf2Matrix
from .matroid import BinaryMatroid, WeightedMatroid

LABEL_RE = re.compile(r"[A-Za-z0-9_.:\-]+")


class ParseError(ValueError):
    pass


def _weight(tok: str) -> Fraction:
    try:
        w = Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad weight {tok!r}") from None
    if w < 0:
        raise ParseError(f"negative weight {tok!r}")
    return w


def parse_instance(text: str) -> WeightedMatroid:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ParseError("empty instance")
    head = lines[0].split()
    if len(head) != 2 or not all(h.isdigit() for h in head):
        raise ParseError(f"header must be 'm r', got {lines[0]!r}")
    m, r = int(head[0]), int(head[1])
    if len(lines) < 1 + r + 1:
        raise ParseError("instance is truncated")
    rows = []
    for i in range(r):
        row = lines[1 + i].replace(" ", "")
        if len(row) != m or set(row) - {"0", "1"}:
            raise ParseError(f"row {i + 1} must be {m} characters over 0/1, got {row!r}")
        rows.append([int(ch) for ch in row])
    rest = lines[1 + r:]
    weights = labels = None
    for ln in rest:
        key, _, body = ln.partition(" ")
        toks = body.split()
        if key == "WEIGHTS":
            if weights is not None:
                raise ParseError("duplicate WEIGHTS line")
            if len(toks) != m:
                raise ParseError(f"WEIGHTS needs {m} entries, got {len(toks)}")
            weights = [_weight(t) for t in toks]
        elif key == "ELEMENTS":
            if labels is not None:
                raise ParseError("duplicate ELEMENTS line")
            if len(toks) != m:
                raise ParseError(f"ELEMENTS needs {m} labels, got {len(toks)}")
            for t in toks:
                if not LABEL_RE.fullmatch(t):
                    raise ParseError(f"bad element label {t!r}")
            if len(set(toks)) != m:
                raise ParseError("element labels must be distinct")
            labels = toks
        else:
            raise ParseError(f"unexpected line {ln!r}")
    if weights is None:
        raise ParseError("missing WEIGHTS line")
    if labels is None:
        labels = [f"e{j}" for j in range(m)]
    matrix = Gf2Matrix.from_lists(rows, cols=m)
    return WeightedMatroid(BinaryMatroid(matrix, tuple(labels)), tuple(weights))


def read_instance(path: str | Path) -> WeightedMatroid:
    return parse_instance(Path(path).read_text())


def format_instance(w: WeightedMatroid) -> str:
    m = w.matroid
    out = [f"{m.size} {m.matrix.rows}"]
    out += ["".join(str(x) for x in row) for row in m.matrix.to_lists()]
    out.append("WEIGHTS " + " ".join(str(Fraction(g)) if not isinstance(g, float) else repr(g) for g in w.weights))
    out.append("ELEMENTS " + " ".join(m.labels))
    return "\n".join(out) + "\n"


# certificates

_TOKEN_RE = re.compile(r"\s*(?:(leaf|sum)\b|([\[\](),])|([A-Za-z0-9_.:\-]+))")


def _tokenize(text: str) -> list[str]:
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        mt = _TOKEN_RE.match(text, pos)
        if mt is None or mt.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r} at offset {pos}")
        out.append(mt.group(mt.lastindex))
        pos = mt.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return out


class _Parser:
    def __init__(self, tokens: list[str]):
        self.toks = tokens
        self.i = 0

    def peek(self) -> str | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, expected: str | None = None) -> str:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of certificate")
        if expected is not None and tok != expected:
            raise ParseError(f"expected {expected!r}, got {tok!r}")
        self.i += 1
        return tok

    def labels(self) -> tuple[str, ...]:
        self.take("[")
        out = []
        if self.peek() != "]":
            while True:
                tok = self.take()
                if not LABEL_RE.fullmatch(tok) or tok in ("leaf", "sum"):
                    raise ParseError(f"bad label {tok!r}")
                out.append(tok)
                if self.peek() == ",":
                    self.take(",")
                    continue
                break
        self.take("]")
        return tuple(out)

    def tree(self) -> Certificate:
        head = self.take()
        if head == "leaf":
            self.take("(")
            tag = self.take()
            if tag not in LEAF_TAGS:
                raise ParseError(f"unknown leaf tag {tag!r}")
            self.take(",")
            labels = self.labels()
            self.take(")")
            return CertLeaf(tag, labels)
        if head == "sum":
            self.take("(")
            k = self.take()
            if k not in ("1", "2", "3"):
                raise ParseError(f"sum order must be 1, 2 or 3, got {k!r}")
            self.take(",")
            shared = self.labels()
            self.take(",")
            left = self.tree()
            self.take(",")
            right = self.tree()
            self.take(")")
            return CertSum(int(k), shared, left, right)
        raise ParseError(f"expected 'leaf' or 'sum', got {head!r}")


def parse_certificate(text: str) -> Certificate:
    p = _Parser(_tokenize(text))
    tree = p.tree()
    if p.peek() is not None:
        raise ParseError(f"trailing input starting at {p.peek()!r}")
    return tree


def read_certificate(path: str | Path) -> Certificate:
    return parse_certificate(Path(path).read_text())


def format_certificate(cert: Certificate, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(cert, CertLeaf):
        return f"{pad}leaf({cert.tag},[{','.join(cert.labels)}])"
    return (f"{pad}sum({cert.k},[{','.join(cert.shared)}],\n"
            f"{format_certificate(cert.left, indent + 1)},\n"
            f"{format_certificate(cert.right, indent + 1)})")
