"""Strictly binary Newick reading and writing.

Grammar::

    tree    := subtree ";"
    subtree := leaf | "(" subtree "," subtree ")" [label] [":" number]
    leaf    := [label] [":" number]
    label   := [A-Za-z0-9_]+

Whitespace between tokens is ignored, branch lengths and internal labels are
discarded.  The parser keeps an explicit stack instead of recursing, so
arbitrarily deep trees are fine.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import NameCountMismatch, ParseError
from .trees import LEAF, Tree

__all__ = ["NewickDocument", "parse_newick", "to_newick", "read_newick_lines"]

_LABEL = re.compile(r"[A-Za-z0-9_]+")
_NUMBER = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")
_SPACE = re.compile(r"\s*")


@dataclass(frozen=True)
class NewickDocument:
    text: str
    tree: Tree
    leaf_names: tuple[str, ...] | None = None

    @property
    def parsed(self) -> Tree:
        return self.tree


class _Reader:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def skip(self):
        self.pos = _SPACE.match(self.text, self.pos).end()

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def fail(self, message, expected=None):
        offset = len(self.text[: self.pos].encode("utf-8"))
        raise ParseError(message, offset, expected)

    def label(self):
        self.skip()
        m = _LABEL.match(self.text, self.pos)
        if not m:
            return ""
        self.pos = m.end()
        return m.group()

    def branch_length(self):
        if self.peek() != ":":
            return
        self.pos += 1
        self.skip()
        m = _NUMBER.match(self.text, self.pos)
        if not m:
            self.fail("malformed branch length", "a number after ':'")
        self.pos = m.end()


def parse_newick(text: str) -> NewickDocument:
    """Parse one strictly binary Newick tree terminated by ``;``."""
    r = _Reader(text)
    if r.peek() == "":
        r.fail("empty input", "a tree")
    names: list[str] = []
    frames: list[list[Tree]] = []
    while True:
        # read one subtree start: either open groups or a leaf
        while r.peek() == "(":
            frames.append([])
            r.pos += 1
        c = r.peek()
        if c == ";" and not frames:
            r.fail("empty tree", "a subtree")
        name = r.label()
        names.append(name)
        r.branch_length()
        node = LEAF
        # close as many groups as the input allows
        while True:
            if not frames:
                c = r.peek()
                if c == ";":
                    r.pos += 1
                    if r.peek() != "":
                        r.fail("unexpected text after ';'", "end of input")
                    named = tuple(names) if any(names) else None
                    return NewickDocument(text, node, named)
                if c == "":
                    r.fail("missing ';'", "';'")
                if c in "),":
                    r.fail(f"unbalanced parentheses: {c!r} outside any group", "';'")
                r.fail(f"unexpected character {c!r}", "';'")
            frame = frames[-1]
            frame.append(node)
            c = r.peek()
            if c == ",":
                if len(frame) == 2:
                    r.fail("node with more than two children", "')'")
                r.pos += 1
                break
            if c == ")":
                if len(frame) != 2:
                    r.fail("node with a single child", "','")
                frames.pop()
                r.pos += 1
                node = Tree(frame[0], frame[1])
                r.label()
                r.branch_length()
                continue
            if c == "":
                r.fail("unbalanced parentheses: input ended inside a group", "',' or ')'")
            if c == ";":
                r.fail("unbalanced parentheses: ';' inside an open group", "',' or ')'")
            r.fail(f"unexpected character {c!r}", "',' or ')'")


def to_newick(t: Tree, names: Sequence[str] | None = None) -> str:
    """Serialise ``t``; leaves are named ``x1..xn`` left to right by default."""
    n = t.size
    if names is None:
        names = [f"x{i}" for i in range(1, n + 1)]
    elif len(names) != n:
        raise NameCountMismatch(f"{len(names)} names for a tree with {n} leaves")
    for name in names:
        if name and not _LABEL.fullmatch(name):
            raise ValueError(f"leaf name {name!r} is not a plain Newick label")
    out: list[str] = []
    leaf = iter(names)
    stack: list[object] = [t]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            out.append(item)
        elif item.left is None:
            out.append(next(leaf))
        else:
            stack.extend((")", item.right, ",", item.left))
            out.append("(")
    return "".join(out) + ";"


def read_newick_lines(lines: Iterable[str]) -> Iterator[tuple[int, NewickDocument | ParseError]]:
    """Parse one tree per line, yielding ``(line_number, document_or_error)``.

    Blank lines are skipped; a bad line does not stop the others.
    """
    for number, line in enumerate(lines, start=1):
        text = line.strip()
        if not text:
            continue
        try:
            yield number, parse_newick(text)
        except ParseError as err:
            yield number, err
