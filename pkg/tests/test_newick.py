import random
import re

import pytest
from hypothesis import given
from hypothesis import strategies as st

from caterpillars.errors import NameCountMismatch, ParseError
from caterpillars.newick import parse_newick, read_newick_lines, to_newick
from caterpillars.trees import LEAF, Tree, balanced, cherry, colless_index, comb, enumerate_ordered, gamma

from test_trees import random_tree, trees


def test_examples():
    doc = parse_newick("(a,b);")
    assert doc.parsed == cherry()
    assert doc.leaf_names == ("a", "b")
    doc = parse_newick("((a,b),(c,d));")
    assert doc.tree == balanced(2)
    assert gamma(doc.tree) == 2
    doc = parse_newick("((((a,b),c),d),e);")
    assert doc.tree == comb(5)
    assert gamma(doc.tree) == 5 and colless_index(doc.tree) == 1


def test_optional_parts():
    doc = parse_newick(" ( a:0.1 , ( b:1e-3,c:2 )inner:.5 ) root ; ")
    assert doc.tree == Tree(LEAF, cherry())
    assert doc.leaf_names == ("a", "b", "c")
    doc = parse_newick("((,),);")
    assert doc.tree == Tree(cherry(), LEAF)
    assert doc.leaf_names is None
    assert parse_newick("x;").tree == LEAF


def test_to_newick():
    assert to_newick(cherry()) == "(x1,x2);"
    assert to_newick(comb(3), ["a", "b", "c"]) == "((a,b),c);"
    assert to_newick(comb(3, side="right"), ["a", "b", "c"]) == "(a,(b,c));"
    assert to_newick(LEAF) == "x1;"
    with pytest.raises(NameCountMismatch):
        to_newick(cherry(), ["a"])
    with pytest.raises(ValueError):
        to_newick(cherry(), ["a", "b c"])


def test_round_trip_t6():
    for t in enumerate_ordered(6):
        assert parse_newick(to_newick(t)).tree == t


@given(trees)
def test_round_trip_property(t):
    text = to_newick(t)
    doc = parse_newick(text)
    assert doc.tree == t
    assert to_newick(doc.tree, doc.leaf_names) == text


@given(trees, st.integers(0, 2**32))
def test_rendering_drops_decoration(t, seed):
    rng = random.Random(seed)
    plain = to_newick(t)
    decorated = []
    for token in re.findall(r"x\d+|[(),;]", plain):
        decorated.append(token)
        if token.startswith("x") and rng.random() < 0.5:
            decorated.append(f":{rng.random():.4f}")
        if token == ")" and rng.random() < 0.5:
            decorated.append(f"n{rng.randint(0, 99)}")
        if rng.random() < 0.2:
            decorated.append(" ")
    doc = parse_newick("".join(decorated))
    assert doc.tree == t
    assert to_newick(doc.tree, doc.leaf_names) == plain


ERRORS = [
    ("", 0, "empty input"),
    ("   ", 3, "empty input"),
    (";", 0, "empty tree"),
    ("(a,b)", 5, "missing ';'"),
    ("(a,b,c);", 4, "more than two children"),
    ("(a);", 2, "single child"),
    ("((a,b);", 6, "';' inside an open group"),
    ("(a,b));", 5, "outside any group"),
    ("(a,b", 4, "input ended inside a group"),
    ("(a:x,b);", 3, "malformed branch length"),
    ("(a,b);c", 6, "unexpected text after ';'"),
    ("(a,b)#;", 5, "unexpected character"),
]


@pytest.mark.parametrize("text, offset, message", ERRORS)
def test_errors(text, offset, message):
    with pytest.raises(ParseError) as info:
        parse_newick(text)
    assert info.value.offset == offset
    assert message in str(info.value)
    assert f"offset {offset}" in str(info.value)


def test_offsets_are_bytes():
    with pytest.raises(ParseError) as info:
        parse_newick("(é,b);")
    assert info.value.offset == 1


def test_deleting_any_parenthesis_is_rejected():
    rng = random.Random(3)
    for _ in range(200):
        text = to_newick(random_tree(rng, rng.randint(2, 40)))
        for i, ch in enumerate(text):
            if ch in "()":
                with pytest.raises(ParseError):
                    parse_newick(text[:i] + text[i + 1:])


@given(st.text(alphabet="(),;:ab1. ", max_size=30))
def test_arbitrary_text_never_crashes(text):
    try:
        doc = parse_newick(text)
    except ParseError:
        return
    # anything accepted must re-render and re-parse to the same tree
    assert parse_newick(to_newick(doc.tree)).tree == doc.tree


def test_deep_input():
    t = comb(50000)
    assert parse_newick(to_newick(t)).tree == t


def test_read_lines():
    lines = ["(a,b);\n", "\n", "(a,b\n", "((a,b),c);\n"]
    out = list(read_newick_lines(lines))
    assert [n for n, _ in out] == [1, 3, 4]
    assert out[0][1].tree == cherry()
    assert isinstance(out[1][1], ParseError)
    assert out[2][1].tree == comb(3)
