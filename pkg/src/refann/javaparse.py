"""Structural Java parser: lexes a source file and extracts the typed
code elements the element index serves.

This is not a full grammar. It recognizes the declarations and
expressions relevant for annotation (type/method/field/variable/parameter
declarations, method invocations, identifier tokens) by token-level
structural analysis, which is sufficient for ordinary Java source.
Files it cannot make sense of are reported as parse failures, never
crashes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .model import ElementType, TextRange

KEYWORDS = frozenset("""
abstract assert boolean break byte case catch char class const continue
default do double else enum extends final finally float for goto if
implements import instanceof int interface long native new package private
protected public return short static strictfp super switch synchronized
this throw throws transient try void volatile while var
""".split())

PRIMITIVE_TYPES = frozenset(
    {"boolean", "byte", "char", "double", "float", "int", "long", "short", "var"}
)

MODIFIER_KEYWORDS = frozenset(
    {"public", "private", "protected", "static", "final", "abstract",
     "native", "synchronized", "transient", "volatile", "strictfp", "default"}
)

TYPE_KEYWORDS = frozenset({"class", "interface", "enum"})

# tokens permitted inside a generic argument list; anything else means the
# '<' was a comparison, not generics
GENERIC_PUNCT = frozenset({"<", ">", ",", ".", "?", "[", "]", "&", "@"})


class JavaParseError(Exception):
    pass


@dataclass(frozen=True)
class Token:
    kind: str  # ident | keyword | number | string | char | punct
    text: str
    line: int
    col: int

    @property
    def end_col(self) -> int:
        return self.col + len(self.text)


def tokenize(text: str) -> list[Token]:
    """Lex Java source; comments and whitespace are dropped."""
    tokens: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(text)

    def advance(k: int):
        nonlocal i, line, col
        for _ in range(k):
            if text[i] == "\n":
                line += 1
                col = 1
            else:
                col += 1
            i += 1

    while i < n:
        c = text[i]
        if c in " \t\r\n\f":
            advance(1)
            continue
        if c == "/" and i + 1 < n and text[i + 1] == "/":
            while i < n and text[i] != "\n":
                advance(1)
            continue
        if c == "/" and i + 1 < n and text[i + 1] == "*":
            end = text.find("*/", i + 2)
            if end < 0:
                raise JavaParseError(f"unterminated comment at line {line}")
            advance(end + 2 - i)
            continue
        if c in "\"'":
            start_line, start_col = line, col
            j = i + 1
            while j < n:
                if text[j] == "\\":
                    j += 2
                    continue
                if text[j] == c:
                    break
                if text[j] == "\n":
                    raise JavaParseError(f"unterminated literal at line {line}")
                j += 1
            if j >= n:
                raise JavaParseError(f"unterminated literal at line {line}")
            lit = text[i:j + 1]
            tokens.append(Token("string" if c == '"' else "char",
                                lit, start_line, start_col))
            advance(len(lit))
            continue
        if c.isdigit() or (c == "." and i + 1 < n and text[i + 1].isdigit()):
            j = i
            while j < n and (text[j].isalnum() or text[j] in "._xXbBeE+-"):
                # stop a trailing +/- unless preceded by an exponent marker
                if text[j] in "+-" and text[j - 1] not in "eE":
                    break
                j += 1
            tokens.append(Token("number", text[i:j], line, col))
            advance(j - i)
            continue
        if c.isalpha() or c in "_$":
            j = i
            while j < n and (text[j].isalnum() or text[j] in "_$"):
                j += 1
            word = text[i:j]
            kind = "keyword" if word in KEYWORDS else "ident"
            tokens.append(Token(kind, word, line, col))
            advance(j - i)
            continue
        # single-character punctuation; multi-char operators stay split,
        # which is all the structural pass needs
        tokens.append(Token("punct", c, line, col))
        advance(1)
    return tokens


@dataclass(frozen=True)
class RawElement:
    element_type: ElementType
    start: int  # token index
    end: int    # token index, inclusive
    name: Optional[str]


@dataclass(frozen=True)
class MethodBody:
    decl_start: int
    decl_end: int
    open_brace: Optional[int]
    close_brace: Optional[int]


@dataclass
class ParsedFile:
    path: str
    elements: list  # list[tuple[ElementType, TextRange, Optional[str]]]
    method_bodies: list  # list[tuple[TextRange, Optional[TextRange]]]
    ok: bool = True
    error: Optional[str] = None


class _StructureParser:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.elements: list[RawElement] = []
        self.method_bodies: list[MethodBody] = []
        self.excluded: set[int] = set()       # package/import token indices
        self.decl_names: set[int] = set()     # method decl name tokens

    # --- token helpers ---

    def text(self, i: int) -> str:
        return self.toks[i].text if 0 <= i < len(self.toks) else ""

    def kind(self, i: int) -> str:
        return self.toks[i].kind if 0 <= i < len(self.toks) else ""

    def match_forward(self, i: int, open_c: str, close_c: str) -> int:
        """Index of the punct closing the bracket at i."""
        depth = 0
        for j in range(i, len(self.toks)):
            t = self.toks[j]
            if t.kind != "punct":
                continue
            if t.text == open_c:
                depth += 1
            elif t.text == close_c:
                depth -= 1
                if depth == 0:
                    return j
        raise JavaParseError(f"unbalanced {open_c!r} at token {i}")

    def match_backward(self, i: int, open_c: str, close_c: str) -> int:
        depth = 0
        for j in range(i, -1, -1):
            t = self.toks[j]
            if t.kind != "punct":
                continue
            if t.text == close_c:
                depth += 1
            elif t.text == open_c:
                depth -= 1
                if depth == 0:
                    return j
        raise JavaParseError(f"unbalanced {close_c!r} at token {i}")

    def skip_generics(self, i: int) -> Optional[int]:
        """i points at '<'; return index after the matching '>' or None
        when the contents rule this out as a type argument list."""
        depth = 0
        j = i
        while j < len(self.toks):
            t = self.toks[j]
            if t.kind == "punct":
                if t.text == "<":
                    depth += 1
                elif t.text == ">":
                    depth -= 1
                    if depth == 0:
                        return j + 1
                elif t.text not in GENERIC_PUNCT:
                    return None
            elif t.kind == "keyword" and t.text not in (
                    "extends", "super") and t.text not in PRIMITIVE_TYPES:
                return None
            elif t.kind in ("number", "string", "char"):
                return None
            j += 1
        return None

    # --- compilation unit ---

    def parse(self) -> None:
        i = 0
        n = len(self.toks)
        while i < n:
            t = self.toks[i]
            if t.kind == "keyword" and t.text in ("package", "import"):
                j = i
                while j < n and self.text(j) != ";":
                    j += 1
                self.excluded.update(range(i, j + 1))
                i = j + 1
            elif t.kind == "keyword" and t.text in TYPE_KEYWORDS:
                i = self.parse_type_decl(i)
            else:
                i += 1

    def decl_start(self, kw_idx: int) -> int:
        """Walk back over modifiers and annotations to the first token of
        the declaration."""
        j = kw_idx
        while j > 0:
            p = self.toks[j - 1]
            if p.kind == "keyword" and p.text in MODIFIER_KEYWORDS:
                j -= 1
                continue
            if p.kind == "punct" and p.text == ")":
                o = self.match_backward(j - 1, "(", ")")
                a = self.annotation_start(o - 1)
                if a is not None:
                    j = a
                    continue
                break
            if p.kind == "ident":
                a = self.annotation_start(j - 1)
                if a is not None:
                    j = a
                    continue
                break
            break
        return j

    def annotation_start(self, name_idx: int) -> Optional[int]:
        """If the (possibly qualified) identifier ending at name_idx is an
        annotation name, return the '@' index."""
        j = name_idx
        if self.kind(j) != "ident":
            return None
        while j >= 2 and self.text(j - 1) == "." and self.kind(j - 2) == "ident":
            j -= 2
        if j >= 1 and self.text(j - 1) == "@":
            return j - 1
        return None

    def parse_type_decl(self, kw_idx: int) -> int:
        start = self.decl_start(kw_idx)
        is_enum = self.text(kw_idx) == "enum"
        name_idx = kw_idx + 1
        if self.kind(name_idx) != "ident":
            raise JavaParseError(f"type declaration without a name at token {kw_idx}")
        j = name_idx + 1
        while j < len(self.toks) and self.text(j) != "{":
            if self.text(j) == "<":
                nxt = self.skip_generics(j)
                if nxt is None:
                    raise JavaParseError(f"bad type parameters at token {j}")
                j = nxt
            else:
                j += 1
        if j >= len(self.toks):
            raise JavaParseError("type declaration without a body")
        open_brace = j
        close_brace = self.match_forward(open_brace, "{", "}")
        self.elements.append(RawElement(
            ElementType.CLASS_DECLARATION, start, close_brace,
            self.toks[name_idx].text))
        body_start = open_brace + 1
        if is_enum:
            body_start = self.skip_enum_constants(body_start, close_brace)
        self.parse_class_body(body_start, close_brace)
        return close_brace + 1

    def skip_enum_constants(self, i: int, end: int) -> int:
        depth = 0
        j = i
        while j < end:
            t = self.toks[j]
            if t.kind == "punct":
                if t.text in "({[":
                    j = self.match_forward(j, t.text, {"(": ")", "{": "}", "[": "]"}[t.text])
                elif t.text == ";" and depth == 0:
                    return j + 1
            j += 1
        return end

    # --- class members ---

    def parse_class_body(self, i: int, end: int) -> None:
        while i < end:
            t = self.toks[i]
            if t.kind == "punct" and t.text == ";":
                i += 1
                continue
            if t.kind == "keyword" and t.text in TYPE_KEYWORDS:
                i = self.parse_type_decl(i)
                continue
            if t.kind == "punct" and t.text == "{":
                close = self.match_forward(i, "{", "}")
                self.parse_block(i + 1, close)
                i = close + 1
                continue
            if (t.kind == "keyword" and t.text == "static"
                    and self.text(i + 1) == "{"):
                close = self.match_forward(i + 1, "{", "}")
                self.parse_block(i + 2, close)
                i = close + 1
                continue
            j = self.scan_member_head(i, end)
            if j >= end:
                break
            head = self.toks[j]
            if head.kind == "keyword" and head.text in TYPE_KEYWORDS:
                i = self.parse_type_decl(j)
            elif head.text == "(":
                i = self.parse_method(i, j, end)
            elif head.text == "{":
                close = self.match_forward(j, "{", "}")
                self.parse_block(j + 1, close)
                i = close + 1
            else:
                i = self.parse_field(i, j, end)

    def scan_member_head(self, i: int, end: int) -> int:
        """Advance to the token that discriminates the member kind:
        '(' method, '='/';' field, '{' initializer, or a nested type."""
        j = i
        while j < end:
            t = self.toks[j]
            if t.kind == "keyword" and t.text in TYPE_KEYWORDS:
                return j
            if t.kind == "punct":
                if t.text == "<":
                    nxt = self.skip_generics(j)
                    if nxt is None:
                        raise JavaParseError(f"bad generics in member at token {j}")
                    j = nxt
                    continue
                if t.text in ("(", "=", ";", "{"):
                    return j
                if t.text == "@" and self.kind(j + 1) == "ident":
                    # annotation; skip name and optional argument list
                    k = j + 2
                    while self.text(k) == "." and self.kind(k + 1) == "ident":
                        k += 2
                    if self.text(k) == "(":
                        k = self.match_forward(k, "(", ")") + 1
                    j = k
                    continue
            j += 1
        return end

    def parse_method(self, start: int, paren_idx: int, end: int) -> int:
        name_idx = paren_idx - 1
        if self.kind(name_idx) != "ident":
            raise JavaParseError(f"method without a name at token {paren_idx}")
        self.decl_names.add(name_idx)
        close_paren = self.match_forward(paren_idx, "(", ")")
        self.parse_parameters(paren_idx + 1, close_paren)
        j = close_paren + 1
        while j < end and self.text(j) not in ("{", ";"):
            j += 1
        if j >= end:
            raise JavaParseError(f"method header without a body at token {start}")
        name = self.toks[name_idx].text
        if self.text(j) == ";":
            self.elements.append(RawElement(
                ElementType.METHOD_DECLARATION, start, j, name))
            self.method_bodies.append(MethodBody(start, j, None, None))
            return j + 1
        open_brace = j
        close_brace = self.match_forward(open_brace, "{", "}")
        self.elements.append(RawElement(
            ElementType.METHOD_DECLARATION, start, close_brace, name))
        self.method_bodies.append(MethodBody(start, close_brace,
                                             open_brace, close_brace))
        self.parse_block(open_brace + 1, close_brace)
        return close_brace + 1

    def parse_parameters(self, i: int, end: int) -> None:
        seg_start = i
        depth = 0
        j = i
        while j <= end:
            at_end = j == end
            t = None if at_end else self.toks[j]
            if not at_end and t.kind == "punct":
                if t.text in "([{<":
                    depth += 1
                elif t.text in ")]}>":
                    depth -= 1
            if at_end or (depth == 0 and t.kind == "punct" and t.text == ","):
                if seg_start < j:
                    last = j - 1
                    name_idx = None
                    for k in range(last, seg_start - 1, -1):
                        if self.kind(k) == "ident":
                            name_idx = k
                            break
                    receiver = (self.kind(last) == "keyword"
                                and self.text(last) == "this")
                    if name_idx is not None and not receiver:
                        self.elements.append(RawElement(
                            ElementType.PARAMETER_DECLARATION,
                            seg_start, last, self.toks[name_idx].text))
                seg_start = j + 1
            j += 1

    def parse_field(self, start: int, sep_idx: int, end: int) -> int:
        # find the terminating ';' at member level
        j = sep_idx
        while j < end:
            t = self.toks[j]
            if t.kind == "keyword" and t.text == "new":
                nxt = self.try_anonymous_class(j, end)
                if nxt is not None:
                    j = nxt
                    continue
            if t.kind == "punct":
                if t.text in "([{":
                    j = self.match_forward(j, t.text, {"(": ")", "[": "]", "{": "}"}[t.text])
                elif t.text == ";":
                    break
            j += 1
        if j >= end:
            raise JavaParseError(f"field without a terminator at token {start}")
        name = None
        k = sep_idx if self.text(sep_idx) in ("=", ";") else j
        k -= 1
        while k > start and self.text(k) == "]" :
            k = self.match_backward(k, "[", "]") - 1
        if self.kind(k) == "ident":
            name = self.toks[k].text
        self.elements.append(RawElement(
            ElementType.FIELD_DECLARATION, start, j, name))
        return j + 1

    # --- statements ---

    def parse_block(self, i: int, end: int) -> None:
        stmt_start = True
        while i < end:
            if stmt_start:
                nxt = self.try_local_var(i, end)
                if nxt is not None:
                    i = nxt
                    stmt_start = True
                    continue
            t = self.toks[i]
            if t.kind == "keyword" and t.text == "new":
                nxt = self.try_anonymous_class(i, end)
                if nxt is not None:
                    i = nxt
                    stmt_start = False
                    continue
            if t.kind == "keyword" and t.text == "for" and self.text(i + 1) == "(":
                i += 2
                stmt_start = True
                continue
            if t.kind == "punct" and t.text in (";", "{", "}"):
                stmt_start = True
                i += 1
                continue
            stmt_start = False
            i += 1

    def try_anonymous_class(self, i: int, end: int) -> Optional[int]:
        """i points at 'new'; when an anonymous class body follows, parse
        its members and return the index after the closing brace."""
        j = i + 1
        if self.kind(j) == "keyword" and self.text(j) in PRIMITIVE_TYPES:
            return None  # array creation
        if self.kind(j) != "ident":
            return None
        j += 1
        while self.text(j) == "." and self.kind(j + 1) == "ident":
            j += 2
        if self.text(j) == "<":
            nxt = self.skip_generics(j)
            if nxt is None:
                return None
            j = nxt
        if self.text(j) == "[":
            return None  # array creation
        if self.text(j) != "(":
            return None
        j = self.match_forward(j, "(", ")") + 1
        if self.text(j) != "{":
            return None
        close = self.match_forward(j, "{", "}")
        self.parse_class_body(j + 1, close)
        return close + 1

    def try_local_var(self, i: int, end: int) -> Optional[int]:
        """Match a local variable declaration at a statement start.
        Returns the index to resume scanning from, or None."""
        j = i
        while True:
            if self.kind(j) == "keyword" and self.text(j) == "final":
                j += 1
                continue
            if self.text(j) == "@" and self.kind(j + 1) == "ident":
                k = j + 2
                while self.text(k) == "." and self.kind(k + 1) == "ident":
                    k += 2
                if self.text(k) == "(":
                    k = self.match_forward(k, "(", ")") + 1
                j = k
                continue
            break
        # base type
        if (self.kind(j) == "keyword" and self.text(j) in PRIMITIVE_TYPES):
            j += 1
        elif self.kind(j) == "ident":
            j += 1
            while self.text(j) == "." and self.kind(j + 1) == "ident":
                j += 2
            if self.text(j) == "<":
                nxt = self.skip_generics(j)
                if nxt is None:
                    return None
                j = nxt
        else:
            return None
        while self.text(j) == "[" and self.text(j + 1) == "]":
            j += 2
        if j >= end or self.kind(j) != "ident":
            return None
        name_idx = j
        j += 1
        while self.text(j) == "[" and self.text(j + 1) == "]":
            j += 2
        if j >= end or self.text(j) not in ("=", ";", ",", ":"):
            return None

        # declarator list confirmed
        while True:
            sep = self.text(j)
            if sep == ":":
                # for-each declarator: the name alone
                self.elements.append(RawElement(
                    ElementType.VARIABLE_DECLARATION, name_idx, j - 1,
                    self.toks[name_idx].text))
                return j + 1
            if sep == "=":
                k = self.scan_initializer(j + 1, end)
                self.elements.append(RawElement(
                    ElementType.VARIABLE_DECLARATION, name_idx, k - 1,
                    self.toks[name_idx].text))
                j = k
                sep = self.text(j)
            else:
                self.elements.append(RawElement(
                    ElementType.VARIABLE_DECLARATION, name_idx, j - 1,
                    self.toks[name_idx].text))
            if sep == ";":
                return j + 1
            if sep != ",":
                return j  # tolerate and resume
            j += 1
            if j >= end or self.kind(j) != "ident":
                return j
            name_idx = j
            j += 1
            while self.text(j) == "[" and self.text(j + 1) == "]":
                j += 2
            if j >= end or self.text(j) not in ("=", ";", ","):
                return j

    def scan_initializer(self, i: int, end: int) -> int:
        """Index of the ',' or ';' terminating an initializer expression."""
        j = i
        while j < end:
            t = self.toks[j]
            if t.kind == "punct":
                if t.text in "([{":
                    j = self.match_forward(j, t.text, {"(": ")", "[": "]", "{": "}"}[t.text])
                elif t.text in (",", ";"):
                    return j
            j += 1
        return end

    # --- expression-level passes ---

    def collect_invocations(self) -> None:
        n = len(self.toks)
        for idx in range(n - 1):
            t = self.toks[idx]
            if t.kind != "ident" or self.text(idx + 1) != "(":
                continue
            if idx in self.decl_names or idx in self.excluded:
                continue
            cs, pure = self.chain_start(idx)
            if cs > 0 and self.text(cs - 1) == "@":
                continue  # annotation
            if pure and cs > 0:
                prev = self.toks[cs - 1]
                if prev.kind == "keyword" and prev.text == "new":
                    continue  # constructor call
            close = self.match_forward(idx + 1, "(", ")")
            self.elements.append(RawElement(
                ElementType.METHOD_INVOCATION, cs, close, t.text))

    def chain_start(self, name_idx: int) -> tuple[int, bool]:
        """Start of the receiver chain ending at the given identifier and
        whether the chain is a plain dotted name."""
        start = name_idx
        pure = True
        while start > 0:
            p = self.toks[start - 1]
            if p.kind == "punct" and p.text == ".":
                q = start - 2
                if q < 0:
                    break
                t = self.toks[q]
                if t.kind == "ident" or (
                        t.kind == "keyword" and t.text in ("this", "super")):
                    if t.kind == "keyword":
                        pure = False
                    start = q
                    continue
                if t.kind in ("string", "char", "number"):
                    pure = False
                    start = q
                    continue
                if t.kind == "punct" and t.text in (")", "]"):
                    pure = False
                    open_c = "(" if t.text == ")" else "["
                    o = self.match_backward(q, open_c, t.text)
                    # an array index or call argument list chains onto
                    # the expression before it
                    start = o
                    while start > 0:
                        b = self.toks[start - 1]
                        if b.kind == "ident" or (
                                b.kind == "keyword" and b.text in ("this", "super")):
                            start -= 1
                        elif b.kind == "punct" and b.text in (")", "]"):
                            start = self.match_backward(
                                start - 1, "(" if b.text == ")" else "[", b.text)
                        else:
                            break
                    continue
                break
            break
        return start, pure

    def collect_identifiers(self) -> None:
        for idx, t in enumerate(self.toks):
            if t.kind == "ident" and idx not in self.excluded:
                self.elements.append(RawElement(
                    ElementType.IDENTIFIER, idx, idx, t.text))


def _token_range(path: str, toks: list[Token], start: int, end: int) -> TextRange:
    a, b = toks[start], toks[end]
    return TextRange(path=path, start_line=a.line, start_col=a.col,
                     end_line=b.line, end_col=b.end_col)


def parse_java(path: str, text: str) -> ParsedFile:
    """Parse one Java file into typed elements and method-body regions."""
    try:
        toks = tokenize(text)
        parser = _StructureParser(toks)
        parser.parse()
        parser.collect_invocations()
        parser.collect_identifiers()
    except (JavaParseError, IndexError, RecursionError) as exc:
        return ParsedFile(path=path, elements=[], method_bodies=[],
                          ok=False, error=str(exc))

    seen: set[tuple[ElementType, tuple]] = set()
    elements = []
    for raw in parser.elements:
        rng = _token_range(path, toks, raw.start, raw.end)
        key = (raw.element_type, rng.sort_key())
        if key in seen:
            continue
        seen.add(key)
        elements.append((raw.element_type, rng, raw.name))
    elements.sort(key=lambda e: (e[1].sort_key(), e[0].value))

    bodies = []
    for mb in parser.method_bodies:
        decl = _token_range(path, toks, mb.decl_start, mb.decl_end)
        interior = None
        if mb.open_brace is not None:
            o, c = toks[mb.open_brace], toks[mb.close_brace]
            start = (o.line, o.end_col)
            end = (c.line, c.col)
            if start < end:
                interior = TextRange(path=path,
                                     start_line=start[0], start_col=start[1],
                                     end_line=end[0], end_col=end[1])
        bodies.append((decl, interior))
    return ParsedFile(path=path, elements=elements, method_bodies=bodies)
