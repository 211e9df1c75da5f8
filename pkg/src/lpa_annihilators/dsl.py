"""Text format for graphs and ideal presentations.

::

    graph {
      vertices: u v w;
      edge c: u -> u;
      edge e: u -> v;
      edges u -> w : inf;
      edges v -> w : inf with g1 g2;
    }
    ideal I {
      H: w;
      S: u;
      cycle: c;
      poly: 1 -1/2;
    }

``#`` starts a comment.  Repeated ``edge`` lines between the same pair add
to one bundle; ``edge u -> v;`` and ``edges ... : N`` without ``with``
invent names ``src_tgt_i``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import LpaError, ValidationError
from .graph import INF, EdgeBundle, Graph, make_cycle
from .ideals import IdealPresentation, RationalPolynomial, make_presentation, validate_pair
from .symbolic import LpaElement, multiply, vertex

_TOKEN = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>#[^\n]*)"
    r"|(?P<arrow>->)|(?P<sym>[{};:/*+\-=(),])|(?P<word>[A-Za-z0-9_'.]+)"
)


class DslError(ValidationError):
    def __init__(self, kind: str, message: str, line: int, column: int, **extra) -> None:
        super().__init__(kind, f"{line}:{column}: {message}", **extra)
        self.line = line
        self.column = column

    def to_dict(self) -> dict:
        d = super().to_dict()
        d.update(line=self.line, column=self.column)
        return d


@dataclass(frozen=True)
class Token:
    kind: str  # "word", "sym", "eof"
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise DslError("lexical", f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind in ("arrow", "sym"):
            tokens.append(Token("sym", m.group(), line, pos - line_start + 1))
        elif kind == "word":
            tokens.append(Token("word", m.group(), line, pos - line_start + 1))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Cursor:
    def __init__(self, tokens: list[Token]) -> None:
        self.tokens = tokens
        self.i = 0

    def peek(self) -> Token:
        return self.tokens[self.i]

    def next(self) -> Token:
        t = self.tokens[self.i]
        if t.kind != "eof":
            self.i += 1
        return t

    def at(self, text: str) -> bool:
        t = self.peek()
        return t.kind != "eof" and t.text == text

    def expect(self, text: str) -> Token:
        t = self.next()
        if t.text != text or t.kind == "eof":
            found = "end of input" if t.kind == "eof" else repr(t.text)
            raise DslError("syntax", f"expected {text!r}, found {found}", t.line, t.column)
        return t

    def word(self, what: str) -> Token:
        t = self.next()
        if t.kind != "word":
            found = "end of input" if t.kind == "eof" else repr(t.text)
            raise DslError("syntax", f"expected {what}, found {found}", t.line, t.column)
        return t

    def words_until(self, stop: str = ";") -> list[Token]:
        out = []
        while not self.at(stop):
            out.append(self.word("a name"))
        self.expect(stop)
        return out


@dataclass
class Workspace:
    graph: Graph
    ideals: dict[str, IdealPresentation] = field(default_factory=dict)

    def ideal(self, name: str) -> IdealPresentation:
        try:
            return self.ideals[name]
        except KeyError:
            raise ValidationError("unknown_ideal", f"no ideal named {name!r}") from None


def _rational(cur: _Cursor) -> Fraction:
    sign = 1
    if cur.at("-"):
        cur.next()
        sign = -1
    num = cur.word("a number")
    if not num.text.isdigit():
        raise DslError("syntax", f"expected an integer, found {num.text!r}", num.line, num.column)
    value = Fraction(int(num.text))
    if cur.at("/"):
        cur.next()
        den = cur.word("a denominator")
        if not den.text.isdigit() or int(den.text) == 0:
            raise DslError("syntax", f"bad denominator {den.text!r}", den.line, den.column)
        value /= int(den.text)
    return sign * value


def _parse_graph(cur: _Cursor) -> tuple[Graph, dict[str, Token]]:
    cur.expect("graph")
    cur.expect("{")
    declared: dict[str, Token] = {}
    mult: dict[tuple[str, str], int | float] = {}
    names: dict[tuple[str, str], list[str]] = {}
    uses: list[Token] = []
    edge_tokens: dict[str, Token] = {}

    def add_name(key, tok: Token) -> None:
        if tok.text in edge_tokens:
            raise DslError("semantic", f"edge name {tok.text!r} used twice", tok.line, tok.column, edges=[tok.text])
        edge_tokens[tok.text] = tok
        names.setdefault(key, []).append(tok.text)

    while not cur.at("}"):
        head = cur.word("'vertices', 'edge' or 'edges'")
        if head.text == "vertices":
            cur.expect(":")
            for t in cur.words_until():
                if t.text in declared:
                    raise DslError("semantic", f"vertex {t.text!r} declared twice", t.line, t.column, vertices=[t.text])
                declared[t.text] = t
        elif head.text == "edge":
            first = cur.word("an edge name")
            if cur.at("->"):
                # anonymous single edge: `edge u -> v;`
                src, name = first, None
            else:
                name = first
                cur.expect(":")
                src = cur.word("a source vertex")
            cur.expect("->")
            tgt = cur.word("a target vertex")
            cur.expect(";")
            uses += [src, tgt]
            key = (src.text, tgt.text)
            if name is None:
                n = len(names.get(key, ())) + 1
                name = Token("word", f"{src.text}_{tgt.text}_{n}", src.line, src.column)
            add_name(key, name)
            if mult.get(key) != INF:
                mult[key] = mult.get(key, 0) + 1
        elif head.text == "edges":
            src = cur.word("a source vertex")
            cur.expect("->")
            tgt = cur.word("a target vertex")
            cur.expect(":")
            m = cur.word("a multiplicity")
            uses += [src, tgt]
            key = (src.text, tgt.text)
            reps = []
            if cur.at("with"):
                cur.next()
                reps = cur.words_until()
            else:
                cur.expect(";")
            if m.text == "inf":
                mult[key] = INF
                for r in reps:
                    add_name(key, r)
            elif m.text.isdigit():
                n = int(m.text)
                if reps and len(reps) != n:
                    raise DslError(
                        "semantic", f"multiplicity {n} but {len(reps)} edge names", m.line, m.column
                    )
                if not reps:
                    reps = [Token("word", f"{src.text}_{tgt.text}_{i}", m.line, m.column) for i in range(1, n + 1)]
                for r in reps:
                    add_name(key, r)
                if mult.get(key) != INF:
                    mult[key] = mult.get(key, 0) + n
            else:
                raise DslError("syntax", f"multiplicity must be a number or 'inf', found {m.text!r}", m.line, m.column)
        else:
            raise DslError("syntax", f"unknown graph statement {head.text!r}", head.line, head.column)
    cur.expect("}")

    for t in uses:
        if t.text not in declared:
            raise DslError("semantic", f"undeclared vertex {t.text!r}", t.line, t.column, vertices=[t.text])
    for name, t in edge_tokens.items():
        if name in declared:
            raise DslError("semantic", f"edge name {name!r} clashes with a vertex", t.line, t.column, edges=[name])
    bundles = tuple(EdgeBundle(s, t, mult[(s, t)], tuple(names.get((s, t), ()))) for (s, t) in mult)
    return Graph(tuple(declared), bundles), edge_tokens


def _located(err: LpaError, tok: Token) -> DslError:
    if isinstance(err, ValidationError):
        return DslError(err.kind, err.message, tok.line, tok.column, vertices=err.vertices, edges=err.edges)
    return DslError("semantic", str(err), tok.line, tok.column)


def _parse_ideal(cur: _Cursor, g: Graph) -> tuple[str, IdealPresentation, Token]:
    start = cur.expect("ideal")
    name = cur.word("an ideal name")
    cur.expect("{")
    H: list[Token] = []
    S: list[Token] = []
    cycles: list[tuple[Token, list[Token]]] = []
    polys: list[tuple[Token, list[Fraction]]] = []
    while not cur.at("}"):
        head = cur.word("'H', 'S', 'cycle' or 'poly'")
        cur.expect(":")
        if head.text == "H":
            H += cur.words_until()
        elif head.text == "S":
            S += cur.words_until()
        elif head.text == "cycle":
            es = cur.words_until()
            if not es:
                raise DslError("syntax", "empty cycle", head.line, head.column)
            cycles.append((head, es))
        elif head.text == "poly":
            coeffs = []
            while not cur.at(";"):
                coeffs.append(_rational(cur))
            cur.expect(";")
            polys.append((head, coeffs))
        else:
            raise DslError("syntax", f"unknown ideal statement {head.text!r}", head.line, head.column)
    cur.expect("}")

    for t in H + S:
        if t.text not in g.vertices:
            raise DslError("semantic", f"unknown vertex {t.text!r}", t.line, t.column, vertices=[t.text])
    try:
        pair = validate_pair(g, [t.text for t in H], [t.text for t in S])
    except ValidationError as err:
        raise _located(err, name) from None
    cyc = []
    for head, es in cycles:
        for t in es:
            if not g.has_edge(t.text):
                raise DslError("semantic", f"unknown edge {t.text!r}", t.line, t.column, edges=[t.text])
        try:
            cyc.append(make_cycle(g, [t.text for t in es]))
        except ValidationError as err:
            raise _located(err, head) from None
    pol = []
    for head, coeffs in polys:
        try:
            pol.append(RationalPolynomial(tuple(coeffs)))
        except ValidationError as err:
            raise _located(err, head) from None
    try:
        pres = make_presentation(pair, cyc, pol)
    except ValidationError as err:
        raise _located(err, cycles[0][0] if cycles else name) from None
    return name.text, pres, start


def parse_workspace(text: str) -> Workspace:
    cur = _Cursor(tokenize(text))
    graph, _ = _parse_graph(cur)
    ws = Workspace(graph)
    while cur.peek().kind != "eof":
        t = cur.peek()
        if t.text != "ideal":
            raise DslError("syntax", f"expected 'ideal' or end of input, found {t.text!r}", t.line, t.column)
        name, pres, start = _parse_ideal(cur, graph)
        if name in ws.ideals:
            raise DslError("semantic", f"ideal {name!r} defined twice", start.line, start.column)
        ws.ideals[name] = pres
    return ws


def _fmt_mult(m) -> str:
    return "inf" if m == INF else str(m)


def format_workspace(ws: Workspace) -> str:
    g = ws.graph
    lines = ["graph {", f"  vertices: {' '.join(g.vertices)};"]
    for b in g.bundles:
        if not b.infinite and b.multiplicity == 1:
            lines.append(f"  edge {b.names[0]}: {b.source} -> {b.target};")
        else:
            with_ = f" with {' '.join(b.names)}" if b.names else ""
            lines.append(f"  edges {b.source} -> {b.target} : {_fmt_mult(b.multiplicity)}{with_};")
    lines.append("}")
    for name in sorted(ws.ideals):
        pres = ws.ideals[name]
        lines.append(f"ideal {name} {{")
        lines.append(f"  H: {' '.join(sorted(pres.pair.H))};")
        lines.append(f"  S: {' '.join(sorted(pres.pair.S))};")
        for c in sorted(pres.C, key=lambda c: c.edges):
            lines.append(f"  cycle: {' '.join(c.edges)};")
        for p in sorted(pres.P, key=lambda p: p.coefficients):
            lines.append(f"  poly: {p};")
        lines.append("}")
    return "\n".join(lines) + "\n"


def parse_element(g: Graph, text: str) -> LpaElement:
    """Parse ``2/3 e f g* - v + c`` style sums of products of vertices, edges
    and ghost edges (``e*``)."""
    cur = _Cursor(tokenize(text))
    total = LpaElement(g)
    sign = 1
    if cur.at("-"):
        cur.next()
        sign = -1
    elif cur.at("+"):
        cur.next()
    first = True
    while first or cur.at("+") or cur.at("-"):
        if not first:
            sign = 1 if cur.next().text == "+" else -1
        first = False
        coeff = Fraction(1)
        t = cur.peek()
        if t.kind == "word" and t.text.isdigit() and not g.has_edge(t.text) and t.text not in g.vertices:
            coeff = _rational(cur)
        term = None
        while cur.peek().kind == "word":
            w = cur.next()
            if w.text in g.vertices:
                factor = vertex(g, w.text)
                if cur.at("*"):
                    cur.next()
            elif g.has_edge(w.text):
                is_ghost = cur.at("*")
                if is_ghost:
                    cur.next()
                key = ((), (w.text,), g.target(w.text)) if is_ghost else ((w.text,), (), g.target(w.text))
                factor = LpaElement(g, {key: 1})
            else:
                raise DslError("semantic", f"unknown vertex or edge {w.text!r}", w.line, w.column)
            term = factor if term is None else multiply(term, factor)
        if term is None:
            if coeff != 0:
                t = cur.peek()
                raise DslError("syntax", "expected a vertex or edge", t.line, t.column)
            continue
        total = total + term.scale(sign * coeff)
    t = cur.peek()
    if t.kind != "eof":
        raise DslError("syntax", f"unexpected {t.text!r}", t.line, t.column)
    return total
