"""Lexer and recursive-descent parser for the concrete term syntax and the
command language, plus the named/indexed conversions `fix_index` / `fix_id`.

The parser produces terms whose variables are all `Const` nodes; `fix_index`
then rewrites names bound by enclosing binders into de Bruijn `Var` indices,
leaving genuinely free names as constants to be resolved against the global
signature.  Operator precedence, tightest first:

    application  >  &  >  |  >  ->        (-> , & , | associate right,
                                           application associates left)

`proj_l`, `proj_r`, `inj_l`, `inj_r`, and `coe` are prefix keywords that
consume exactly their displayed argument count at application precedence.
Comments are `(* ... *)` and nest.
"""

from __future__ import annotations

from dataclasses import dataclass

from proofun.errors import InternalError, LexError, ParseError
from proofun.syntax import (
    Abs, App, Coercion, Const, Inter, Let, Location, Meta, Prod, SInLeft,
    SInRight, SMatch, SPair, SPrLeft, SPrRight, Sort, SortKind, Term,
    Underscore, Union, Var, span, visit_term,
)

KEYWORDS = frozenset({
    "Type", "let", "in", "forall", "fun", "smatch", "as", "return", "with",
    "end", "proj_l", "proj_r", "inj_l", "inj_r", "coe",
})

_COMMAND_WORDS = frozenset({
    "Help", "Load", "Axiom", "Definition", "Print", "Printall", "Compute", "Quit",
})

_IDCHARS = frozenset(
    "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_'")


@dataclass(frozen=True)
class Token:
    kind: str  # ID KW UNDERSCORE STRING LPAREN RPAREN LT GT AMP BAR ARROW DARROW COLONEQ COLON COMMA DOT EOF
    text: str
    loc: Location


_KIND_NAMES = {
    "ARROW": "->", "DARROW": "=>", "COLONEQ": ":=", "COLON": ":",
    "COMMA": ",", "DOT": ".", "LPAREN": "(", "RPAREN": ")", "LT": "<",
    "GT": ">", "AMP": "&", "BAR": "|", "ID": "an identifier",
    "STRING": "a quoted path",
}


def tokenize(text: str, source: str = "<input>") -> list[Token]:
    toks: list[Token] = []
    line, col, i = 1, 1, 0
    n = len(text)

    def here(width: int) -> Location:
        return Location(source, (line, col), (line, col + width))

    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if c in " \t\r":
            i += 1
            col += 1
            continue
        if text.startswith("(*", i):
            depth, start = 1, here(2)
            i += 2
            col += 2
            while i < n and depth:
                if text.startswith("(*", i):
                    depth += 1
                    i += 2
                    col += 2
                elif text.startswith("*)", i):
                    depth -= 1
                    i += 2
                    col += 2
                elif text[i] == "\n":
                    line += 1
                    col = 1
                    i += 1
                else:
                    i += 1
                    col += 1
            if depth:
                raise LexError("unterminated comment", start)
            continue
        if c == '"':
            start = here(1)
            j = i + 1
            while j < n and text[j] not in '"\n':
                j += 1
            if j >= n or text[j] != '"':
                raise LexError("unterminated string", start)
            value = text[i + 1:j]
            toks.append(Token("STRING", value,
                              Location(source, (line, col), (line, col + (j - i) + 1))))
            col += (j - i) + 1
            i = j + 1
            continue
        two = text[i:i + 2]
        if two in ("->", "=>", ":="):
            kind = {"->": "ARROW", "=>": "DARROW", ":=": "COLONEQ"}[two]
            toks.append(Token(kind, two, here(2)))
            i += 2
            col += 2
            continue
        if c in "()<>&|:,.":
            kind = {"(": "LPAREN", ")": "RPAREN", "<": "LT", ">": "GT",
                    "&": "AMP", "|": "BAR", ":": "COLON", ",": "COMMA",
                    ".": "DOT"}[c]
            toks.append(Token(kind, c, here(1)))
            i += 1
            col += 1
            continue
        if c in _IDCHARS:
            j = i
            while j < n and text[j] in _IDCHARS:
                j += 1
            word = text[i:j]
            if word == "_":
                kind = "UNDERSCORE"
            elif word in KEYWORDS:
                kind = "KW"
            else:
                kind = "ID"
            toks.append(Token(kind, word, here(j - i)))
            col += j - i
            i = j
            continue
        raise LexError(f'unexpected character "{c}"', here(1))
    toks.append(Token("EOF", "", Location(source, (line, col), (line, col))))
    return toks


# ---------------------------------------------------------------------------
# Commands


@dataclass(frozen=True)
class Help:
    loc: Location


@dataclass(frozen=True)
class Load:
    loc: Location
    path: str


@dataclass(frozen=True)
class Axiom:
    loc: Location
    name: str
    type: Term


@dataclass(frozen=True)
class Definition:
    loc: Location
    name: str
    type: Term | None
    body: Term


@dataclass(frozen=True)
class Print:
    loc: Location
    name: str


@dataclass(frozen=True)
class Printall:
    loc: Location


@dataclass(frozen=True)
class Compute:
    loc: Location
    name: str


@dataclass(frozen=True)
class Quit:
    loc: Location


Command = Help | Load | Axiom | Definition | Print | Printall | Compute | Quit


class _Parser:
    def __init__(self, toks: list[Token]):
        self.toks = toks
        self.pos = 0

    def peek(self, ahead: int = 0) -> Token:
        return self.toks[min(self.pos + ahead, len(self.toks) - 1)]

    def next(self) -> Token:
        tok = self.peek()
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def at(self, kind: str, text: str | None = None) -> bool:
        tok = self.peek()
        return tok.kind == kind and (text is None or tok.text == text)

    def expect(self, kind: str, text: str | None = None) -> Token:
        tok = self.peek()
        if not self.at(kind, text):
            want = text or _KIND_NAMES.get(kind, kind.lower())
            raise ParseError(f'expected "{want}" but found "{tok.text or "end of input"}"',
                             tok.loc)
        return self.next()

    def fail(self, message: str) -> ParseError:
        return ParseError(message, self.peek().loc)

    # -- terms --------------------------------------------------------------

    def term(self) -> Term:
        tok = self.peek()
        if tok.kind == "KW" and tok.text in ("fun", "forall", "let"):
            return self.binder()
        return self.arrow()

    def binder(self) -> Term:
        tok = self.next()
        if tok.text == "fun":
            args = self.args(typed_tail=True)
            self.expect("DARROW")
            body = self.term()
            return self.fold_abs(tok.loc, args, body)
        if tok.text == "forall":
            args = self.args(typed_tail=True)
            self.expect("COMMA")
            body = self.term()
            return self.fold_prod(tok.loc, args, body)
        # let ID [args] [: T] := t1 in t2
        name = self.ident()
        args = self.args() if self.args_ahead() else []
        annot: Term = Underscore(tok.loc)
        if self.at("COLON"):
            self.next()
            annot = self.fold_prod(tok.loc, args, self.term())
        self.expect("COLONEQ")
        bound = self.fold_abs(tok.loc, args, self.term())
        self.expect("KW", "in")
        body = self.term()
        return Let(span(tok.loc, body.loc), name, annot, bound, body)

    def fold_abs(self, loc: Location, args: list[tuple[str, Term]], body: Term) -> Term:
        for name, annot in reversed(args):
            body = Abs(span(loc, body.loc), name, annot, body)
        return body

    def fold_prod(self, loc: Location, args: list[tuple[str, Term]], body: Term) -> Term:
        for name, annot in reversed(args):
            body = Prod(span(loc, body.loc), name, annot, body)
        return body

    def args_ahead(self) -> bool:
        return self.at("ID") or (self.at("LPAREN") and self.peek(1).kind == "ID")

    def args(self, typed_tail: bool = False) -> list[tuple[str, Term]]:
        """Non-empty argument sequence: bare names or `(x y z : T)` groups.

        With `typed_tail` (fun/forall position) a trailing `: T` types the
        final run of bare names, so `fun x y : A => e` works unparenthesized.
        """
        out: list[tuple[str, Term]] = []
        bare_run = 0
        while True:
            if self.at("ID"):
                tok = self.next()
                out.append((tok.text, Underscore(tok.loc)))
                bare_run += 1
            elif self.at("LPAREN") and self.peek(1).kind == "ID":
                self.next()
                names = [self.ident()]
                while self.at("ID"):
                    names.append(self.ident())
                self.expect("COLON")
                annot = self.term()
                self.expect("RPAREN")
                out.extend((n, annot) for n in names)
                bare_run = 0
            else:
                break
        if not out:
            raise self.fail("expected at least one argument")
        if typed_tail and bare_run and self.at("COLON"):
            self.next()
            annot = self.term()
            out[-bare_run:] = [(n, annot) for n, _ in out[-bare_run:]]
        return out

    def ident(self) -> str:
        return self.expect("ID").text

    def arrow(self) -> Term:
        left = self.union()
        if self.at("ARROW"):
            self.next()
            right = self.term()
            return Prod(span(left.loc, right.loc), "", left, right)
        return left

    def union(self) -> Term:
        left = self.inter()
        if self.at("BAR"):
            self.next()
            right = self.union()
            return Union(span(left.loc, right.loc), left, right)
        return left

    def inter(self) -> Term:
        left = self.app()
        if self.at("AMP"):
            self.next()
            right = self.inter()
            return Inter(span(left.loc, right.loc), left, right)
        return left

    def app(self) -> Term:
        head = self.prefix()
        args = []
        while self.atom_ahead():
            args.append(self.atom())
        if not args:
            return head
        return App(span(head.loc, args[-1].loc), head, tuple(args))

    def prefix(self) -> Term:
        tok = self.peek()
        if tok.kind == "KW" and tok.text in ("proj_l", "proj_r"):
            self.next()
            body = self.atom()
            node = SPrLeft if tok.text == "proj_l" else SPrRight
            return node(span(tok.loc, body.loc), body)
        if tok.kind == "KW" and tok.text in ("inj_l", "inj_r", "coe"):
            self.next()
            first = self.atom()
            second = self.atom()
            loc = span(tok.loc, second.loc)
            if tok.text == "inj_l":
                return SInLeft(loc, first, second)
            if tok.text == "inj_r":
                return SInRight(loc, first, second)
            return Coercion(loc, first, second)
        return self.atom()

    def atom_ahead(self) -> bool:
        tok = self.peek()
        return (tok.kind in ("ID", "UNDERSCORE", "LPAREN", "LT")
                or (tok.kind == "KW" and tok.text in ("Type", "smatch")))

    def atom(self) -> Term:
        tok = self.peek()
        if tok.kind == "ID":
            self.next()
            return Const(tok.loc, tok.text)
        if tok.kind == "UNDERSCORE":
            self.next()
            return Underscore(tok.loc)
        if tok.kind == "KW" and tok.text == "Type":
            self.next()
            return Sort(tok.loc, SortKind.TYPE)
        if tok.kind == "LPAREN":
            self.next()
            inner = self.term()
            self.expect("RPAREN")
            return inner
        if tok.kind == "LT":
            self.next()
            left = self.term()
            self.expect("COMMA")
            right = self.term()
            close = self.expect("GT")
            return SPair(span(tok.loc, close.loc), left, right)
        if tok.kind == "KW" and tok.text == "smatch":
            return self.smatch()
        raise self.fail(f'expected a term but found "{tok.text or "end of input"}"')

    def smatch(self) -> Term:
        start = self.expect("KW", "smatch")
        scrut = self.term()
        as_name = ""
        if self.at("KW", "as"):
            self.next()
            as_name = self.ident()
        ret: Term = Underscore(start.loc)
        if self.at("KW", "return"):
            self.next()
            ret = self.term()
        motive = Abs(span(start.loc, ret.loc), as_name, Underscore(start.loc), ret)
        self.expect("KW", "with")
        n1, a1, b1 = self.branch()
        self.expect("COMMA")
        n2, a2, b2 = self.branch()
        end = self.expect("KW", "end")
        return SMatch(span(start.loc, end.loc), scrut, motive, n1, a1, b1, n2, a2, b2)

    def branch(self) -> tuple[str, Term, Term]:
        name_tok = self.expect("ID")
        annot: Term = Underscore(name_tok.loc)
        if self.at("COLON"):
            self.next()
            annot = self.term()
        self.expect("DARROW")
        body = self.term()
        return name_tok.text, annot, body

    # -- commands -----------------------------------------------------------

    def command(self) -> list[Command]:
        tok = self.peek()
        if tok.kind != "ID" or tok.text not in _COMMAND_WORDS:
            raise self.fail(
                f'expected a command but found "{tok.text or "end of input"}"')
        self.next()
        word = tok.text
        if word in ("Help", "Printall", "Quit"):
            self.expect("DOT")
            return [{"Help": Help, "Printall": Printall, "Quit": Quit}[word](tok.loc)]
        if word == "Load":
            path = self.expect("STRING").text
            self.expect("DOT")
            return [Load(tok.loc, path)]
        if word in ("Print", "Compute"):
            name = self.ident()
            self.expect("DOT")
            return [Print(tok.loc, name) if word == "Print" else Compute(tok.loc, name)]
        if word == "Axiom":
            return self.axiom(tok.loc)
        return self.definition(tok.loc)

    def axiom(self, loc: Location) -> list[Command]:
        """`Axiom name : type.` or a sequence of `(names : type)` groups,
        which expands to one atomic command per name."""
        if self.at("ID"):
            name = self.ident()
            self.expect("COLON")
            ty = self.term()
            self.expect("DOT")
            return [Axiom(loc, name, ty)]
        out: list[Command] = []
        while self.at("LPAREN"):
            self.next()
            names = [self.ident()]
            while self.at("ID"):
                names.append(self.ident())
            self.expect("COLON")
            ty = self.term()
            self.expect("RPAREN")
            out.extend(Axiom(loc, n, ty) for n in names)
        if not out:
            raise self.fail("expected a name or a parenthesized group")
        self.expect("DOT")
        return out

    def definition(self, loc: Location) -> list[Command]:
        name = self.ident()
        args = self.args() if self.args_ahead() else []
        ty: Term | None = None
        if self.at("COLON"):
            self.next()
            ty = self.fold_prod(loc, args, self.term())
        self.expect("COLONEQ")
        body = self.fold_abs(loc, args, self.term())
        self.expect("DOT")
        return [Definition(loc, name, ty, body)]


def parse_term(text: str, source: str = "<input>") -> Term:
    """Parse a single term; variables come back as `Const` nodes."""
    p = _Parser(tokenize(text, source))
    t = p.term()
    p.expect("EOF")
    return t


def parse_command(text: str, source: str = "<input>") -> list[Command]:
    """Parse one period-terminated source command into its atomic commands."""
    p = _Parser(tokenize(text, source))
    cmds = p.command()
    p.expect("EOF")
    return cmds


def parse_script(text: str, source: str = "<script>") -> list[list[Command]]:
    """Parse a whole command stream; each inner list is one atomic unit."""
    p = _Parser(tokenize(text, source))
    out = []
    while not p.at("EOF"):
        out.append(p.command())
    return out


# ---------------------------------------------------------------------------
# Named <-> indexed conversions


def fix_index(t: Term, scope: tuple[str, ...] | list[str] = ()) -> Term:
    """Replace names bound by `scope` (innermost first) or by enclosing
    binders with de Bruijn indices; unknown names stay constants."""

    def go(t: Term, names: list[str]) -> Term:
        match t:
            case Const(loc, name):
                try:
                    return Var(loc, names.index(name))
                except ValueError:
                    return t
            case _:
                return visit_term(
                    lambda c: go(c, names),
                    lambda s, c: go(c, [s] + names),
                    lambda s, _c: s,
                    t,
                )

    return go(t, list(scope))


def _const_names(t: Term) -> set[str]:
    names: set[str] = set()

    def collect(t: Term) -> Term:
        if isinstance(t, Const):
            names.add(t.name)
            return t
        return visit_term(collect, lambda _s, c: collect(c), lambda s, _c: s, t)

    collect(t)
    return names


def _pick_name(hint: str, forbidden: set[str]) -> str:
    base = hint or "x"
    if base not in forbidden:
        return base
    i = 0
    while f"{base}{i}" in forbidden:
        i += 1
    return f"{base}{i}"


def fix_id(t: Term, scope: tuple[str, ...] | list[str] = ()) -> Term:
    """Replace de Bruijn indices with printable names, renaming a binder
    (first free numeric suffix) whenever its hint would capture a constant
    occurring in its scope or shadow an enclosing name."""

    def bind(hint: str, child: Term, names: list[str]) -> str:
        return _pick_name(hint, set(names) | _const_names(child))

    def go(t: Term, names: list[str]) -> Term:
        match t:
            case Var(loc, n):
                if n >= len(names):
                    raise InternalError(f"fix_id: index {n} out of range")
                return Const(loc, names[n])
            case Let(loc, name, annot, bound, body):
                chosen = bind(name, body, names)
                return Let(loc, chosen, go(annot, names), go(bound, names),
                           go(body, [chosen] + names))
            case Prod(loc, name, dom, cod):
                chosen = bind(name, cod, names)
                return Prod(loc, chosen, go(dom, names), go(cod, [chosen] + names))
            case Abs(loc, name, dom, body):
                chosen = bind(name, body, names)
                return Abs(loc, chosen, go(dom, names), go(body, [chosen] + names))
            case SMatch(loc, scrut, motive, n1, a1, b1, n2, a2, b2):
                c1 = bind(n1, b1, names)
                c2 = bind(n2, b2, names)
                return SMatch(loc, go(scrut, names), go(motive, names),
                              c1, go(a1, names), go(b1, [c1] + names),
                              c2, go(a2, names), go(b2, [c2] + names))
            case Meta(loc, mid, susp):
                return Meta(loc, mid, tuple(go(s, names) for s in susp))
            case _:
                return visit_term(
                    lambda c: go(c, names),
                    lambda _s, c: go(c, names),  # binder cases all handled above
                    lambda s, _c: s,
                    t,
                )

    return go(t, list(scope))
