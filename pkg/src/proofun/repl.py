"""Read-eval-print loop and command-line entry point.

A source command expands to a list of atomic commands which run against a
snapshot of the signature: if any atomic command fails, the whole list is
rolled back and the error reported, so a failed command never changes the
environment.  Loaded files are one command stream in which every source
command is its own atomic unit; a failure aborts the rest of the file but
keeps the earlier successes.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from typing import IO

from proofun.env import AxiomInfo, GlobalEnv, LocalEnv
from proofun.errors import CommandError, ParseError, ProverError
from proofun.normalize import strongly_normalize
from proofun.parser import (
    Axiom, Command, Compute, Definition, Help, Load, Print, Printall, Quit,
    Token, fix_index, tokenize, _Parser,
)
from proofun.pretty import render_error, show_term
from proofun.refine import elaborate, elaborate_type
from proofun.syntax import Location

HELP_TEXT = '''\
Help.                               show this list of commands
Load "file".                        for loading a script file
Axiom term : type.                  define a constant or an axiom
Definition name [: type] := term.   define a term
Print name.                         print the definition of name
Printall.                           print all the signature
                                    (axioms and definitions)
Compute name.                       normalize name and print the result
Quit.                               quit'''

_RED = "\x1b[31m"
_RESET = "\x1b[0m"


class QuitRequested(Exception):
    pass


@dataclass
class Session:
    genv: GlobalEnv = field(default_factory=GlobalEnv)
    interactive: bool = False
    quiet: bool = False
    color: bool = False
    out: IO[str] | None = None  # None: current sys.stdout / sys.stderr
    err: IO[str] | None = None

    def emit(self, text: str) -> None:
        print(text, file=self.out or sys.stdout)

    def ack(self, text: str) -> None:
        if not self.quiet:
            print(text, file=self.out or sys.stdout)

    def report(self, source_text: str, error: ProverError) -> None:
        rendered = render_error(source_text, error)
        if self.color:
            rendered = f"{_RED}{rendered}{_RESET}"
        print(rendered, file=self.err or sys.stderr)


def exec_command(session: Session, cmd: Command) -> None:
    """Run one atomic command; prover errors propagate to the caller."""
    genv = session.genv
    match cmd:
        case Help():
            session.emit(HELP_TEXT)
        case Quit():
            raise QuitRequested
        case Axiom(loc, name, ty):
            ty2, ty_ess = elaborate_type(genv, fix_index(ty))
            genv.add_axiom(name, ty_ess, ty2)
            session.ack(f"{name} is declared.")
        case Definition(loc, name, ty, body):
            expected = fix_index(ty) if ty is not None else None
            result = elaborate(genv, fix_index(body), expected)
            genv.add_definition(name, result.essence, result.term,
                                result.type_essence, result.type)
            session.ack(f"{name} is defined.")
        case Print(loc, name):
            info = genv.lookup(name)
            if info is None:
                raise CommandError(f'unknown identifier "{name}"', loc)
            if isinstance(info, AxiomInfo):
                session.emit(f"{name} : {show_term(info.type)}")
            else:
                session.emit(f"{name} : {show_term(info.type)}")
                session.emit(f"{name} := {show_term(info.body)}")
        case Printall():
            for name, info in genv.items():
                kind = "Axiom" if isinstance(info, AxiomInfo) else "Definition"
                session.emit(f"{kind} {name} : {show_term(info.type)}")
        case Compute(loc, name):
            info = genv.lookup(name)
            if info is None:
                raise CommandError(f'unknown identifier "{name}"', loc)
            if isinstance(info, AxiomInfo):
                session.emit(name)  # axioms are their own normal form
            else:
                nf = strongly_normalize(False, genv, LocalEnv(), info.body)
                session.emit(show_term(nf))
        case Load(loc, path):
            if not load_file(session, path, loc):
                raise _LoadFailed
        case _:
            raise CommandError("unsupported command", None)


class _LoadFailed(Exception):
    """Internal marker: the file reported its own errors and kept earlier
    successes, so the enclosing command list must not roll back."""


def run_command_list(session: Session, cmds: list[Command],
                     source_text: str) -> bool:
    """Run the atomic commands of one source command; commit only if all
    succeed, otherwise restore the signature and report the first error."""
    snapshot = session.genv.snapshot()
    for cmd in cmds:
        try:
            exec_command(session, cmd)
        except _LoadFailed:
            return False  # inner file already reported; keep its successes
        except ProverError as error:
            session.genv = snapshot
            session.report(source_text, error)
            return False
        except RecursionError:
            session.genv = snapshot
            session.report(source_text, ProverError(_TOO_DEEP))
            return False
    return True


_TOO_DEEP = "the input is nested too deeply to process"


def run_source(session: Session, text: str, source: str = "<input>") -> bool:
    """Run a whole command stream; each source command is atomic.  Returns
    False as soon as one command fails (the remainder is not run)."""
    try:
        chunks = _split_commands(text, source)
    except ProverError as error:
        session.report(text, error)
        return False
    for chunk in chunks:
        try:
            cmds = _parse_chunk(chunk, source)
        except ProverError as error:
            session.report(text, error)
            return False
        except RecursionError:
            session.report(text, ProverError(_TOO_DEEP))
            return False
        if not run_command_list(session, cmds, text):
            return False
    return True


def load_file(session: Session, path: str, loc: Location | None = None) -> bool:
    try:
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise CommandError(f'cannot open "{path}": {exc.strerror}', loc) from None
    return run_source(session, text, source=path)


# A command never contains a period, so the token stream splits exactly at
# DOT tokens; a trailing fragment without one is an unterminated command.


def _split_commands(text: str, source: str) -> list[list[Token]]:
    toks = tokenize(text, source)[:-1]  # drop EOF
    chunks: list[list[Token]] = []
    current: list[Token] = []
    for tok in toks:
        current.append(tok)
        if tok.kind == "DOT":
            chunks.append(current)
            current = []
    if current:
        raise ParseError('expected "." at the end of the command', current[-1].loc)
    return chunks


def _parse_chunk(chunk: list[Token], source: str) -> list[Command]:
    last = chunk[-1].loc
    eof = Token("EOF", "", Location(source, last.end, last.end))
    return _Parser(chunk + [eof]).command()


def _incomplete(text: str, source: str) -> bool:
    """True while the buffer has no command terminator yet."""
    try:
        toks = tokenize(text, source)
    except ProverError:
        return False  # let the runner report the lex error
    return not any(tok.kind == "DOT" for tok in toks)


def repl(session: Session) -> int:
    session.interactive = True
    show_prompt = sys.stdin.isatty()
    buffer = ""
    while True:
        prompt = ("> " if not buffer else "  ") if show_prompt else ""
        try:
            line = input(prompt)
        except EOFError:
            return 0
        buffer += line + "\n"
        if _incomplete(buffer, "<input>"):
            continue
        try:
            run_source(session, buffer, "<input>")
        except QuitRequested:
            return 0
        buffer = ""


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="proofun",
        description="Proof checker for a dependent lambda-calculus with "
                    "strong intersection and union types.")
    parser.add_argument("scripts", nargs="*", metavar="script.bull",
                        help="script files to load (non-interactive mode)")
    parser.add_argument("--no-color", action="store_true",
                        help="disable ANSI colors in error output")
    parser.add_argument("--quiet", action="store_true",
                        help="suppress declaration acknowledgements")
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    color = sys.stderr.isatty() and not args.no_color
    session = Session(quiet=args.quiet, color=color)
    if args.scripts:
        for path in args.scripts:
            try:
                if not load_file(session, path):
                    return 1
            except ProverError as error:
                session.report("", error)
                return 1
            except QuitRequested:
                return 0
        return 0
    try:
        return repl(session)
    except QuitRequested:
        return 0


if __name__ == "__main__":
    sys.exit(main())
