"""Shared test utilities: parsing shortcuts, a reference signature, random
term generators, and a tiny named lambda-calculus used as an independent
oracle for the de Bruijn machinery."""

from __future__ import annotations

import os
import random

from proofun.env import GlobalEnv
from proofun.parser import fix_index, parse_term
from proofun.refine import elaborate, elaborate_type
from proofun.syntax import (
    Abs, App, Const, Inter, Let, NOWHERE, Prod, SPair, SPrLeft, SPrRight,
    Term, Underscore, Union, Var, mk_app,
)

CORPUS_DIR = os.path.join(os.path.dirname(__file__), "corpus")

CORPUS_FILES = ["basics.bull", "pierce.bull", "harrop.bull",
                "deductions.bull", "lf_encoding.bull"]


def corpus_path(name: str) -> str:
    return os.path.join(CORPUS_DIR, name)


def P(src: str) -> Term:
    """Parse and index a closed term."""
    return fix_index(parse_term(src))


def axiom(genv: GlobalEnv, name: str, ty_src: str) -> None:
    ty, ess = elaborate_type(genv, P(ty_src))
    genv.add_axiom(name, ess, ty)


def define(genv: GlobalEnv, name: str, body_src: str, ty_src: str | None = None):
    expected = P(ty_src) if ty_src else None
    result = elaborate(genv, P(body_src), expected)
    genv.add_definition(name, result.essence, result.term,
                        result.type_essence, result.type)
    return result


def make_test_genv() -> GlobalEnv:
    """Small fixed signature over two atoms used by the random generators."""
    genv = GlobalEnv()
    axiom(genv, "A", "Type")
    axiom(genv, "B", "Type")
    axiom(genv, "a", "A")
    axiom(genv, "b", "B")
    axiom(genv, "f", "A -> A")
    axiom(genv, "g", "A -> B")
    axiom(genv, "h", "A -> B -> A")
    axiom(genv, "k", "(A -> A) -> A")
    return genv


# ---------------------------------------------------------------------------
# Named lambda-terms: the independent oracle for lift / beta_redex.
# Terms are tuples: ("var", x) | ("const", c) | ("lam", x, body) | ("app", f, a)


def named_free_vars(t) -> set[str]:
    match t:
        case ("var", x):
            return {x}
        case ("const", _):
            return set()
        case ("lam", x, b):
            return named_free_vars(b) - {x}
        case ("app", f, a):
            return named_free_vars(f) | named_free_vars(a)
    raise AssertionError(t)


def named_subst(t, x: str, v, counter: list[int]):
    """Capture-avoiding substitution t[v/x] with on-demand renaming."""
    match t:
        case ("var", y):
            return v if y == x else t
        case ("const", _):
            return t
        case ("app", f, a):
            return ("app", named_subst(f, x, v, counter),
                    named_subst(a, x, v, counter))
        case ("lam", y, b):
            if y == x:
                return t
            if y in named_free_vars(v):
                counter[0] += 1
                fresh = f"{y}_r{counter[0]}"
                b = named_subst(b, y, ("var", fresh), counter)
                y = fresh
            return ("lam", y, named_subst(b, x, v, counter))
    raise AssertionError(t)


def named_to_syntax(t) -> Term:
    """Render a named tuple-term as a parser-style term (variables are
    constants until fix_index runs)."""
    match t:
        case ("var", x) | ("const", x):
            return Const(NOWHERE, x)
        case ("lam", x, b):
            return Abs(NOWHERE, x, Underscore(NOWHERE), named_to_syntax(b))
        case ("app", f, a):
            return App(NOWHERE, named_to_syntax(f), (named_to_syntax(a),))
    raise AssertionError(t)


def enumerate_closed_named(max_size: int, consts=("c1", "c2")):
    """All closed named lambda-terms up to `max_size` nodes over the given
    constants, with canonically named binders."""

    def build(size: int, scope: tuple[str, ...]):
        if size <= 0:
            return
        if size == 1:
            for c in consts:
                yield ("const", c)
            for x in scope:
                yield ("var", x)
            return
        fresh = f"x{len(scope)}"
        for b in build(size - 1, scope + (fresh,)):
            yield ("lam", fresh, b)
        for i in range(1, size - 1):
            for fpart in build(i, scope):
                for apart in build(size - 1 - i, scope):
                    yield ("app", fpart, apart)

    for size in range(1, max_size + 1):
        yield from build(size, ())


# ---------------------------------------------------------------------------
# Random generators


def random_named_term(rng: random.Random, size: int, scope: tuple[str, ...] = (),
                      consts=("c", "d")) -> tuple:
    """Random clash-free named term for print/index round-trips."""
    if size <= 1:
        leaves = [("const", c) for c in consts] + [("var", x) for x in scope]
        return rng.choice(leaves)
    if rng.random() < 0.45:
        fresh = f"v{len(scope)}"
        return ("lam", fresh, random_named_term(rng, size - 1, scope + (fresh,), consts))
    cut = rng.randint(1, size - 1)
    return ("app", random_named_term(rng, cut, scope, consts),
            random_named_term(rng, size - cut, scope, consts))


_ATOM_A = Const(NOWHERE, "A")
_ATOM_B = Const(NOWHERE, "B")


def random_simple_type(rng: random.Random, depth: int) -> Term:
    if depth <= 0 or rng.random() < 0.45:
        return rng.choice((_ATOM_A, _ATOM_B))
    return Prod(NOWHERE, "", random_simple_type(rng, depth - 1),
                random_simple_type(rng, depth - 1))


_SIGNATURE: dict[str, str] = {
    "a": "A", "b": "B", "f": "A -> A", "g": "A -> B", "h": "A -> B -> A",
    "k": "(A -> A) -> A",
}


def _type_of_const(name: str) -> Term:
    return P(_SIGNATURE[name])


def _types_equal(t1: Term, t2: Term) -> bool:
    from proofun.syntax import same_term
    return same_term(t1, t2)


def random_typed_term(rng: random.Random, ty: Term, ctx_types: list[Term],
                      fuel: int) -> Term:
    """Type-directed generation of well-typed terms over `make_test_genv`;
    strongly normalizing by construction, with deliberate redexes (lets,
    applied abstractions, projections of duplicated pairs).  All types in
    play are closed, so entering a binder needs no lifting."""
    candidates: list[Term] = []
    for i, vt in enumerate(ctx_types):
        if _types_equal(vt, ty):
            candidates.append(Var(NOWHERE, i))
    for name in _SIGNATURE:
        if _types_equal(_type_of_const(name), ty):
            candidates.append(Const(NOWHERE, name))
    if fuel <= 0 and candidates:
        return rng.choice(candidates)
    roll = rng.random()
    if isinstance(ty, Prod) and (roll < 0.55 or not candidates):
        body = random_typed_term(rng, ty.codomain, [ty.domain] + ctx_types,
                                 fuel - 1)
        return Abs(NOWHERE, f"t{len(ctx_types)}", ty.domain, body)
    if roll < 0.2:
        tau = random_simple_type(rng, 1)
        bound = random_typed_term(rng, tau, ctx_types, fuel - 1)
        body = random_typed_term(rng, ty, [tau] + ctx_types, fuel - 1)
        return Let(NOWHERE, f"l{len(ctx_types)}", tau, bound, body)
    if roll < 0.4:
        inner = random_typed_term(rng, ty, ctx_types, fuel - 1)
        pair = SPair(NOWHERE, inner, inner)
        node = SPrLeft if rng.random() < 0.5 else SPrRight
        return node(NOWHERE, pair)
    if roll < 0.65:
        arg_ty = random_simple_type(rng, 1)
        fun = random_typed_term(rng, Prod(NOWHERE, "", arg_ty, ty),
                                ctx_types, fuel - 1)
        arg = random_typed_term(rng, arg_ty, ctx_types, fuel - 1)
        return mk_app(NOWHERE, fun, (arg,))
    if candidates:
        return rng.choice(candidates)
    if isinstance(ty, Prod):
        body = random_typed_term(rng, ty.codomain, [ty.domain] + ctx_types,
                                 fuel - 1)
        return Abs(NOWHERE, f"t{len(ctx_types)}", ty.domain, body)
    return Const(NOWHERE, "a" if _types_equal(ty, _ATOM_A) else "b")


def random_refined_term(rng: random.Random, max_fuel: int = 4) -> tuple[Term, Term]:
    """(term, type) pair over the reference signature, closed."""
    ty = random_simple_type(rng, rng.randint(0, 2))
    return random_typed_term(rng, ty, [], max_fuel), ty


# ---------------------------------------------------------------------------
# Subtype enumeration


def enumerate_types(max_connectives: int = 2, atoms=("a", "b")) -> list[Term]:
    """All types over the atoms with at most `max_connectives` of ->, &, |
    (syntactically deduplicated, locations shared)."""
    by_size: list[list[Term]] = [[Const(NOWHERE, a) for a in atoms]]
    for size in range(1, max_connectives + 1):
        layer: list[Term] = []
        for left_size in range(0, size):
            right_size = size - 1 - left_size
            for left in by_size[left_size]:
                for right in by_size[right_size]:
                    layer.append(Prod(NOWHERE, "", left, right))
                    layer.append(Inter(NOWHERE, left, right))
                    layer.append(Union(NOWHERE, left, right))
        by_size.append(layer)
    return [t for layer in by_size for t in layer]
