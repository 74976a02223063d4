"""Environments: lookup lifting, meta bookkeeping, signature discipline."""

import random

import pytest

from proofun.env import (
    EssDecl, GlobalEnv, LocalEnv, MetaEnv, SortDecl, SortDef, TypedDecl,
)
from proofun.errors import CommandError, InternalError
from proofun.normalize import delta_phi_expand
from proofun.syntax import (
    Const, Meta, NOWHERE, Prod, Sort, SortKind, Var, free_in, lift, sort_type,
)

from helpers import axiom, define, make_test_genv

L = NOWHERE


# ------------- LocalEnv -------------


def test_find_var_decl_lifts_by_one():
    ctx = LocalEnv().push_decl("x", Const(L, "s"))
    body, ty = ctx.find_var(0)
    assert body is None
    assert ty == lift(0, 1, Const(L, "s"))


def test_find_var_def_returns_lifted_body():
    ctx = LocalEnv().push_def("x", Const(L, "d"), Const(L, "s"))
    body, ty = ctx.find_var(0)
    assert body == Const(L, "d")
    assert ty == Const(L, "s")


def test_find_var_deeper_entry():
    ctx = LocalEnv().push_decl("x", Const(L, "s")).push_decl("y", Const(L, "t"))
    body, ty = ctx.find_var(1)
    assert body is None and ty == Const(L, "s")
    # A type mentioning an earlier variable lifts into scope at the query point.
    ctx2 = LocalEnv().push_decl("x", Const(L, "s")).push_decl("p", Var(L, 0))
    _, ty2 = ctx2.find_var(0)
    assert ty2 == Var(L, 1)  # still points at x


def test_find_var_out_of_range_is_internal_error():
    with pytest.raises(InternalError):
        LocalEnv().find_var(0)


def test_find_var_types_are_well_scoped():
    rng = random.Random(31)
    for _ in range(200):
        ctx = LocalEnv()
        depth = rng.randint(1, 6)
        for i in range(depth):
            # type refers to a random earlier variable when one exists
            if i and rng.random() < 0.5:
                ty = Var(L, rng.randrange(i))
            else:
                ty = Const(L, "A")
            ctx = ctx.push_decl(f"v{i}", ty)
        for i in range(depth):
            _, ty = ctx.find_var(i)
            assert not free_in(len(ctx), ty)
            assert all(not free_in(j, ty) for j in range(len(ctx), len(ctx) + 3))


# ------------- GlobalEnv -------------


def test_find_const_unbound():
    assert GlobalEnv().find_const(False, "nope") is None


def test_find_const_axiom_has_no_body():
    genv = GlobalEnv()
    axiom(genv, "a", "Type")
    body, ty = genv.find_const(False, "a")
    assert body is None and ty == Sort(ty.loc, SortKind.TYPE)


def test_find_const_definition_essence_side():
    genv = GlobalEnv()
    axiom(genv, "s", "Type")
    define(genv, "id", "fun x : s => x")
    body, ty = genv.find_const(True, "id")
    # The essence of the identity is the untyped identity abstraction.
    from proofun.syntax import Abs, Underscore
    assert isinstance(body, Abs) and isinstance(body.domain, Underscore)
    assert isinstance(ty, Prod)


def test_duplicate_names_rejected():
    genv = GlobalEnv()
    axiom(genv, "a", "Type")
    with pytest.raises(CommandError):
        axiom(genv, "a", "Type")


def test_snapshot_isolated_from_later_insertions():
    genv = GlobalEnv()
    axiom(genv, "a", "Type")
    snap = genv.snapshot()
    axiom(genv, "b", "Type")
    assert "b" in genv and "b" not in snap


# ------------- MetaEnv -------------


def test_fresh_ids_are_consecutive_and_entries_kept():
    phi = MetaEnv()
    phi, a = phi.fresh_meta(SortDecl())
    phi, b = phi.fresh_meta(SortDecl())
    assert (a, b) == (0, 1)
    assert phi.lookup(a) == SortDecl()


def test_fresh_typed_decl_retrievable():
    ctx = LocalEnv().push_decl("x", Const(L, "s"))
    phi, mid = MetaEnv().fresh_meta(TypedDecl(ctx, Const(L, "s")))
    entry = phi.lookup(mid)
    assert entry.ctx == ctx and entry.type == Const(L, "s")


def test_instantiate_then_lookup():
    phi, mid = MetaEnv().fresh_meta(SortDecl())
    phi = phi.instantiate_meta(mid, sort_type())
    assert phi.lookup(mid) == SortDef(sort_type())


def test_instantiate_does_not_disturb_others():
    phi, a = MetaEnv().fresh_meta(SortDecl())
    phi, b = phi.fresh_meta(SortDecl())
    phi = phi.instantiate_meta(a, sort_type())
    assert phi.lookup(b) == SortDecl()


def test_double_instantiation_is_internal_error():
    phi, mid = MetaEnv().fresh_meta(SortDecl())
    phi = phi.instantiate_meta(mid, sort_type())
    with pytest.raises(InternalError):
        phi.instantiate_meta(mid, sort_type())


def test_sort_meta_delta_reduction():
    phi, mid = MetaEnv().fresh_meta(SortDecl())
    phi = phi.instantiate_meta(mid, sort_type())
    assert delta_phi_expand(phi, Meta(L, mid, ())) == sort_type()


def test_essence_companion_is_stable():
    ctx = LocalEnv().push_decl("x", Const(L, "s"))
    phi, mid = MetaEnv().fresh_meta(TypedDecl(ctx, Const(L, "s")))
    phi, e1 = phi.essence_companion(mid)
    phi, e2 = phi.essence_companion(mid)
    assert e1 == e2
    assert isinstance(phi.lookup(e1), EssDecl)
    assert len(phi.lookup(e1).ctx) == len(ctx)


def test_replaying_corpus_preserves_prefix_typing():
    # Every inserted entry elaborated against the signature prefix before it;
    # replaying the same definitions in order must succeed from scratch.
    genv = make_test_genv()
    define(genv, "twice", "fun u : A => f (f u)")
    define(genv, "pick", "fun u : A => h u (g u)")
    replay = GlobalEnv()
    for name, info in genv.items():
        from proofun.env import AxiomInfo
        from proofun.refine import elaborate
        if isinstance(info, AxiomInfo):
            replay.add_axiom(name, info.type_essence, info.type)
        else:
            result = elaborate(replay, info.body, info.type)
            replay.add_definition(name, result.essence, result.term,
                                  result.type_essence, result.type)
    assert replay.names() == genv.names()
