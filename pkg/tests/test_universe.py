import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from clonelab import universe as U
from clonelab.errors import AlgebraError, DiagonalizationError
from clonelab.universe import (
    ID,
    PARITY,
    Const,
    GStep,
    SymbolicOp,
    TableOp,
    compose_symbolic,
    diagonalize,
    eval_symbolic,
    g_step,
    interpolate_parity,
    loc_k_parity_certificate,
    membership_in_C,
    no_finite_base_witness,
    parse_symbolic,
    rho_preserves,
)


def row(f, n=6):
    return "".join(str(eval_symbolic(f, x)) for x in range(n))


def test_value_rows():
    assert row(GStep(5)) == "010105"
    assert row(GStep(3)) == "010345"
    assert row(PARITY) == "010101"
    assert row(GStep(4)) == "010145"
    assert row(ID) == "012345"
    assert row(Const(3)) == "333333"


def test_step_normalisation():
    assert g_step(0) == g_step(1) == g_step(2) == ID
    assert g_step(3) == GStep(3)
    with pytest.raises(AlgebraError):
        GStep(2)
    assert parse_symbolic("g2") == ID
    assert parse_symbolic("c7") == Const(7)
    assert parse_symbolic("p") == PARITY
    with pytest.raises(AlgebraError):
        parse_symbolic("q1")


def test_composition_examples():
    h = compose_symbolic(GStep(4), GStep(3))
    assert h == GStep(4)
    assert GStep(3)(3) == 3 and GStep(4)(3) == 1 and h(3) == 1
    assert compose_symbolic(ID, PARITY) == PARITY
    h = compose_symbolic(PARITY, GStep(7))
    assert h == PARITY
    assert all(h(x) == PARITY(GStep(7)(x)) for x in range(21))
    assert compose_symbolic(GStep(5), Const(7)) == Const(7)
    assert compose_symbolic(GStep(9), Const(7)) == Const(1)
    assert compose_symbolic(Const(2), PARITY) == Const(2)


def test_membership_examples():
    assert membership_in_C(SymbolicOp(1, 1, GStep(9)))
    assert not membership_in_C(SymbolicOp(3, 2, PARITY))
    assert membership_in_C(Const(0))


def test_interpolation_examples():
    assert interpolate_parity(range(6)) == GStep(6)
    assert interpolate_parity({0}) == GStep(3)
    h = interpolate_parity({7})
    assert h == GStep(8) and h(7) == 1 == PARITY(7)
    assert interpolate_parity(()) == ID


def test_parity_certificate_modes():
    c = loc_k_parity_certificate(1, 10)
    assert c and c.cases == 11
    c = loc_k_parity_certificate(3, 8)
    assert c and c.cases == 9 + 36 + 84
    c = loc_k_parity_certificate(64, 64, mode="max")
    assert c and c.cases == 65
    with pytest.raises(AlgebraError):
        loc_k_parity_certificate(0)


@pytest.mark.parametrize(
    "D, pair, witness",
    [({0, 1, 2}, (4, 5), 4), (set(), (3, 4), 3), ({5}, (7, 8), 7)],
)
def test_no_base_examples(D, pair, witness):
    sep = no_finite_base_witness(D)
    assert (sep.f, sep.g) == tuple(GStep(a) for a in pair)
    assert sep.witness == witness
    assert sep.verify()
    assert {sep.f(witness), sep.g(witness)} == {witness, witness % 2}


def test_rho_examples():
    for name in ("c0", "c5", "g3", "g9", "id", "p"):
        assert rho_preserves(SymbolicOp(2, 1, parse_symbolic(name)), 8)
    assert rho_preserves(SymbolicOp(4, 3, GStep(5)), 8)
    assert rho_preserves(PARITY, 8)
    add = TableOp(2, lambda x, y: min(x + y, 8), "sum")
    res = rho_preserves(add, 8)
    assert not res
    u, v = res.arguments
    assert U.in_rho(u) and U.in_rho(v)
    image = tuple(add(a, b) for a, b in zip(u, v))
    assert image == res.image and not U.in_rho(image)


def test_rho_forces_essential_unarity_on_small_domains():
    # frozen from a brute-force search over all binary tables on {0,1}, {0,1,2}
    counts = {}
    for size in (2, 3):
        n = 0
        for table in itertools.product(range(size), repeat=size * size):
            f = TableOp(2, lambda x, y, t=table, s=size: t[x * s + y])
            if rho_preserves(f, size - 1):
                n += 1
                depends = [
                    any(f(*a) != f(*b) for a in itertools.product(range(size), repeat=2)
                        for b in itertools.product(range(size), repeat=2) if a[1 - j] == b[1 - j])
                    for j in (0, 1)
                ]
                assert not all(depends)
        counts[size] = n
    assert counts == {2: 6, 3: 51}


def test_diagonalize_first_step():
    trace = diagonalize(1)
    assert [s.line() for s in trace.steps] == ["0 1 id init"]


def test_diagonalize_fifty_steps():
    trace = diagonalize(50)
    assert trace.complete and not trace.violations()
    assert trace.n == sorted(set(trace.n))
    assert trace.limit_is_parity_prefix()


def test_diagonalize_listing_parity_early():
    # once parity has been diagonalised against, the limit must differ from it
    trace = diagonalize(12, parity_index=3)
    assert trace.complete and not trace.violations()
    assert not trace.limit_is_parity_prefix()


def test_diagonalize_halts_when_no_alternative():
    trace = diagonalize(10, parity_index=3, alternative=lambda g, n, f: None)
    assert not trace.complete and trace.halted


def test_diagonalize_rejects_bad_alternative():
    with pytest.raises(DiagonalizationError):
        diagonalize(5, alternative=lambda g, n, f: PARITY)


def test_diagonalize_enumeration_too_short():
    with pytest.raises(DiagonalizationError):
        diagonalize(5, enumeration=[Const(0), Const(1)])


def test_default_enumeration_covers_members():
    seen = set(itertools.islice(U.default_enumeration(40), 200))
    assert PARITY in seen
    assert {Const(a) for a in range(20)} <= seen
    assert {GStep(a) for a in range(3, 40)} <= seen


# ---------------------------------------------------------------------------
# properties

def symbolic():
    return st.one_of(
        st.integers(0, 60).map(Const),
        st.integers(3, 60).map(GStep),
        st.just(ID),
        st.just(PARITY),
    )


@given(symbolic(), symbolic())
def test_composition_sound_pointwise(f, g):
    h = compose_symbolic(f, g)
    assert all(h(x) == f(g(x)) for x in range(1001))


@given(symbolic().filter(membership_in_C), symbolic().filter(membership_in_C))
def test_members_closed_under_composition(f, g):
    assert membership_in_C(compose_symbolic(f, g))


@given(st.integers(3, 200), st.integers(3, 200))
def test_step_composition_case_split(a, b):
    ga, gb, top = GStep(a), GStep(b), GStep(max(a, b))
    for x in range(1001):
        if x < b:
            expected = ga(x % 2)
        elif x < a:
            expected = x % 2
        else:
            expected = x
        assert expected == top(x) == ga(gb(x))


@given(st.sets(st.integers(0, 64), max_size=20))
def test_interpolation_agrees_with_parity(B):
    h = interpolate_parity(B)
    assert membership_in_C(h)
    assert all(h(x) == x % 2 for x in B)


@given(st.sets(st.integers(0, 64), max_size=30))
def test_no_finite_base(D):
    assert no_finite_base_witness(D).verify()


@given(st.integers(1, 80), st.integers(0, 120))
def test_diagonal_trace_properties(steps, parity_index):
    trace = diagonalize(steps, parity_index=parity_index)
    assert not trace.violations()
    assert all(a < b for a, b in zip(trace.n, trace.n[1:]))
