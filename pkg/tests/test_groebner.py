import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from criticalis.groebner import (
    Budget,
    BudgetExceeded,
    Ideal,
    closure_violations,
    find_common_zero,
    ideal_contains,
    ideal_equal,
    ideal_subset,
    is_trivial_ideal,
    normal_form,
    strong_groebner,
    triviality_evidence,
)
from criticalis.polyring import GF, GRLEX, LEX, ZZ, Polynomial, PolyRing, RingMismatchError, Var

VARS = tuple(Var(str(i)) for i in range(1, 4))
R = PolyRing(ZZ, VARS)
SYMS = sympy.symbols("x1 x2 x3")

monomials = st.tuples(*[st.integers(0, 2)] * 3)
polys = st.dictionaries(monomials, st.integers(-6, 6), min_size=1, max_size=4)
ideals = st.lists(polys, min_size=1, max_size=3)
# small inputs keep non-graded integer bases tractable
small_ideals = st.lists(st.dictionaries(monomials, st.integers(-2, 2), min_size=1, max_size=3), min_size=1, max_size=2)


def ideal_of(ring, *gens):
    return Ideal(ring, [ring.parse(g) for g in gens])


def to_sympy(p):
    return sum(c * sympy.Mul(*[s**e for s, e in zip(SYMS, m)]) for m, c in p.terms.items())


def test_canonical_generators():
    I = ideal_of(R, "-x1 + 1", "x1 - 1", "0", "2*x2")
    assert I.strings() == ["2*x2", "x1 - 1"]
    assert Ideal.zero(R).is_zero_ideal()
    assert Ideal.unit(R).strings() == ["1"]


def test_textbook_integer_examples():
    assert is_trivial_ideal(ideal_of(R, "2", "3"))
    assert not is_trivial_ideal(ideal_of(R, "2", "x1"))
    assert is_trivial_ideal(ideal_of(R, "2*x1 + 1", "x1"))
    assert not is_trivial_ideal(ideal_of(R, "2*x1 + 2", "4"))
    # the P3 ideal evaluated at x2 = 0 has constant 2: trivial only when 2 is a unit
    F3 = R.with_coeffs(GF(3))
    assert not is_trivial_ideal(ideal_of(R, "2", "x1 + x3"))
    assert is_trivial_ideal(ideal_of(F3, "2", "x1 + x3"))


def test_strong_basis_is_closed_and_reduces_generators():
    I = ideal_of(R, "2*x1*x2 - 3", "3*x1^2 + x2", "6*x3 - x1")
    gb = strong_groebner(I)
    assert not closure_violations(gb)
    for g in I.generators:
        assert normal_form(g, gb).is_zero()


def test_strong_basis_handles_gcd_polynomials():
    # <2x, 3y> contains x*y*... and the lattice part needs G-polynomials
    I = ideal_of(R, "2*x1", "3*x1")
    gb = strong_groebner(I)
    assert [str(g) for g in gb.basis] == ["x1"]


def test_membership_and_equality():
    I = ideal_of(R, "x1 + x2", "x1*x3 - 2")
    assert ideal_contains(I, R.parse("x2*x3 + 2"))
    assert not ideal_contains(I, R.parse("x2"))
    J = ideal_of(R, "x1 + x2", "x2*x3 + 2")
    assert ideal_equal(I, J)
    assert ideal_subset(ideal_of(R, "x1 + x2"), I)
    assert not ideal_subset(I, ideal_of(R, "x1 + x2"))


def test_ring_mismatch_is_an_error():
    other = PolyRing(GF(5), VARS)
    with pytest.raises(RingMismatchError):
        ideal_equal(ideal_of(R, "x1"), ideal_of(other, "x1"))


def test_budget_exceeded_is_reported():
    I = ideal_of(R, "x1^3 - x2", "x2^3 - x3", "x3^2*x1 - 1")
    with pytest.raises(BudgetExceeded):
        strong_groebner(I, budget=Budget(max_pairs=1))
    with pytest.raises(ValueError):
        Budget(max_pairs=0)


def test_budget_from_environment():
    b = Budget.from_env({"CRITICALIS_MAX_PAIRS": "17", "CRITICALIS_MAX_DEGREE": "9"})
    assert (b.max_pairs, b.max_degree) == (17, 9)
    assert Budget.from_env({}) == Budget()


def test_common_zero_certifies_nontriviality():
    hit = find_common_zero(ideal_of(R, "x1^2 + 1", "x2 - x1"))
    assert hit is not None
    p, point = hit
    assert (point["x1"] ** 2 + 1) % p == 0
    # a trivial ideal has no common zero anywhere
    assert find_common_zero(ideal_of(R, "2*x1 - 1", "x1")) is None


def test_evidence_routes():
    assert triviality_evidence(ideal_of(R, "x1", "-1"))[1]["route"] == "constants"
    assert triviality_evidence(Ideal.zero(R)) == (False, {"route": "zero-ideal"})
    trivial, ev = triviality_evidence(ideal_of(R, "x1 - 1", "x1*x2 - x2 + 1"))
    assert trivial and ev["route"] == "linear-elimination"


@pytest.mark.parametrize("p", [2, 3, 5])
@settings(max_examples=25, deadline=None)
@given(gens=ideals)
def test_reduced_basis_over_gfp_matches_sympy(p, gens):
    F = PolyRing(GF(p), VARS)
    I = Ideal(F, [Polynomial.from_terms(F, t) for t in gens])
    if I.is_zero_ideal():
        return
    ours = strong_groebner(I, stop_on_unit=False)
    theirs = sympy.groebner([to_sympy(g) for g in I.generators], *SYMS, modulus=p, order="grevlex")
    mine = {sympy.Poly(to_sympy(g), *SYMS, modulus=p) for g in ours.basis}
    ref = {sympy.Poly(e, *SYMS, modulus=p) for e in theirs.exprs}
    assert mine == ref


@settings(max_examples=40, deadline=None)
@given(gens=ideals, mult=st.lists(polys, min_size=3, max_size=3))
def test_integer_basis_properties(gens, mult):
    I = Ideal(R, [Polynomial.from_terms(R, t) for t in gens])
    if I.is_zero_ideal():
        return
    gb = strong_groebner(I, stop_on_unit=False)
    assert not closure_violations(gb)
    combo = R.zero()
    for g, h in zip(I.generators, mult):
        combo = combo + g * Polynomial.from_terms(R, h)
    assert gb.contains(combo)
    # decisions agree with and without shortcuts
    fast = triviality_evidence(I)[0]
    assert fast == triviality_evidence(I, shortcuts=False)[0] == gb.is_unit()
    if fast:
        # 1 in I over Z forces 1 in I over Q and every prime field
        assert sympy.groebner([to_sympy(g) for g in I.generators], *SYMS).exprs == [1]
        for p in (2, 3):
            assert is_trivial_ideal(I.convert(R.with_coeffs(GF(p))))


@settings(max_examples=25, deadline=None)
@given(gens=small_ideals)
def test_basis_membership_independent_of_order(gens):
    I = Ideal(R, [Polynomial.from_terms(R, t) for t in gens])
    if I.is_zero_ideal():
        return
    a = strong_groebner(I, stop_on_unit=False)
    b = strong_groebner(I, order=GRLEX, stop_on_unit=False)
    for g in a.basis:
        assert b.contains(Polynomial(b.ring, g.terms))
    for g in b.basis:
        assert a.contains(Polynomial(a.ring, g.terms))


def test_lex_basis_of_a_triangular_system():
    I = ideal_of(R, "x1^2 - x2", "x2^2 - x3", "x3 - 4")
    gb = strong_groebner(I, order=LEX)
    assert not closure_violations(gb)
    assert gb.contains(Polynomial(gb.ring, R.parse("x1^4 - 4").terms))
