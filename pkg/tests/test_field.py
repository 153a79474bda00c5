import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from twheis.field import (CONWAY, FieldError, ParseError, arith, field_make, frobenius,
                          is_irreducible, parse_field)

GF9 = field_make(3, 2, (1, 0, 1))  # x^2 + 1


def test_prime_field_and_gf9():
    assert field_make(3).q == 3
    assert GF9.q == 9 and GF9.modulus == (1, 0, 1)


def test_composite_rejected():
    with pytest.raises(FieldError, match="not prime"):
        field_make(4)


def test_reducible_modulus_rejected():
    with pytest.raises(FieldError, match="reducible"):
        field_make(3, 2, (2, 0, 1))  # x^2 + 2 = (x-1)(x+1)


def test_size_bounds():
    with pytest.raises(FieldError):
        field_make(17)
    assert field_make(17, max_p=17).q == 17


@pytest.mark.parametrize("pk", sorted(CONWAY))
def test_builtin_moduli_irreducible(pk):
    p, k = pk
    assert is_irreducible(CONWAY[pk], p)
    F = field_make(p, k)
    # the generator is primitive: its order is q - 1
    x = F.gen
    order = next(e for e in range(1, F.q) if (x ** e).code == 1)
    assert order == F.q - 1


def test_spec_arith_examples():
    F3 = field_make(3)
    assert arith(F3(2), None, "inv") == F3(2)
    x = GF9.gen
    assert arith(x, x, "mul") == GF9(2)
    assert frobenius(x) == 2 * x
    assert frobenius(F3(2)) == F3(2)


def test_frobenius_fixes_prime_field():
    F = field_make(5)
    e = F.elements()
    assert np.array_equal(F.frob(e), e)


@pytest.mark.parametrize("pk", [(3, 1), (5, 1), (3, 2), (5, 2), (3, 3), (5, 3)])
def test_field_axioms_exhaustive(pk):
    F = field_make(*pk)
    e = F.elements()
    a, b = np.meshgrid(e, e, indexing="ij")
    assert np.array_equal(F.add(a, b), F.add(b, a))
    assert np.array_equal(F.mul(a, b), F.mul(b, a))
    assert np.array_equal(F.mul(e[1:], F.inv(e[1:])), np.ones(F.q - 1, dtype=np.int64))
    assert np.array_equal(F.frob(e), F.pow(e, F.p))
    assert np.array_equal(F.frob(F.add(a, b)), F.add(F.frob(a), F.frob(b)))
    if F.k == 1:
        assert np.all(F.pow(e[1:], F.p - 1) == 1)


def test_division_by_zero():
    with pytest.raises(FieldError):
        GF9.inv(0)
    with pytest.raises(FieldError, match="division by zero"):
        GF9(1) / GF9(0)


def test_mixed_fields_rejected():
    with pytest.raises(FieldError):
        field_make(3)(1) + field_make(5)(1)


@given(st.integers(0, 8), st.integers(0, 8), st.integers(0, 8))
def test_distributivity_gf9(a, b, c):
    F = GF9
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))


@given(st.integers(0, 24), st.integers(-30, 30))
def test_pow_matches_repeated_multiplication(a, e):
    F = field_make(5, 2)
    if a == 0 and e < 0:
        return
    base = F.inv(a) if e < 0 else a
    acc = 1
    for _ in range(abs(e)):
        acc = F.mul(acc, base)
    assert F.pow(a, e) == acc


@pytest.mark.parametrize("spec", ["5", "3^2", "3^2:1,0,1", "7^3", "13^2"])
def test_field_spec_round_trip(spec):
    F = parse_field(spec)
    assert parse_field(F.spec_string()) == F


def test_element_parse_format_round_trip():
    F = field_make(5, 3)
    for c in range(F.q):
        assert F.parse(F.format(c)) == c
    assert GF9.parse("2*x + 1") == GF9.parse("1+2x") == 1 + 2 * 3
    assert GF9.parse("-x") == GF9.code(2 * GF9.gen)


@pytest.mark.parametrize("text, pos", [("1+y", 2), ("x", 0), ("2**3", 2)])
def test_parse_errors_report_position(text, pos):
    with pytest.raises(ParseError) as info:
        field_make(5).parse(text)
    assert info.value.pos == pos


def test_bad_field_spec():
    with pytest.raises(ParseError):
        parse_field("3^a")


def test_element_is_immutable():
    a = GF9(1)
    with pytest.raises(AttributeError):
        a.code = 2


def test_code_conventions():
    # Python ints are integers mod p; numpy integers are codes
    F = field_make(3, 2)
    assert F.code(4) == 1
    assert F.code(np.int64(4)) == 4
    assert np.array_equal(F.codes(np.array([4, 5])), [4, 5])
    assert list(itertools.islice(F.codes(["x", 1]), 2)) == [3, 1]
