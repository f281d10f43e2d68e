import itertools
import math

import pytest
from hypothesis import given, settings, strategies as st

from kpsnet.field import (
    Field,
    FieldElement,
    Poly,
    count_irreducibles,
    enumerate_irreducibles,
    expand_seed,
    is_irreducible,
    make_field,
    monic_poly,
    prime_field,
    sqrt_in_ext,
    tower,
    trace_norm,
)

SMALL_FIELDS = [(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (2, 3), (3, 2), (2, 4), (5, 2), (2, 5), (3, 3), (7, 2)]


# -- independent oracles -----------------------------------------------------------


def naive_mul(a, b, p, modulus):
    """Schoolbook product of coefficient lists, reduced by the monic modulus."""
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] = (prod[i + j] + x * y) % p
    k = len(modulus) - 1
    for d in range(len(prod) - 1, k - 1, -1):
        c = prod[d]
        if c:
            for i, m in enumerate(modulus):
                prod[d - k + i] = (prod[d - k + i] - c * m) % p
    return (prod + [0] * k)[:k]


def trial_division_irreducible(coeffs, p):
    """Monic coeffs (lowest first) over GF(p): no monic factor of degree 1..n/2."""
    n = len(coeffs) - 1
    f = Poly(prime_field(p), coeffs)
    for d in range(1, n // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            g = Poly(prime_field(p), list(low) + [1])
            if (f % g).degree < 0:
                return False
    return True


def digits(v, p, k):
    return [(v // p**i) % p for i in range(k)]


# -- construction -----------------------------------------------------------------


def test_prime_field():
    f = make_field(3, 1)
    assert f.order == 3 and f.is_prime_field


def test_given_moduli():
    f27 = make_field(3, 3, [1, 2, 0, 1])
    assert f27.order == 27
    f128 = make_field(2, 7, [1, 1, 0, 0, 0, 0, 0, 1])
    assert f128.order == 128


def test_canonical_moduli():
    assert make_field(3, 3).modulus == (1, 2, 0, 1)
    assert make_field(2, 7).modulus == (1, 1, 0, 0, 0, 0, 0, 1)
    assert make_field(3, 2).modulus == (1, 0, 1)
    assert tower(5).modulus == (2, 0, 1)


def test_bad_parameters():
    with pytest.raises(ValueError):
        make_field(4, 1)
    with pytest.raises(ValueError):
        make_field(5, 2, [1, 0, 1])  # x^2 + 1 splits over GF(5)
    with pytest.raises(ValueError):
        make_field(3, 2, [1, 0, 2])  # 2x^2 + 1 is not monic
    with pytest.raises(ValueError):
        make_field(3, 0)


def test_small_arithmetic():
    f = make_field(5, 1)
    assert f(3) + f(4) == f(2)
    assert f(3) * f(4) == f(2)
    assert f(3) / f(4) * f(4) == f(3)


@pytest.mark.parametrize("p,k", [(2, 2), (2, 3), (3, 2), (2, 4), (5, 2), (3, 3), (7, 2), (2, 8), (2, 11)])
def test_mul_matches_schoolbook(p, k):
    f = make_field(p, k)
    vals = range(f.order) if f.order <= 49 else range(0, f.order, max(1, f.order // 60))
    for a in vals:
        for b in vals:
            want = naive_mul(digits(a, p, k), digits(b, p, k), p, list(f.modulus))
            assert f.coeffs(f.mul(a, b)) == want


def test_cube_of_x_by_repeated_addition():
    p = 3
    f = make_field(3, 2)
    x = f.from_coeffs([0, 1])
    x2 = f.mul(x, x)
    # x^2 = -(m0 + m1 x) from the modulus
    m = f.modulus
    expect_x2 = f.from_coeffs([(-m[0]) % p, (-m[1]) % p])
    assert x2 == expect_x2
    # x^3 = x * x^2 computed as a sum of x-multiples of the digits of x^2
    cs = f.coeffs(x2)
    acc = 0
    for i, c in enumerate(cs):
        term = f.from_coeffs([0] * i + [1]) if i else 1
        term = f.mul(term, x)
        for _ in range(c):
            acc = f.add(acc, term)
    assert f.mul(x2, x) == acc


@pytest.mark.parametrize("p,k", [pk for pk in SMALL_FIELDS if pk[0] ** pk[1] <= 49])
def test_axioms_exhaustive(p, k):
    f = make_field(p, k)
    q = f.order
    E = range(q)
    for a in E:
        assert f.add(a, 0) == a and f.mul(a, 1) == a
        assert f.add(a, f.neg(a)) == 0
        if a:
            assert f.mul(a, f.inv(a)) == 1
        for b in E:
            assert f.add(a, b) == f.add(b, a)
            assert f.mul(a, b) == f.mul(b, a)
            assert f.sub(f.add(a, b), b) == a
    for a, b, c in itertools.product(E, repeat=3):
        assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
        assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
        assert f.add(f.add(a, b), c) == f.add(a, f.add(b, c))


@pytest.mark.parametrize("p,k", SMALL_FIELDS + [(2, 8), (3, 5)])
def test_frobenius_fixes_everything(p, k):
    f = make_field(p, k)
    for a in range(f.order):
        assert f.pow(a, f.order) == a


def test_table_and_generic_agree():
    f = make_field(3, 4)
    for a in range(0, 81, 7):
        for b in range(81):
            assert f.mul(a, b) == f._g_mul(a, b)
            assert f.add(a, b) == f._g_add(a, b)


@given(st.integers(0, 242), st.integers(0, 242), st.integers(0, 242))
@settings(max_examples=200, deadline=None)
def test_axioms_random_gf243(a, b, c):
    f = make_field(3, 5)
    A, B, C = f(a), f(b), f(c)
    assert A * (B + C) == A * B + A * C
    assert (A * B) * C == A * (B * C)
    if b:
        assert A / B * B == A


@given(st.integers(1, 2**16 - 1))
@settings(max_examples=100, deadline=None)
def test_inverse_gf65536(a):
    f = make_field(2, 16)
    assert f.mul(a, f.inv(a)) == 1


def test_element_ops_and_errors():
    f = make_field(3, 2)
    a = f(5)
    assert a - a == f(0)
    assert -a + a == f(0)
    assert a ** 8 == f(1)
    assert a + 3 == a  # integers act as n * 1 in characteristic 3
    assert int(a) == 5
    with pytest.raises(ZeroDivisionError):
        f.inv(0)
    with pytest.raises(ValueError):
        f(9)
    with pytest.raises(ValueError):
        make_field(5, 1)(1) + a


# -- irreducibles -----------------------------------------------------------------


def test_is_irreducible_examples():
    g3, g2, g5 = prime_field(3), prime_field(2), prime_field(5)
    assert is_irreducible(Poly(g3, [1, 2, 0, 1]))
    assert is_irreducible(Poly(g2, [1, 1, 0, 0, 0, 0, 0, 1]))
    assert not is_irreducible(Poly(g5, [1, 0, 1]))
    with pytest.raises(ValueError):
        is_irreducible(Poly(g5, [3]))


@pytest.mark.parametrize("p,t", [(2, 2), (2, 3), (2, 4), (2, 5), (2, 6), (3, 2), (3, 3), (3, 4), (5, 2), (5, 3), (7, 2)])
def test_rabin_matches_trial_division(p, t):
    g = prime_field(p)
    for idx in range(p**t):
        f = monic_poly(g, t, idx)
        assert is_irreducible(f) == trial_division_irreducible(list(f.coeffs), p)


def test_count_small():
    assert count_irreducibles(2, 7) == (18, 18)
    for q in (2, 3, 4, 5, 7, 8, 9):
        assert count_irreducibles(q, 1).exact == q
    assert count_irreducibles(3, 2).exact == 3


@pytest.mark.parametrize("q,t", [(2, 2), (2, 3), (2, 4), (2, 6), (3, 2), (3, 3), (4, 2), (4, 3), (5, 2), (8, 2), (9, 2)])
def test_count_matches_enumeration(q, t):
    p = 2 if q in (2, 4, 8) else (3 if q in (3, 9) else q)
    f = make_field(p, round(math.log(q, p)))
    n = sum(1 for idx in range(q**t) if is_irreducible(monic_poly(f, t, idx)))
    c = count_irreducibles(q, t)
    assert c.exact == n
    assert c.lower_bound <= c.exact


def test_lower_bound_can_round():
    # (2^4 - 2 - 4) / 4 = 2.5: the bound is floored
    assert count_irreducibles(2, 4) == (3, 2)


def test_enumerate_irreducibles():
    g2 = prime_field(2)
    assert enumerate_irreducibles(g2, 2, 1) == [Poly(g2, [1, 1, 1])]
    seven = enumerate_irreducibles(g2, 7, 18)
    assert len(seven) == 18 and len(set(seven)) == 18
    assert seven[0] == Poly(g2, [1, 1, 0, 0, 0, 0, 0, 1])
    g3 = prime_field(3)
    assert enumerate_irreducibles(g3, 2, 3) == [Poly(g3, c) for c in ([1, 0, 1], [2, 1, 1], [2, 2, 1])]
    with pytest.raises(ValueError):
        enumerate_irreducibles(g2, 7, 19)


def test_enumeration_is_in_index_order():
    f = make_field(2, 2)
    polys = enumerate_irreducibles(f, 2)
    keys = [sum(c * 4**i for i, c in enumerate(p.coeffs[:-1])) for p in polys]
    assert keys == sorted(keys)


# -- polynomial ring -------------------------------------------------------------


@given(st.lists(st.integers(0, 8), max_size=6), st.lists(st.integers(0, 8), min_size=1, max_size=4))
@settings(max_examples=150, deadline=None)
def test_poly_divmod(a, b):
    f = make_field(3, 2)
    A, B = Poly(f, a), Poly(f, b)
    if B.degree < 0:
        return
    Q, R = divmod(A, B)
    assert Q * B + R == A
    assert R.degree < B.degree


def test_poly_eval():
    f = make_field(3, 1)
    P = Poly(f, [1, 2, 0, 1])
    assert [P(x) for x in range(3)] == [1, (1 + 2 + 1) % 3, (1 + 4 + 8) % 3]


# -- tower maps -------------------------------------------------------------------


def test_trace_norm_on_base():
    ext = tower(5)
    for v in range(5):
        tr, nm = trace_norm(FieldElement(ext, v))
        assert tr == FieldElement(ext.base, 2 * v % 5)
        assert nm == FieldElement(ext.base, v * v % 5)
    assert trace_norm(ext(1))[0].value == 2
    assert trace_norm(ext(2))[1].value == 4


@pytest.mark.parametrize("p,k", [(5, 1), (3, 1), (7, 1), (3, 2), (2, 2)])
def test_trace_norm_land_in_base(p, k):
    ext = tower(p, k)
    q = ext.base.order
    for v in range(ext.order):
        tr, nm = trace_norm(FieldElement(ext, v))
        assert ext.pow(tr.value, q) == tr.value
        assert ext.pow(nm.value, q) == nm.value


def test_sqrt_examples():
    ext = tower(5)
    assert sqrt_in_ext(0, ext).value == 0
    assert sqrt_in_ext(4, ext).value == 2
    y = sqrt_in_ext(2, ext)
    assert y.value >= 5  # outside GF(5)
    roots = [v for v in range(25) if ext.mul(v, v) == 2]
    assert y.value == min(roots)


@pytest.mark.parametrize("p,k", [(3, 1), (5, 1), (7, 1), (3, 2)])
def test_every_base_element_is_a_square(p, k):
    ext = tower(p, k)
    for t in range(ext.base.order):
        y = sqrt_in_ext(t, ext)
        assert ext.mul(y.value, y.value) == t


def test_sqrt_in_prime_field():
    f = make_field(13, 1)
    for a in range(13):
        r = f.sqrt(a)
        squares = {x * x % 13 for x in range(13)}
        assert (r is None) == (a not in squares)
        if r is not None:
            assert r * r % 13 == a and r <= 13 - r or r == 0


# -- expand_seed -------------------------------------------------------------------


def test_expand_seed_determinism():
    f = make_field(2, 3)
    s = f(5)
    assert expand_seed(s, b"ctx", 20) == expand_seed(s, b"ctx", 20)
    assert expand_seed(s, b"ctx", 0) == []
    assert expand_seed(s, b"ctx", 5) == expand_seed(s, b"ctx", 20)[:5]


def test_expand_seed_context_separation():
    f = make_field(3, 5)
    streams = {tuple(int(v) for v in expand_seed(f(7), f"c{i}".encode(), 16)) for i in range(100)}
    assert len(streams) == 100


def test_expand_seed_roughly_uniform():
    f = make_field(5, 1)
    counts = [0] * 5
    for v in expand_seed(f(3), b"u", 5000):
        counts[v.value] += 1
    assert all(900 < c < 1100 for c in counts)


# -- serialization ---------------------------------------------------------------


@pytest.mark.parametrize("field", [make_field(3, 3), make_field(2, 7), make_field(41, 2), tower(5), tower(3, 2)])
def test_encode_roundtrip(field):
    for v in range(0, field.order, max(1, field.order // 50)):
        assert field.decode(field.encode(v)) == v
    assert Field.from_header(field.header()) == field


def test_encoding_format():
    f = make_field(3, 2)
    assert f.encode(5) == "12"
    assert str(f(5)) == "12"
    g = make_field(41, 1)
    assert g.encode(40) == "40"
    assert make_field(41, 2).encode(41 * 3 + 2) == "03.02"
    with pytest.raises(ValueError):
        f.decode("30")
