import random
import threading

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st
from systems import random_fiber, random_system

from clusternet.algebra import (
    BasisCache,
    Binomial,
    Cmp,
    GroebnerBasis,
    TermOrder,
    buchberger,
    colon_by_monomial,
    colon_by_variable,
    compare,
    default_order,
    demanded_keys,
    is_connected,
    make_max_order,
    spair,
)
from clusternet.exceptions import ContractError, DimensionMismatch
from clusternet.oracle import component

PERMANGANATE_GRADING = (8, 7, 1, 6, 1, 7, 5, 3, 1, 3, 3, 11, 3, 7, 13, 13, 11, 12, 12)


def drl(n):
    return TermOrder.degrevlex(n)


# --- term orders ----------------------------------------------------------


def test_compare_degrevlex_prefers_first_variable():
    assert compare(TermOrder((1, 1), (0, 1)), (1, 0), (0, 1)) is Cmp.GREATER


def test_compare_weight_dominates():
    assert compare(TermOrder((1, 2), (0, 1)), (2, 0), (0, 2)) is Cmp.LESS


def test_compare_reflexive():
    o = TermOrder((3, 1, 2), (2, 0, 1))
    assert compare(o, (4, 0, 7), (4, 0, 7)) is Cmp.EQUAL


def test_compare_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        compare(drl(2), (1, 0, 0), (0, 1))


def test_term_order_rejects_zero_weight():
    with pytest.raises(ValueError):
        TermOrder((1, 0), (0, 1))
    with pytest.raises(ValueError):
        TermOrder((1, 1), (0, 0))


@st.composite
def orders_and_exponents(draw, k=3):
    n = draw(st.integers(1, 5))
    w = tuple(draw(st.lists(st.integers(1, 4), min_size=n, max_size=n)))
    perm = tuple(draw(st.permutations(range(n))))
    vecs = [tuple(draw(st.lists(st.integers(0, 4), min_size=n, max_size=n))) for _ in range(k)]
    return TermOrder(w, perm), vecs


@given(orders_and_exponents())
def test_order_laws(data):
    o, (a, b, c) = data
    ab, ba = compare(o, a, b), compare(o, b, a)
    assert ab == -ba
    assert (ab == Cmp.EQUAL) == (a == b)
    if ab >= 0 and compare(o, b, c) >= 0:
        assert compare(o, a, c) >= 0
    shift = lambda x: tuple(p + q for p, q in zip(x, c))
    assert compare(o, shift(a), shift(b)) == ab
    zero = (0,) * len(a)
    assert compare(o, a, zero) >= 0


def test_make_max_order_examples():
    assert make_max_order((1, 1), 0).weight == (1, 2)
    assert make_max_order((1, 1, 1), 2).weight == (2, 2, 1)
    o = make_max_order(PERMANGANATE_GRADING, 2)
    assert o.weight == tuple(2 * x - (k == 2) for k, x in enumerate(PERMANGANATE_GRADING))
    assert o.weight[:3] == (16, 14, 1)
    assert o.tiebreak_perm[-1] == 2


def test_make_max_order_errors():
    with pytest.raises(ValueError):
        make_max_order((1, 0), 0)
    with pytest.raises(IndexError):
        make_max_order((1, 1), 2)


# --- S-pairs, normal forms ------------------------------------------------


def test_spair_example():
    o = drl(3)
    f = Binomial((1, 0, 0), (0, 1, 0))
    g = Binomial((0, 1, 0), (0, 0, 1))
    assert spair(f, g, o) == Binomial((0, 2, 0), (1, 0, 1))


def test_spair_identical_is_none():
    f = Binomial((1, 0), (0, 1))
    assert spair(f, f, drl(2)) is None


def test_spair_coprime_heads_reduce_to_zero():
    o = drl(3)
    f = Binomial((1, 0, 0), (0, 0, 1))
    g = Binomial((0, 1, 0), (0, 0, 1))
    G = buchberger([f, g], o)
    s = spair(f, g, o)
    assert G.normal_form(s.head) == G.normal_form(s.tail)


def test_normal_form_empty_basis():
    m = (5, 0, 6, 0, 0, 0, 2) + (0,) * 12
    assert GroebnerBasis(drl(19), []).normal_form(m) == m


def test_normal_form_chain():
    G = buchberger([(1, -1, 0), (0, 1, -1)], drl(3))
    assert G.normal_form((1, 0, 0)) == (0, 0, 1)


def test_normal_form_max_order():
    G = buchberger([(-1, 1)], make_max_order((1, 1), 0))
    assert G.elements == (Binomial((0, 1), (1, 0)),)
    assert G.normal_form((0, 2)) == (2, 0)


def test_is_connected_examples():
    G = buchberger([(1, -1, 0)], drl(3))
    assert is_connected((2, 1, 3), (2, 1, 3), G)
    assert is_connected((1, 0, 0), (0, 1, 0), G)
    assert not is_connected((1, 0, 0), (0, 0, 1), G)


# --- Buchberger -------------------------------------------------------------


def test_buchberger_single():
    G = buchberger([(1, -1)], drl(2))
    assert G.elements == (Binomial((1, 0), (0, 1)),)


def test_buchberger_chain():
    G = buchberger([(1, -1, 0), (0, 1, -1)], drl(3))
    # {x1 - x2, x2 - x3} is already a basis; its reduced form rewrites the first tail
    assert set(G.elements) == {Binomial((1, 0, 0), (0, 0, 1)), Binomial((0, 1, 0), (0, 0, 1))}
    s = spair(Binomial((1, 0, 0), (0, 1, 0)), Binomial((0, 1, 0), (0, 0, 1)), drl(3))
    assert G.normal_form(s.head) == G.normal_form(s.tail)
    assert G.normal_form((1, 0, 0)) == G.normal_form((0, 1, 0))


def test_buchberger_accepts_pairs_and_drops_zero():
    o = drl(2)
    G = buchberger([((1, 0), (0, 1)), ((1, 1), (1, 1))], o)
    assert len(G) == 1


def _sympy_basis(moves, n):
    xs = sympy.symbols(f"x1:{n + 1}")

    def mono(e):
        return sympy.Mul(*[x ** k for x, k in zip(xs, e)])

    polys = [mono([max(v, 0) for v in u]) - mono([max(-v, 0) for v in u]) for u in moves]
    gb = sympy.groebner(polys, *xs, order="grevlex")
    out = set()
    for p in gb.exprs:
        terms = sympy.Poly(p, *xs).terms(order="grevlex")
        assert len(terms) == 2 and {c for _, c in terms} == {1, -1}
        out.add(Binomial(tuple(terms[0][0]), tuple(terms[1][0])))
    return out


@pytest.mark.parametrize("seed", range(25))
def test_buchberger_matches_generic_cas(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 4)
    moves = []
    while len(moves) < rng.randint(1, 4):
        u = tuple(rng.randint(-2, 2) for _ in range(n))
        if any(u) and sum(u) == 0:
            moves.append(u)
    G = buchberger(moves, drl(n))
    assert set(G.elements) == _sympy_basis(moves, n)


def _check_reduced(G):
    for f in G:
        for h in G:
            if f == h:
                continue
            assert not all(a <= b for a, b in zip(f.head, h.head))
            assert not all(a <= b for a, b in zip(f.head, h.tail))
    for f in G:
        for h in G:
            s = spair(f, h, G.order)
            if s is not None:
                assert G.normal_form(s.head) == G.normal_form(s.tail)


@pytest.mark.parametrize("seed", range(40))
def test_buchberger_output_is_reduced_groebner_basis(seed):
    _, n, g, U, _ = random_system(seed)
    for order in (default_order(g), make_max_order(g, seed % n)):
        _check_reduced(buchberger(U, order))


@pytest.mark.parametrize("seed", range(20))
def test_basis_independent_of_generator_order(seed):
    rng, n, g, U, _ = random_system(seed)
    o = default_order(g)
    G1 = buchberger(U, o)
    V = list(U)
    rng.shuffle(V)
    V = [tuple(-x for x in u) if rng.random() < 0.5 else u for u in V]
    G2 = buchberger(V, o)
    assert G1 == G2
    _, fib = random_fiber(rng, g)
    assert all(G1.normal_form(x) == G2.normal_form(x) for x in fib)


# --- normal form properties -------------------------------------------------


@pytest.mark.parametrize("seed", range(30))
def test_normal_form_idempotent_and_congruence_sound(seed):
    rng, n, g, U, _ = random_system(seed)
    G = buchberger(U, default_order(g))
    _, fib = random_fiber(rng, g)
    for x in fib:
        r = G.normal_form(x)
        assert G.normal_form(r) == r
        for u in U:
            for sgn in (1, -1):
                y = tuple(a + sgn * b for a, b in zip(x, u))
                if min(y) >= 0:
                    assert G.normal_form(y) == r


@pytest.mark.parametrize("seed", range(60))
def test_connectivity_matches_bfs(seed):
    rng, n, g, U, _ = random_system(seed)
    G = buchberger(U, default_order(g))
    _, fib = random_fiber(rng, g, max_size=40)
    comp = {}
    for x in fib:
        if x not in comp:
            c = frozenset(component(x, U))
            for y in c:
                comp[y] = c
    for y in fib:
        for z in fib:
            assert is_connected(y, z, G) == (comp[y] is comp[z])


@pytest.mark.parametrize("seed", range(40))
def test_max_order_attains_coordinate_maximum(seed):
    rng, n, g, U, _ = random_system(seed)
    j = rng.randrange(n)
    G = buchberger(U, make_max_order(g, j))
    _, fib = random_fiber(rng, g, max_size=40)
    for y in fib:
        best = max(z[j] for z in component(y, U))
        assert G.normal_form(y)[j] == best


# --- colon ideals -----------------------------------------------------------


def same_ideal(F, H, g):
    GF, GH = buchberger(F, default_order(g)), buchberger(H, default_order(g))
    return GF == GH


def test_colon_variable_irreducible_binomial_unchanged():
    g = (2, 1, 1)
    G = buchberger([((1, 0, 0), (0, 1, 1))], make_max_order(g, 2))
    assert colon_by_variable(G, 2, g) == list(G.elements)


def test_colon_variable_four_species_example():
    g = (2, 1, 1, 1)
    U = [(1, -1, -1, 0), (1, -1, 0, -1)]
    G = buchberger(U, make_max_order(g, 1))
    assert G.order.weight == (4, 1, 2, 2)
    # reduced form of {x1 - x2x3, x2x3 - x2x4}
    assert set(G.elements) == {Binomial((1, 0, 0, 0), (0, 1, 0, 1)),
                               Binomial((0, 1, 1, 0), (0, 1, 0, 1))}
    V = colon_by_variable(G, 1, g)
    assert set(V) == {Binomial((1, 0, 0, 0), (0, 1, 0, 1)), Binomial((0, 0, 1, 0), (0, 0, 0, 1))}
    assert same_ideal(V, [((1, 0, 0, 0), (0, 1, 1, 0)), ((0, 0, 1, 0), (0, 0, 0, 1))], g)
    assert (0, 0, 0, 1) in component((0, 0, 1, 0), V)


def test_colon_variable_recomputes_for_wrong_order():
    g = (2, 1, 1, 1)
    G = buchberger([(1, -1, -1, 0), (1, -1, 0, -1)], default_order(g))
    assert Binomial((0, 0, 1, 0), (0, 0, 0, 1)) in colon_by_variable(G, 1, g)


def test_colon_of_zero_ideal():
    assert colon_by_variable(GroebnerBasis(drl(2), []), 0, (1, 1)) == []
    assert colon_by_monomial(GroebnerBasis(drl(2), []), (1, 1), (1, 1)) == []


def test_colon_monomial_zero_returns_generators():
    G = buchberger([(1, -1, 0)], drl(3))
    assert colon_by_monomial(G, (0, 0, 0), (1, 1, 1)) == list(G.elements)


def test_colon_monomial_unit_matches_variable():
    g = (2, 1, 1, 1)
    G = buchberger([(1, -1, -1, 0), (1, -1, 0, -1)], default_order(g))
    V = colon_by_monomial(G, (0, 1, 0, 0), g)
    assert same_ideal(V, [((1, 0, 0, 0), (0, 1, 1, 0)), ((0, 0, 1, 0), (0, 0, 0, 1))], g)


def test_colon_monomial_square():
    # x1^2 - x2^2 is principal and coprime to x2, so the colon by x2^2 is unchanged
    g = (1, 1)
    G = buchberger([(2, -2)], default_order(g))
    V = colon_by_monomial(G, (0, 2), g)
    assert [tuple(b) for b in V] == [((2, 0), (0, 2))]
    W = buchberger(V, default_order(g))
    assert not is_connected((1, 0), (0, 1), W)
    # brute force: states above (0, 2) in degree 3 are not U-connected
    assert (0, 3) not in component((1, 2), [(2, -2)])


@pytest.mark.parametrize("seed", range(60))
def test_shifted_connectivity_matches_bfs(seed):
    rng, n, g, U, _ = random_system(seed)
    G = buchberger(U, default_order(g))
    dbar = tuple(rng.randint(0, 2) for _ in range(n))
    V = colon_by_monomial(G, dbar, g)
    GV = buchberger(V, default_order(g))
    _, fib = random_fiber(rng, g, max_size=60)
    above = [y for y in fib if all(a >= b for a, b in zip(y, dbar))]
    for y in above:
        cu = component(y, U)
        ys = tuple(a - b for a, b in zip(y, dbar))
        cv = component(ys, V)
        for z in above:
            zs = tuple(a - b for a, b in zip(z, dbar))
            assert (z in cu) == (zs in cv) == is_connected(ys, zs, GV)


# --- cache ------------------------------------------------------------------


def test_demanded_keys():
    D = [(0, -1, 1, 0), (-1, 0, -1, 2), (-2, 1, 1, 0)]
    assert demanded_keys(D, 4) == [((0, 0, 0, 0), 1), ((0, 0, 0, 0), 0), ((1, 0, 0, 0), 2)]


def test_cache_populate_covers_demand_and_is_valid():
    _, n, g, U, D = random_system(7)
    D = D or [tuple(-1 if k == 0 else 0 for k in range(n))]
    cache = BasisCache(U, g).populate(D)
    assert set(cache.keys()) == set(demanded_keys(D, n))
    for dbar, j in cache.keys():
        G = cache.colon_basis(dbar, j)
        assert G.order == make_max_order(g, j)
        _check_reduced(G)


def test_cache_concurrent_reads():
    g = (1, 1, 1)
    cache = BasisCache([(1, -1, 0), (0, 1, -1)], g)
    results = []

    def work(j):
        results.append(cache.colon_basis((1, 0, 0), j))

    threads = [threading.Thread(target=work, args=(k % 3,)) for k in range(12)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    by_j = {}
    for G in results:
        by_j.setdefault(G.order, set()).add(id(G))
    assert all(len(v) == 1 for v in by_j.values())


def test_cache_populate_with_processes_matches_serial():
    _, n, g, U, D = random_system(11)
    D = D or [tuple(-1 if k == 0 else 0 for k in range(n))]
    a = BasisCache(U, g).populate(D)
    b = BasisCache(U, g).populate(D, threads=2)
    assert a.keys() == b.keys()
    assert all(a.colon_basis(*k) == b.colon_basis(*k) for k in a.keys())


def test_contract_error_type():
    from clusternet.cluster import ci
    cache = BasisCache([(1, -1)], (1, 1))
    with pytest.raises(ContractError):
        ci(cache, (0, 0), (1, 1), 0)
