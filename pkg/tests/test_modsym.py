import random

import pytest

from eislab.divlattice import SquareFreeLevel
from eislab.exactnum import IntMatrix, hnf_coordinates, phi_psi_omega
from eislab.modsym import (
    boundary_and_cusps,
    build_space,
    cached_index,
    cached_ring,
    cached_space,
    compare_index_order,
    eisenstein_index,
    enumerate_eisenstein_maximal,
    hecke_matrix,
    m1_index_witnesses,
    verify_main_theorem,
    _cusps_equivalent,
    _matrix_on_cuspidal,
    _matrix_on_quotient,
    _merel_family,
    _merel_symbol_rows,
    _rows_by_paths,
    _t_symbol_rows_by_paths,
)

SQUAREFREE = [n for n in range(7, 71)
              if all(n % (p * p) for p in (2, 3, 5, 7))]


def genus_oracle(n):
    # classical genus count for the level-n modular curve, square-free n
    level = SquareFreeLevel(n)
    psi = phi_psi_omega(level)[1]
    nu2 = 1
    nu3 = 1
    for p in level.primes:
        nu2 *= 1 if p == 2 else (2 if p % 4 == 1 else 0)
        nu3 *= 1 if p == 3 else (2 if p % 3 == 1 else 0)
    nu_inf = 2 ** len(level.primes)
    g12 = 12 + psi - 3 * nu2 - 4 * nu3 - 6 * nu_inf
    assert g12 % 12 == 0
    return g12 // 12


def eta_block(d, terms):
    s = [0] * terms
    s[0] = 1
    m = d
    while m < terms:
        for j in range(terms - 1, m - 1, -1):
            s[j] -= s[j - m]
        m += d
    return s


def eta_product(pairs, terms):
    shift = sum(d * e for d, e in pairs)
    assert shift % 24 == 0
    shift //= 24
    s = [0] * terms
    s[0] = 1
    for d, e in pairs:
        blk = eta_block(d, terms)
        for _ in range(e):
            out = [0] * terms
            for i, x in enumerate(s):
                if x:
                    for j in range(terms - i):
                        if blk[j]:
                            out[i + j] += x * blk[j]
            s = out
    shifted = [0] * terms
    for i, x in enumerate(s):
        if i + shift < terms:
            shifted[i + shift] = x
    return shifted


def test_symbol_counts():
    for n in (7, 11, 14, 15, 30):
        space = build_space(n)
        assert len(space.symbols) == phi_psi_omega(SquareFreeLevel(n))[1]
        assert len(set(space.symbols)) == len(space.symbols)
    assert len(build_space(11).symbols) == 12


def test_genus_matches_oracle():
    anchors = {7: 0, 10: 0, 11: 1, 13: 0, 14: 1, 15: 1, 22: 2, 30: 3, 33: 3, 70: 9}
    for n, g in anchors.items():
        assert genus_oracle(n) == g
    for n in SQUAREFREE:
        if n <= 42 or n == 70:
            assert cached_space(n).genus == genus_oracle(n), n


def test_build_space_rejects_bad_levels():
    with pytest.raises(ValueError):
        build_space(12)
    with pytest.raises(ValueError):
        build_space(45)
    with pytest.raises(ValueError):
        build_space(127)
    build_space(127, max_level=127)


def test_quotient_rank_accounts_for_cusps_and_genus():
    for n in (11, 14, 15, 21, 30, 33):
        space = cached_space(n)
        classes = len(space.cusps.labels)
        assert space.quotient_rank == 2 * space.genus + classes - 1


def test_cusp_classes_follow_divisors():
    for n in (11, 14, 30, 66):
        space = cached_space(n)
        level = space.level
        assert len(space.cusps.labels) == 2 ** len(level.primes)
        assert all(n % d == 0 for d in space.cusps.labels)
    assert cached_space(11).cusps.labels == (1, 11)


def test_cusp_classification_dual_route():
    rng = random.Random(37)
    from math import gcd
    for n in (14, 15, 30):
        space = cached_space(n)
        for _ in range(60):
            c = rng.randrange(0, 3 * n)
            a = rng.randrange(1, 3 * n)
            g = gcd(a, c)
            a, c = a // g, c // g
            label = space.cusps.labels[space.cusps.classify((a, c))]
            assert label == gcd(c, n)


def test_cusp_equivalence_is_congruence_invariant():
    rng = random.Random(41)
    for n in (11, 14, 30):
        reps = cached_space(n).cusps.representatives
        for i, x in enumerate(reps):
            for j, y in enumerate(reps):
                assert _cusps_equivalent(n, x, y) == (i == j)
        for _ in range(25):
            a, c = rng.choice(reps)
            m = (1, 0, 0, 1)
            for _ in range(8):
                if rng.random() < 0.5:
                    m = (m[0], m[1] + m[0], m[2], m[3] + m[2])
                else:
                    m = (m[0] + m[1] * n, m[1], m[2] + m[3] * n, m[3])
            assert m[0] * m[3] - m[1] * m[2] == 1
            moved = (m[0] * a + m[1] * c, m[2] * a + m[3] * c)
            assert _cusps_equivalent(n, (a, c), moved)


def test_identity_paths_recover_symbols():
    # writing each symbol as a geodesic chain must give back its own class
    for n in (11, 14, 30):
        space = cached_space(n)
        rows = _rows_by_paths(space, 1, False)
        assert _matrix_on_quotient(space, rows) == IntMatrix.identity(space.quotient_rank)


def test_boundary_well_defined_and_ranked():
    for n in (11, 15, 30):
        space = cached_space(n)
        cusps, boundary = boundary_and_cusps(space)
        assert boundary.rows == space.quotient_rank
        assert boundary.cols == len(cusps.labels)
        from eislab.exactnum import hermite_normal_form
        assert hermite_normal_form(boundary).rows == len(cusps.labels) - 1


def test_merel_family_shape():
    for n, size in ((2, 4), (3, 7)):
        fam = _merel_family(n)
        assert len(fam) == size
        assert all(a * d - b * c == n for a, b, c, d in fam)
        assert all(a > b >= 0 and d > c >= 0 for a, b, c, d in fam)


def test_prime_action_two_routes_agree():
    rng = random.Random(43)
    cases = [(11, 2), (11, 3), (14, 3), (15, 2), (30, 7)]
    cases += [(rng.choice((21, 22, 26)), rng.choice((3, 5, 7, 11))) for _ in range(4)]
    for n, r in cases:
        if n % r == 0:
            continue
        space = cached_space(n)
        merel = _matrix_on_cuspidal(space, _merel_symbol_rows(space, r))
        paths = _matrix_on_cuspidal(space, _t_symbol_rows_by_paths(space, r))
        assert merel == paths, (n, r)


def test_eta_anchor_level_11():
    space = cached_space(11)
    coeffs = eta_product([(1, 2), (11, 2)], 16)
    assert coeffs[1:6] == [1, -2, -1, 2, 1]
    ident = IntMatrix.identity(2)
    for r in (2, 3, 5, 7, 13):
        assert hecke_matrix(space, r) == ident.scale(coeffs[r]), r
    assert hecke_matrix(space, 11) == ident.scale(coeffs[11])
    char = hecke_matrix(space, 2)
    assert (char + ident.scale(2)).is_zero()


def test_eta_anchor_level_14():
    space = cached_space(14)
    coeffs = eta_product([(1, 1), (2, 1), (7, 1), (14, 1)], 16)
    assert coeffs[1:8] == [1, -1, -2, 1, 0, 2, 1]
    ident = IntMatrix.identity(2)
    for r in (2, 3, 5, 7, 11, 13):
        assert hecke_matrix(space, r) == ident.scale(coeffs[r]), r


def test_eta_anchor_level_15():
    space = cached_space(15)
    coeffs = eta_product([(1, 1), (3, 1), (5, 1), (15, 1)], 16)
    assert coeffs[1:5] == [1, -1, -1, -1]
    ident = IntMatrix.identity(2)
    for r in (2, 3, 5, 7, 11, 13):
        assert hecke_matrix(space, r) == ident.scale(coeffs[r]), r


def test_old_space_relations_level_22():
    space = cached_space(22)
    assert space.genus == 2
    ident = IntMatrix.identity(4)
    u2 = hecke_matrix(space, 2)
    assert (u2 * u2 + u2.scale(2) + ident.scale(2)).is_zero()
    assert hecke_matrix(space, 11) == ident
    assert hecke_matrix(space, 3) == ident.scale(-1)
    assert hecke_matrix(space, 7) == ident.scale(-2)


def test_hecke_multiplicative_and_commutative():
    space = cached_space(35)
    assert hecke_matrix(space, 6) == hecke_matrix(space, 2) * hecke_matrix(space, 3)
    direct = _matrix_on_cuspidal(space, _merel_symbol_rows(space, 6))
    assert hecke_matrix(space, 6) == direct
    s11 = cached_space(11)
    assert hecke_matrix(s11, 4) == _matrix_on_cuspidal(s11, _merel_symbol_rows(s11, 4))
    s30 = cached_space(30)
    pairs = [(2, 3), (5, 7), (3, 7), (2, 11)]
    for a, b in pairs:
        ta = hecke_matrix(s30, a)
        tb = hecke_matrix(s30, b)
        assert ta * tb == tb * ta, (a, b)
    assert hecke_matrix(s30, 1) == IntMatrix.identity(2 * s30.genus)


def test_level_prime_powers_repeat_u():
    space = cached_space(14)
    u2 = hecke_matrix(space, 2)
    assert hecke_matrix(space, 4) == u2 * u2
    assert hecke_matrix(space, 8) == u2 * u2 * u2


def test_boundary_sees_operator_degree():
    # a prime-r operator moves each cusp class to itself r+1 times over
    for n, r in ((11, 2), (14, 3), (30, 7)):
        space = cached_space(n)
        full = _matrix_on_quotient(space, _merel_symbol_rows(space, r))
        assert full * space.boundary == space.boundary.scale(r + 1), (n, r)


def test_hecke_matrix_rejects_bad_index():
    with pytest.raises(ValueError):
        hecke_matrix(cached_space(11), 0)


def test_ring_rank_matches_genus():
    assert cached_ring(11).basis.rows == 1
    assert cached_ring(7).basis.rows == 0
    assert cached_ring(30).basis.rows == 3
    assert cached_ring(35).basis.rows == 3
    model = cached_ring(11)
    assert model.bound == 2
    assert model.operators[0] == IntMatrix.identity(2)


def test_ring_closed_under_products():
    ring = cached_ring(30)
    ops = ring.operators
    for i in range(1, ring.bound + 1):
        for j in range(i, ring.bound + 1):
            if i * j > ring.bound:
                continue
            prod_vec = [x for row in (ops[i - 1] * ops[j - 1]).data for x in row]
            assert hnf_coordinates(ring.basis, prod_vec) is not None, (i, j)


def test_index_anchors():
    assert cached_index(11, 11).index == 5
    assert cached_index(11, 11).elementary_divisors == (5,)
    assert cached_index(19, 19).index == 3
    assert cached_index(17, 17).index == 4
    assert cached_index(33, 3).index == 10
    assert cached_index(11, 1).index == 5


def test_index_zero_ring_flag():
    model = cached_index(7, 7)
    assert model.zero_ring
    assert model.index == 1
    assert not cached_index(11, 11).zero_ring


def test_index_stabilization_logged():
    model = cached_index(11, 11)
    assert len(model.stabilization) >= 3
    tail = [t for _, t in model.stabilization[-3:]]
    assert tail == [model.index] * 3
    assert "U11-1" in model.generator_names
    assert "T2-3" in model.generator_names


def test_index_rejects_non_divisor():
    with pytest.raises(ValueError):
        eisenstein_index(cached_ring(11), 4)
    with pytest.raises(ValueError):
        eisenstein_index(cached_ring(11), 0)


def test_comparison_verdicts():
    rep = compare_index_order(11, 11)
    assert rep.verdict == "equal"
    assert rep.index == rep.cusp_order == 5
    rep = compare_index_order(33, 3)
    assert rep.verdict == "equal"
    assert rep.alpha == rep.beta
    rep = compare_index_order(14, 7)
    assert rep.verdict in ("equal", "equal-up-to-2-power")
    t, c = rep.index, rep.cusp_order
    while t % 2 == 0:
        t //= 2
    while c % 2 == 0:
        c //= 2
    assert t == c == 3
    rep = compare_index_order(30, 15)
    assert rep.verdict == "equal-up-to-2-power"
    assert rep.index == 2 and rep.cusp_order == 1


def test_comparison_sweep_no_violations():
    for n in (11, 14, 15, 21, 22, 26, 30, 33, 34, 35):
        for m in range(2, n + 1):
            if n % m:
                continue
            rep = compare_index_order(n, m)
            assert rep.verdict != "violation", (n, m, rep.index, rep.cusp_order)
            exact = m != n and ((n // m) % 2 == 1)
            if exact:
                assert rep.index == rep.cusp_order, (n, m)


def test_census_level_11():
    recs = enumerate_eisenstein_maximal(11)
    assert [(r.ell, r.m) for r in recs] == [(5, 11)]
    assert recs[0].normalized
    assert recs[0].up_eigenvalues == ((11, 1),)


def test_census_drops_reappear_at_larger_m():
    # at level 33 the residue-5 ideal is dropped at m=3 (11 is 1 mod 5)
    # and must resurface at m=33
    recs = enumerate_eisenstein_maximal(33)
    pairs = [(r.ell, r.m) for r in recs]
    assert (5, 3) not in pairs
    assert (5, 33) in pairs
    assert (5, 11) in pairs
    assert cached_index(33, 3).index % 5 == 0
    assert cached_index(33, 33).index % 5 == 0


def test_census_residue_two_needs_small_cofactor():
    for n in (30, 34, 66):
        for rec in enumerate_eisenstein_maximal(n):
            if rec.ell == 2:
                assert n // rec.m in (1, 2), rec


def test_m1_witnesses():
    assert m1_index_witnesses(11) == ((5, 11),)
    for n in (14, 15, 30, 33, 34, 35, 66):
        for _, witness in m1_index_witnesses(n):
            assert witness is not None


def test_main_theorem_sample_levels():
    for n in (11, 14, 15, 17, 26, 30, 33, 34, 35, 66, 70):
        report = verify_main_theorem(n)
        assert report.ok, (n, [c for c in report.checks if not c.ok])


def test_main_theorem_case_labels():
    seventeen = verify_main_theorem(17)
    assert [c.case for c in seventeen.checks] == ["level-prime"]
    assert seventeen.checks[0].ok
    thirty_four = verify_main_theorem(34)
    cases = {c.case for c in thirty_four.checks}
    assert "doubled-prime" in cases
    doubled = next(c for c in thirty_four.checks if c.case == "doubled-prime")
    assert doubled.m == 17 and "order 4" in doubled.detail
    thirty = verify_main_theorem(30)
    assert {"doubled-composite", "level-composite"} <= {c.case for c in thirty.checks}


def test_cached_layers_are_shared():
    assert cached_space(11) is cached_space(11)
    assert cached_ring(11).space is cached_space(11)
    assert cached_index(11, 11) is cached_index(11, 11)
