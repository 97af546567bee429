from __future__ import annotations

from fractions import Fraction
from math import gcd

from eislab.cuspgroup import (
    cuspidal_class,
    cuspidal_group_structure,
    e_vector,
    order_by_covolume,
    order_by_search,
    order_closed_form,
    order_lattice_oracle,
    order_with_oracle,
    unit_exponent_lattice,
)
from eislab.divlattice import DivisorTable, SquareFreeLevel
from eislab.exactnum import phi_psi_omega


def _squarefree(lo, hi):
    out = []
    for n in range(lo, hi + 1):
        if all(n % (p * p) for p in (2, 3, 5, 7, 11, 13)):
            out.append(n)
    return out


def _proper_divisors(n):
    return [m for m in range(2, n + 1) if n % m == 0]


def test_class_vector_examples():
    assert cuspidal_class(11, 11).coeffs == (1, -1)
    assert cuspidal_class(30, 6).coeffs == (1, -1, -1, 0, 1, 0, 0, 0)


def test_class_vector_degree_zero():
    for n in _squarefree(2, 60):
        for m in _proper_divisors(n):
            assert sum(cuspidal_class(n, m).coeffs) == 0


def test_class_vector_input_validation():
    for n, m in ((11, 1), (11, 3), (30, 4)):
        try:
            cuspidal_class(n, m)
        except ValueError:
            pass
        else:
            raise AssertionError(f"expected rejection of M={m} at N={n}")


def test_closed_form_examples():
    assert (order_closed_form(11, 11).closed_form_order, order_closed_form(11, 11).h) == (5, 1)
    assert (order_closed_form(17, 17).closed_form_order, order_closed_form(17, 17).h) == (4, 2)
    assert (order_closed_form(34, 17).closed_form_order, order_closed_form(34, 17).h) == (4, 2)
    assert (order_closed_form(30, 2).closed_form_order, order_closed_form(30, 2).h) == (8, 1)
    assert order_closed_form(33, 3).closed_form_order == 10


def test_h_two_family_scan():
    for n in _squarefree(7, 120):
        for m in _proper_divisors(n):
            res = order_closed_form(n, m)
            expected_h = 2 if (n in (m, 2 * m) and m % 8 == 1 and
                               len(SquareFreeLevel(m).primes) == 1) else 1
            assert res.h == expected_h, (n, m)


def test_oracle_examples():
    assert order_lattice_oracle(11, 11) == 5
    assert order_lattice_oracle(19, 19) == 3
    assert order_lattice_oracle(30, 30) == 1
    assert order_lattice_oracle(17, 17) == 4


def test_oracle_agrees_with_closed_form_small():
    for n in _squarefree(7, 60):
        for m in _proper_divisors(n):
            res = order_with_oracle(n, m)
            assert res.agreed, (n, m, res)


def test_brute_force_search_cross_check():
    # simplest possible membership loop, small tables only
    for n in (11, 17, 19, 22, 30, 33, 34, 42):
        for m in _proper_divisors(n):
            assert order_by_search(n, m) == order_lattice_oracle(n, m), (n, m)


def test_covolume_route_cross_check():
    # Smith-form covolume ratio, independent of the triangular solve
    for n in (11, 19, 30, 42, 66, 105):
        for m in _proper_divisors(n):
            assert order_by_covolume(n, m) == order_lattice_oracle(n, m), (n, m)


def test_unit_exponent_lattice_rank():
    for n in (11, 15, 30, 42):
        table = DivisorTable(SquareFreeLevel(n))
        exps = unit_exponent_lattice(n)
        assert exps.rows == len(table) - 1
        for row in exps.data:
            assert sum(row) == 0
            assert sum(e * d.value for e, d in zip(row, table.divisors)) % 24 == 0
            assert sum(e * (n // d.value) for e, d in zip(row, table.divisors)) % 24 == 0
            for i, p in enumerate(SquareFreeLevel(n).primes):
                parity = sum(e * d.bits[i] for e, d in zip(row, table.divisors))
                assert parity % 2 == 0


def test_e_vector_last_entry_and_m_equals_n():
    for n in _squarefree(7, 40):
        phi, psi, omega = phi_psi_omega(n)
        for m in _proper_divisors(n):
            vec = e_vector(n, m)
            psi_c = phi_psi_omega(n // m)[1]
            assert vec[-1] == (-1) ** omega * Fraction(24, phi * psi_c)
        full = e_vector(n, n)
        table = DivisorTable(SquareFreeLevel(n))
        s = len(table)
        for a in range(s):
            dual = table.divisors[s - 1 - a]
            expected = Fraction(24, phi) * (1 if (omega - dual.omega) % 2 == 0 else -1)
            assert full[a] == expected


def test_e_vector_example_n10():
    vec = e_vector(10, 10)
    assert vec == [Fraction(24, 4) * s for s in (1, -1, -1, 1)]


def test_group_structure_examples():
    assert cuspidal_group_structure(11) == (5,)
    assert cuspidal_group_structure(13) == ()


def test_group_exponent_divisible_by_class_orders():
    for n in _squarefree(7, 60):
        structure = cuspidal_group_structure(n)
        exponent = structure[-1] if structure else 1
        for m in _proper_divisors(n):
            assert exponent % order_lattice_oracle(n, m) == 0, (n, m)


def test_outside_hypothesis_flag():
    assert order_closed_form(6, 6).outside_hypothesis
    assert order_closed_form(5, 5).outside_hypothesis
    assert not order_closed_form(7, 7).outside_hypothesis
