from fractions import Fraction

import pytest

from toralrank import bounds as B
from toralrank.errors import DomainError

# The three reference tables, row by row.
TABLE_4A = {
    4: [8, 9, 10, 12, 13, 14, 16, 16, 16, 16],
    6: [12, 14, 16, 19, 22, 26, 32, 39, 50, 64],
    10: [20, 24, 28, 34, 41, 50, 64, 84, 122, 216],
}
TABLE_4B = {
    4: [8, 10, 12, 15, 19, 24, 32, 46, 72, 152],
    6: [12, 15, 18, 23, 28, 36, 48, 68, 108, 228],
    10: [20, 25, 30, 38, 47, 60, 80, 114, 180, 380],
}
TABLE_5 = {
    2: [3, 6, 10, 16],
    3: [3, 6, 12, 28, 44, 64],
    4: [3, 7, 13, 25, 40, 65, 110, 214],
    5: [3, 6, 11, 20, 33, 52, 80, 123, 208, 428],
}


class TestClassical:
    @pytest.mark.parametrize(
        "r,hybrid,amann,target",
        [(2, 4, 4, 4), (3, 8, 8, 8), (6, 14, 16, 64)],
    )
    def test_values(self, r, hybrid, amann, target):
        out = B.classical(r)
        assert (out["hybrid"], out["amann"], out["trc_target"]) == (hybrid, amann, target)

    def test_quadruple(self):
        assert B.quadruple_rank_bound(1) == 4
        assert B.quadruple_rank_bound(3) == 12
        assert B.quadruple_rank_bound(0) == 0


class TestBettiTradeoff:
    def test_table_values(self):
        assert B.betti_tradeoff_bound(10, 1, 4).value == 8
        entry = B.betti_tradeoff_bound(10, 4, 6)
        assert entry.value == 19
        assert entry.exact == Fraction(132, 7)
        assert entry.argmin_k == (4,)
        entry = B.betti_tradeoff_bound(10, 10, 10)
        assert entry.value == 216
        assert entry.argmin_k == (4,)

    def test_rank_beyond_dimension(self):
        with pytest.raises(DomainError):
            B.betti_tradeoff_bound(10, 11, 4)

    def test_monotone_in_b(self):
        for r in range(1, 11):
            vals = [B.betti_tradeoff_bound(10, r, b).exact for b in range(1, 13)]
            assert all(x <= y for x, y in zip(vals, vals[1:]))

    def test_b_equals_k_edge(self):
        # The k = b term contributes 2^0 with no special-casing.
        e = B.betti_tradeoff_bound(10, 10, 4)
        ratio = Fraction(19, 1)
        assert min(ratio * 2 * k + 2 ** (4 - k) for k in range(5)) == e.exact


class TestLowDegree:
    @pytest.mark.parametrize(
        "r,l,value", [(2, 4, 10), (8, 6, 68), (10, 10, 380)]
    )
    def test_table_values(self, r, l, value):
        assert B.low_degree_bound(10, r, l).value == value

    def test_exact_fraction(self):
        assert B.low_degree_bound(10, 2, 4).exact == Fraction(88, 9)


class TestRankTradeoff:
    def test_matches_betti_form_at_b_equals_r(self):
        assert B.csymplectic_rank_bound(5, 10).value == 216
        assert (
            B.csymplectic_rank_bound(5, 10).exact
            == B.betti_tradeoff_bound(10, 10, 10).exact
        )

    def test_tiny_case(self):
        entry = B.csymplectic_rank_bound(1, 1)
        assert entry.value == 2
        assert entry.argmin_k == (0,)

    def test_rank_one_collapses_to_target(self):
        # ratio (2n+r-1)/(2n-r+1) is 1 at r = 1, so the k-sweep bottoms out
        # at the bare 2^r term.
        entry = B.csymplectic_rank_bound(5, 1)
        assert entry.exact == 2
        assert entry.argmin_k == (0,)

    def test_out_of_range(self):
        with pytest.raises(DomainError):
            B.csymplectic_rank_bound(2, 5)


class TestRatioFloor:
    def test_rank_one_is_trivial(self):
        assert B.hk_ratio_floor(7, 1, 1) == 1
        assert B.hk_ratio_floor(7, 1, 3) == 1

    def test_small_products(self):
        assert B.hk_ratio_floor(3, 3, 1) == 2
        assert B.hk_ratio_floor(3, 3, 2) == 6

    def test_telescoping_closed_form(self):
        for n in range(2, 9):
            for r in range(1, 2 * n + 1):
                assert B.hk_ratio_floor(n, r, 1) == Fraction(2 * n + r - 1, 2 * n - r + 1)

    def test_domain(self):
        with pytest.raises(DomainError):
            B.hk_ratio_floor(3, 3, 4)


class TestHighRankBound:
    def test_table_examples(self):
        entry = B.duality_bound_high_rank(3, 4)
        assert entry.value == 28
        assert entry.argmin_k == (0, 1)
        entry = B.duality_bound_high_rank(4, 8)
        assert entry.value == 214
        assert entry.argmin_k == (2,)
        entry = B.duality_bound_high_rank(4, 4)
        assert entry.value == 25
        assert entry.exact == Fraction(124, 5)
        assert entry.argmin_k == (1,)

    def test_range_dispatch(self):
        with pytest.raises(DomainError):
            B.duality_bound_high_rank(3, 3)  # odd n needs r >= n+1
        with pytest.raises(DomainError):
            B.duality_bound_high_rank(4, 3)  # even n needs r >= n
        with pytest.raises(DomainError):
            B.duality_bound_high_rank(3, 7)  # r <= 2n

    def test_argmin_location_for_large_n(self):
        # For n >= 7 the minimum should be attained at some k > r - n.
        for n in range(7, 13):
            rs = range(n + 1, 2 * n + 1) if n % 2 else range(n, 2 * n + 1)
            for r in rs:
                entry = B.duality_bound_high_rank(n, r)
                assert any(k > r - n for k in entry.argmin_k), (n, r, entry.argmin_k)

    def test_coincides_with_doubled_rank_tradeoff_for_large_n(self):
        # Past the argmin the binomial tail is a full power of two, so for
        # n >= 7 the bound is exactly twice the plain k-sweep.
        for n in range(7, 11):
            rs = range(n + 1, 2 * n + 1) if n % 2 else range(n, 2 * n + 1)
            for r in rs:
                high = B.duality_bound_high_rank(n, r).exact
                plain = B.csymplectic_rank_bound(n, r).exact
                assert high == 2 * plain, (n, r)


class TestLowRankBound:
    def test_table_examples(self):
        entry = B.duality_bound_low_rank(3, 3)
        assert entry.value == 12
        assert entry.exact == 12
        assert entry.argmin_k == (1,)
        assert entry.argmin_gamma == Fraction(1, 2)
        entry = B.duality_bound_low_rank(4, 3)
        assert entry.value == 13
        assert entry.exact == Fraction(88, 7)
        assert entry.argmin_gamma == Fraction(11, 35)
        entry = B.duality_bound_low_rank(5, 5)
        assert entry.value == 33
        assert entry.exact == Fraction(65, 2)
        assert entry.argmin_k == (2,)
        assert entry.argmin_gamma == Fraction(13, 56)

    def test_range_dispatch(self):
        with pytest.raises(DomainError):
            B.duality_bound_low_rank(3, 4)
        with pytest.raises(DomainError):
            B.duality_bound_low_rank(4, 4)

    def test_gamma_never_beats_endpoints(self):
        # max(B1, B2) at the reported point is <= its value at gamma = 0, k.
        for n in range(2, 6):
            top = n if n % 2 else n - 1
            for r in range(1, top + 1):
                entry = B.duality_bound_low_rank(n, r)
                s1 = B.hk_ratio_floor(n, r, 1)
                sm = B.hk_ratio_floor(n, r, n // 2 + 1)
                for k in range(r + 1):
                    def line_max(gamma):
                        b1 = 2 * s1 * (k - gamma) + 2 * sm * gamma + 2 ** (r - k)
                        b2 = 4 * s1 * (k - gamma) + 2 ** (r - k + 1)
                        return max(b1, b2)

                    assert entry.exact <= line_max(Fraction(0))
                    assert entry.exact <= line_max(Fraction(k))


class TestMidpointRatio:
    def test_base_cases(self):
        assert B.midpoint_ratio_check(4, 3)
        assert B.midpoint_ratio_check(4, 4)
        assert B.midpoint_ratio_check(4, 5)
        # (4, 3) is the equality case: both sides are 10/3.
        assert B.hk_ratio_floor(4, 3, 2) == Fraction(10, 3)
        assert B.hk_ratio_floor(4, 3, 1) == Fraction(5, 3)

    def test_large_case(self):
        assert B.midpoint_ratio_check(40, 6)

    def test_sweep(self):
        ok, records = B.midpoint_ratio_sweep(40)
        assert ok
        assert len(records) == sum(n - 1 for n in range(4, 41, 2))

    def test_domain(self):
        with pytest.raises(DomainError):
            B.midpoint_ratio_check(5, 3)
        with pytest.raises(DomainError):
            B.midpoint_ratio_check(4, 2)


class TestTables:
    def test_table_4a_cells(self):
        _, rows = B.table_cells("4a")
        got = {int(lbl.split("=")[1]): vals for lbl, vals in rows}
        assert got == TABLE_4A

    def test_table_4b_cells(self):
        _, rows = B.table_cells("4b")
        got = {int(lbl.split("=")[1]): vals for lbl, vals in rows}
        assert got == TABLE_4B

    def test_table_5_cells(self):
        _, rows = B.table_cells("5")
        got = {int(lbl.split("=")[1]): vals for lbl, vals in rows}
        assert got == TABLE_5

    def test_ceiling_convention_via_exact_minima(self):
        # Every printed cell is the ceiling of the exact rational minimum.
        import math

        for b, row in TABLE_4A.items():
            for r, cell in zip(range(1, 11), row):
                assert math.ceil(B.betti_tradeoff_bound(10, r, b).exact) == cell
        for l, row in TABLE_4B.items():
            for r, cell in zip(range(1, 11), row):
                assert math.ceil(B.low_degree_bound(10, r, l).exact) == cell
        for n, row in TABLE_5.items():
            for r, cell in zip(range(1, 2 * n + 1), row):
                if (n % 2 == 1 and r >= n + 1) or (n % 2 == 0 and r >= n):
                    exact = B.duality_bound_high_rank(n, r).exact
                else:
                    exact = B.duality_bound_low_rank(n, r).exact
                assert math.ceil(exact) == cell

    def test_fractional_cell_really_needs_ceiling(self):
        assert B.duality_bound_low_rank(4, 3).exact == Fraction(88, 7)
        assert B.duality_bound_low_rank(4, 3).value == 13


class TestBestBound:
    def test_csymplectic_with_exterior_witness(self):
        report = B.best_bound(B.BoundInputs(n=4, r=7, csymplectic=True))
        assert report.entry("duality_high_rank").value == 110
        assert report.entry("exterior_algebra").value == 128
        assert report.best == 128
        assert report.meets_trc

    def test_csymplectic_exceeds_target(self):
        report = B.best_bound(B.BoundInputs(n=3, r=4, csymplectic=True))
        assert report.best == 28
        assert report.trc_target == 16
        assert report.meets_trc

    def test_plain_space_without_betti_data(self):
        report = B.best_bound(B.BoundInputs(n=10, r=3))
        assert report.best == 8
        assert report.entry("betti_tradeoff") is None
        assert not report.entry("exterior_algebra").applicable

    def test_quadruple_needs_fd_at_least_four(self):
        report = B.best_bound(B.BoundInputs(n=1, r=1, csymplectic=True))
        assert not report.entry("quadruple_rank").applicable

    def test_inconsistent_inputs(self):
        with pytest.raises(DomainError):
            B.BoundInputs(n=3, r=7, csymplectic=True)
        with pytest.raises(DomainError):
            B.BoundInputs(n=3, r=4)

    def test_b_and_l_together(self):
        report = B.best_bound(B.BoundInputs(n=10, r=4, b=6, l=4))
        assert report.entry("betti_tradeoff").value == 19
        assert report.entry("low_degree").value == 15
        assert report.best == 19


class TestAudit:
    def test_trc_satisfied_through_dimension_eight(self):
        ok, records = B.trc_audit(4)
        assert ok
        assert len(records) == sum(2 * n for n in range(1, 5))
        for n, r, best, target, meets in records:
            assert meets and best >= target

    def test_exterior_witness_is_needed(self):
        # At (n=4, r=7) and (n=4, r=8) the table values alone fall short.
        assert B.duality_bound_high_rank(4, 7).value == 110 < 2 ** 7
        assert B.duality_bound_high_rank(4, 8).value == 214 < 2 ** 8
