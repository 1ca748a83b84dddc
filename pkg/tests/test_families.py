import pytest

from legdet.exactla import IntMatrix, det, pfaffian
from legdet.families import (
    CpRecord,
    LinearPoly,
    TheoremViolation,
    D_poly,
    build_A,
    build_ST_matrix,
    build_u,
    compute_cp,
    liwu_matrix,
    liwu_poly,
    perturbation_matrix,
)
from legdet.numtheory import jacobsthal_sum, prime_context, primes_in_range

from oracles import det_leibniz, legendre_brute

PRIMES = primes_in_range(3, 200)
ONE_MOD_4 = [p for p in PRIMES if p % 4 == 1]
THREE_MOD_4 = [p for p in PRIMES if p % 4 == 3]

# c_p as tabulated in the source paper for p <= 53
PAPER_CP = {
    5: 1, 13: 3, 17: 21, 29: 83, 37: 9095, 41: 98835, 53: 4689023,
    3: 1, 7: 1, 11: 1, 19: 17, 23: 1, 31: 33, 43: 67119, 47: 1870591,
}


def brute_A(p, delta):
    idx = range(delta, (p - 1) // 2 + 1)
    return [[legendre_brute(j * j - k * k, p) for k in idx] for j in idx]


class TestLinearPoly:
    def test_eval(self):
        f = LinearPoly(-7, 21)
        assert f(0) == -7 and f(1) == 14 and f(2) == 35

    def test_from_values(self):
        assert LinearPoly.from_values(3, 5, 7) == LinearPoly(3, 2)
        with pytest.raises(TheoremViolation):
            LinearPoly.from_values(3, 5, 8)


class TestBuilders:
    def test_A_p5(self):
        A = build_A(prime_context(5), 1)
        assert A.tolist() == [[0, -1], [-1, 0]]
        assert det(A) == -1

    def test_A_empty(self):
        A = build_A(prime_context(3), 2)
        assert A.shape == (0, 0) and det(A) == 1

    @pytest.mark.parametrize("p", PRIMES[:12])
    @pytest.mark.parametrize("delta", [0, 1, 2])
    def test_A_matches_brute(self, p, delta):
        assert build_A(prime_context(p), delta).tolist() == brute_A(p, delta)

    @pytest.mark.parametrize("p", PRIMES)
    def test_symmetry_type(self, p):
        ctx = prime_context(p)
        for delta in (0, 1, 2):
            A = build_A(ctx, delta)
            assert (A.is_symmetric() if p % 4 == 1 else A.is_skew_symmetric())

    @pytest.mark.parametrize("p", PRIMES)
    def test_first_row_of_A0(self, p):
        ctx = prime_context(p)
        A0 = build_A(ctx, 0)
        for k in range(ctx.half + 1):
            assert A0[0, k] == ctx.chi[p - 1] * ctx.chi[k * k % p]

    def test_u(self):
        assert build_u(prime_context(5), 1) == [1, -1]
        assert build_u(prime_context(7), 1) == [1, 1, -1]
        assert build_u(prime_context(11), 0)[0] == 0
        with pytest.raises(ValueError):
            build_u(prime_context(7), 2)

    @pytest.mark.parametrize("p", PRIMES)
    @pytest.mark.parametrize("delta", [0, 1])
    def test_perturbation_is_rank_one(self, p, delta):
        ctx = prime_context(p)
        u = build_u(ctx, delta)
        assert perturbation_matrix(ctx, delta) == IntMatrix([[a * b for b in u] for a in u])

    def test_ST_examples(self):
        ctx5 = prime_context(5)
        assert build_ST_matrix(ctx5, 1, "S").tolist() == [[-1, 0], [0, -1]]
        assert build_ST_matrix(prime_context(3), 1, "T").tolist() == [[0, 1], [1, -1]]
        for p in PRIMES[:10]:
            ctx = prime_context(p)
            assert build_ST_matrix(ctx, -1, "S") == build_A(ctx, 1)
            assert build_ST_matrix(ctx, 5, "T").shape == ((p + 1) // 2,) * 2
        with pytest.raises(ValueError):
            build_ST_matrix(ctx5, 1, "U")


class TestEigenAndRowSums:
    @pytest.mark.parametrize("p", ONE_MOD_4)
    def test_u_is_eigenvector(self, p):
        ctx = prime_context(p)
        j = jacobsthal_sum(ctx, -1)
        for delta in (0, 1):
            u = build_u(ctx, delta)
            assert build_A(ctx, delta) @ u == [j * x for x in u]

    @pytest.mark.parametrize("p", THREE_MOD_4)
    def test_rows_of_A1_sum_to_zero(self, p):
        assert all(sum(r) == 0 for r in build_A(prime_context(p), 1))

    @pytest.mark.parametrize("p", ONE_MOD_4)
    def test_A0_versus_A1(self, p):
        ctx = prime_context(p)
        d0, d1 = det(build_A(ctx, 0)), det(build_A(ctx, 1))
        assert d0 == ctx.half * d1
        assert d0 % p != 0

    @pytest.mark.parametrize("p", PRIMES)
    def test_parity(self, p):
        ctx = prime_context(p)
        if p % 4 == 1:
            assert det(build_A(ctx, 1)) % 2 == 1
        elif p > 3:
            assert det(build_A(ctx, 2)) % 2 == 1


class TestDPoly:
    @pytest.mark.parametrize("p", THREE_MOD_4)
    def test_delta0_vanishes_for_3_mod_4(self, p):
        assert D_poly(prime_context(p), 0) == LinearPoly(0, 0)

    def test_examples_against_leibniz(self):
        # p=5, delta=0: slope -(2*1)^2
        ctx = prime_context(5)
        A, u = brute_A(5, 0), build_u(ctx, 0)
        direct = det_leibniz([[a + x * y for a, y in zip(r, u)] for r, x in zip(A, u)]) - det_leibniz(A)
        assert direct == -4
        assert D_poly(ctx, 0) == LinearPoly(0, -4)
        # p=7, delta=1: slope (1*1)^2
        ctx = prime_context(7)
        A, u = brute_A(7, 1), build_u(ctx, 1)
        direct = det_leibniz([[a + x * y for a, y in zip(r, u)] for r, x in zip(A, u)]) - det_leibniz(A)
        assert direct == 1
        assert D_poly(ctx, 1) == LinearPoly(0, 1)

    @pytest.mark.parametrize("p", ONE_MOD_4)
    def test_proportional(self, p):
        ctx = prime_context(p)
        assert D_poly(ctx, 0).slope == ctx.half * D_poly(ctx, 1).slope


class TestComputeCp:
    @pytest.mark.parametrize("p", sorted(PAPER_CP))
    def test_paper_table(self, p):
        rec = compute_cp(prime_context(p))
        assert rec.c_p == PAPER_CP[p]
        assert rec.c_p % 2 == 1

    def test_p3_trivial(self):
        rec = compute_cp(prime_context(3))
        assert rec.c_p == 1
        assert rec.det_A2 == 1
        assert rec.class_number is None

    def test_branch_fields(self):
        r13 = compute_cp(prime_context(13))
        assert r13.j_minus_1 == -3 and r13.det_A2 is None and r13.class_number is None
        assert -r13.det_A1 // r13.j_minus_1 == 9
        r23 = compute_cp(prime_context(23))
        assert r23.j_minus_1 is None and r23.class_number == 3 and r23.det_A1 == 0
        assert r23.pfaffian_A2 ** 2 == r23.det_A2 == 1
        assert isinstance(r23, CpRecord) and r23.conjecture_holds

    @pytest.mark.parametrize("p", THREE_MOD_4)
    def test_pfaffian_witness(self, p):
        ctx = prime_context(p)
        A2 = build_A(ctx, 2)
        if A2.nrows % 2 == 0:
            assert pfaffian(A2) ** 2 == det(A2)

    def test_violation_carries_witness(self):
        err = TheoremViolation("expected a perfect square", p=7, value=3)
        assert err.witness == {"p": 7, "value": 3}
        assert "value=3" in str(err)


class TestLiWu:
    @pytest.mark.parametrize(
        "p, expected",
        [(3, LinearPoly(-1, 1)), (7, LinearPoly(-7, 21)), (11, LinearPoly(-(11**2), 5 * 11**2))],
    )
    def test_examples(self, p, expected):
        assert liwu_poly(prime_context(p)) == expected

    def test_matrix_at_x_against_leibniz(self):
        ctx = prime_context(7)
        M = liwu_matrix(ctx, 4)
        assert det_leibniz(M.tolist()) == (3 * 4 - 1) * 7

    def test_rejects_1_mod_4(self):
        with pytest.raises(ValueError):
            liwu_poly(prime_context(13))
