"""Every inequality checker: golden cases, equality cases, cross-checks."""

import math

import numpy as np
import pytest

from qssa.checks import (
    ConcavityInstance,
    check_classical_mutual_info,
    check_concave_map,
    check_convexity_cl_minus_q,
    check_cpt_monotonicity,
    check_cq_chain,
    check_cqq,
    check_gibbs_variational,
    check_holevo,
    check_improved_subadd,
    check_sandwich,
    check_ssa,
    check_stronger_ssa,
    counterexample_two_sided,
    trace_exp_map,
)
from qssa.entropy import mutual_information, shannon, von_neumann
from qssa.linalg import DensityMatrix, kron, matrix_exp, partial_trace
from qssa.measurement import KrausSet, Povm, povm_to_kraus
from qssa.randgen import (
    basis_projectors,
    product_basis_kraus,
    random_cq_state,
    random_density,
    random_hermitian,
    random_kraus,
    random_positive,
    random_povm,
)


def product_state(seeds, dims):
    mats = [random_density((d,), d, s).mat for s, d in zip(seeds, dims)]
    out = mats[0]
    for m in mats[1:]:
        out = kron(out, m)
    return DensityMatrix(out, dims, trace_tol=1e-8)


def ghz_state():
    v = np.zeros(8, dtype=complex)
    v[0] = v[7] = 1 / np.sqrt(2)
    return DensityMatrix(np.outer(v, v.conj()), (2, 2, 2))


def bell_state():
    v = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
    return DensityMatrix(np.outer(v, v.conj()), (2, 2))


class TestSsa:
    def test_product_saturates(self):
        r = check_ssa(product_state((1, 2, 3), (2, 2, 2)))
        assert abs(r.slack) < 1e-9

    def test_ghz(self):
        r = check_ssa(ghz_state())
        assert r.lhs == pytest.approx(-math.log(2), abs=1e-10)
        assert r.rhs == pytest.approx(0.0, abs=1e-10)
        assert r.passed

    def test_random(self):
        r = check_ssa(random_density((2, 2, 2), 4, 5))
        assert r.passed and r.slack >= 0

    def test_factor_count(self):
        with pytest.raises(ValueError):
            check_ssa(random_density((2, 2), 4, 1))


class TestStrongerSsa:
    def test_identity_reduces_to_ssa(self):
        rho = random_density((2, 2, 2), 8, 6)
        base = check_ssa(rho)
        ref = check_stronger_ssa(rho, KrausSet([np.eye(4)], acts_on=(1, 2)))
        assert ref.lhs == pytest.approx(base.lhs, abs=1e-12)
        assert ref.rhs == pytest.approx(base.rhs, abs=1e-12)

    def test_classical_equality(self):
        rho = random_cq_state((2, 2, 2), 7)
        r = check_stronger_ssa(rho, product_basis_kraus(2, 2))
        assert abs(r.slack) <= 1e-8

    def test_random_passes(self):
        rho = random_density((2, 2, 2), 8, 8)
        k = random_kraus(4, 3, 9, acts_on=(1, 2))
        assert check_stronger_ssa(rho, k).passed

    def test_scale_freedom(self):
        rho = random_density((2, 2, 2), 8, 10)
        k = random_kraus(4, 2, 11, acts_on=(1, 2))
        base = check_stronger_ssa(rho, k)
        for c in (0.5, 2.0):
            scaled = DensityMatrix(c * rho.mat, rho.dims, unnormalized=True)
            r = check_stronger_ssa(scaled, k)
            assert r.passed == base.passed
            assert r.slack == pytest.approx(c * base.slack, abs=1e-8 * c)


class TestSandwich:
    def test_identity_collapses(self):
        rho = random_density((2, 2, 2), 8, 12)
        base = check_ssa(rho)
        left, right = check_sandwich(rho, KrausSet([np.eye(2)], acts_on=(1,)))
        assert left.rhs == pytest.approx(base.rhs, abs=1e-12)
        assert right.lhs == pytest.approx(base.rhs, abs=1e-12)
        assert abs(right.slack) < 1e-12

    def test_random_both_links(self):
        rho = random_density((2, 3, 2), 12, 13)
        k = random_kraus(2, 3, 14, acts_on=(1,))
        left, right = check_sandwich(rho, k)
        assert left.passed and right.passed

    def test_product_on_factor_one(self):
        rho1 = random_density((2,), 2, 15)
        rho23 = random_density((2, 2), 4, 16)
        rho = DensityMatrix(kron(rho1.mat, rho23.mat), (2, 2, 2), trace_tol=1e-8)
        k = random_kraus(2, 3, 17, acts_on=(1,))
        left, right = check_sandwich(rho, k)
        s23 = von_neumann(rho23)
        s2 = von_neumann(partial_trace(rho, {2}))
        assert left.rhs == pytest.approx(s23 - s2, abs=1e-9)
        assert abs(left.slack) < 1e-9
        assert abs(right.slack) < 1e-9

    def test_rejects_two_factor_kraus(self):
        rho = random_density((2, 2, 2), 8, 18)
        with pytest.raises(ValueError):
            check_sandwich(rho, KrausSet([np.eye(4)], acts_on=(1, 2)))

    def test_chain_consistency_with_ssa(self):
        rho = random_density((2, 2, 2), 8, 19)
        k = random_kraus(2, 2, 20, acts_on=(1,))
        base = check_ssa(rho)
        left, right = check_sandwich(rho, k)
        assert abs(left.lhs - base.lhs) < 1e-12
        assert abs(right.rhs - base.rhs) < 1e-12


class TestConcaveMap:
    def test_linear_case(self):
        k = KrausSet([np.eye(2)], acts_on=(1,), tol=1e-12)
        a = ConcavityInstance(np.zeros((2, 2)), k, [random_positive(2, 21, 0)])
        b = ConcavityInstance(np.zeros((2, 2)), k, [random_positive(2, 21, 1)])
        # exp(L + ln A) with L = 0 is A itself, so the map is Tr A: linear
        assert trace_exp_map(a) == pytest.approx(np.trace(a.a_ops[0]).real, abs=1e-10)
        assert abs(check_concave_map(a, b).slack) <= 1e-10

    def test_equal_arguments(self):
        k = random_kraus(3, 2, 22, acts_on=(1,))
        l_op = random_hermitian(3, 23)
        a_ops = [random_positive(3, 24, j) for j in range(2)]
        inst = ConcavityInstance(l_op, k, a_ops)
        assert abs(check_concave_map(inst, inst).slack) < 1e-10

    def test_random_dim3(self):
        k = random_kraus(3, 2, 25, acts_on=(1,))
        l_op = random_hermitian(3, 26)
        a = ConcavityInstance(l_op, k, [random_positive(3, 27, j) for j in range(2)])
        b = ConcavityInstance(l_op, k, [random_positive(3, 28, j) for j in range(2)])
        r = check_concave_map(a, b, lambdas=(0.5,))
        assert r.slack >= -1e-9

    def test_sub_complete_kraus(self):
        ops = [op * np.sqrt(0.7) for op in random_kraus(2, 2, 29).ops]
        k = KrausSet(ops, acts_on=(1,), sub_complete=True)
        l_op = random_hermitian(2, 30)
        a = ConcavityInstance(l_op, k, [random_positive(2, 31, j) for j in range(2)])
        b = ConcavityInstance(l_op, k, [random_positive(2, 32, j) for j in range(2)])
        assert check_concave_map(a, b).slack >= -1e-9

    def test_rejects_indefinite_argument(self):
        k = KrausSet([np.eye(2)], acts_on=(1,))
        with pytest.raises(ValueError):
            ConcavityInstance(np.zeros((2, 2)), k, [np.diag([1.0, -0.2])])


class TestGibbs:
    def test_gibbs_state_saturates(self):
        h = random_hermitian(4, 33)
        eh = matrix_exp(h)
        rho = DensityMatrix(eh / np.trace(eh).real, (4,), trace_tol=1e-8)
        r = check_gibbs_variational(rho, h)
        assert abs(r.slack) < 1e-9

    def test_zero_hamiltonian(self):
        rho = random_density((4,), 4, 34)
        r = check_gibbs_variational(rho, np.zeros((4, 4)))
        assert r.lhs == pytest.approx(von_neumann(rho), abs=1e-12)
        assert r.rhs == pytest.approx(math.log(4), abs=1e-12)

    def test_random(self):
        rho = random_density((2, 3), 6, 35)
        h = random_hermitian(6, 36)
        assert check_gibbs_variational(rho, h).passed


class TestCptMonotonicity:
    def test_trivial_first_factor_is_relabeling(self):
        rho = random_density((1, 2, 3), 6, 37)
        r = check_cpt_monotonicity(rho, KrausSet([np.eye(2)], acts_on=(1, 2)))
        assert abs(r.slack) < 1e-9

    def test_product_state_both_sides_vanish(self):
        rho12 = random_density((2, 2), 4, 38)
        rho3 = random_density((2,), 2, 39)
        rho = DensityMatrix(kron(rho12.mat, rho3.mat), (2, 2, 2), trace_tol=1e-8)
        k = random_kraus(4, 2, 40, acts_on=(1, 2))
        r = check_cpt_monotonicity(rho, k)
        assert abs(r.lhs) < 1e-9 and abs(r.rhs) < 1e-9 and abs(r.slack) < 1e-9

    def test_random_with_identity_oracle(self):
        rho = random_density((2, 2, 2), 8, 41)
        k = random_kraus(4, 3, 42, acts_on=(1, 2))
        r = check_cpt_monotonicity(rho, k)
        assert r.passed
        assert r.meta["identity_residual"] <= 1e-8
        # left side is the mutual information between (1,2) and 3
        s12 = von_neumann(partial_trace(rho, {1, 2}))
        s3 = von_neumann(partial_trace(rho, {3}))
        assert r.lhs == pytest.approx(s12 + s3 - von_neumann(rho), abs=1e-9)


class TestImprovedSubadd:
    def test_trivial_povm(self):
        rho = random_density((2, 3), 6, 43)
        left, right = check_improved_subadd(rho, Povm([np.eye(2)]))
        assert abs(right.slack) < 1e-9
        s1 = von_neumann(partial_trace(rho, {1}))
        s2 = von_neumann(partial_trace(rho, {2}))
        assert left.rhs == pytest.approx(s1 + s2, abs=1e-9)

    def test_product_state(self):
        rho = product_state((44, 45), (2, 3))
        p = random_povm(2, 3, 46)
        left, right = check_improved_subadd(rho, p)
        assert abs(left.slack) < 1e-9
        assert abs(right.slack) < 1e-9

    def test_random(self):
        rho = random_density((2, 3), 6, 47)
        p = random_povm(2, 4, 48)
        left, right = check_improved_subadd(rho, p)
        assert left.passed and right.passed


class TestCounterexample:
    @pytest.mark.parametrize("d", [2, 3, 4, 5])
    def test_gap_is_ln_d(self, d):
        lhs, rhs = counterexample_two_sided(d)
        assert lhs == pytest.approx(math.log(d), abs=1e-10)
        assert abs(rhs) < 1e-12
        assert lhs - rhs == pytest.approx(math.log(d), abs=1e-10)

    def test_rejects_small_d(self):
        with pytest.raises(ValueError):
            counterexample_two_sided(1)


class TestClassicalMutualInfo:
    def test_product_state(self):
        rho = product_state((49, 50), (2, 2))
        r = check_classical_mutual_info(rho, random_povm(2, 2, 51), random_povm(2, 3, 52))
        assert abs(r.lhs) < 1e-9 and abs(r.rhs) < 1e-9

    def test_bell_with_basis_projectors(self):
        p = Povm(basis_projectors(2))
        q = Povm(basis_projectors(2))
        r = check_classical_mutual_info(bell_state(), p, q)
        assert r.lhs == pytest.approx(2 * math.log(2), abs=1e-10)
        assert r.rhs == pytest.approx(math.log(2), abs=1e-10)
        assert r.passed

    def test_random(self):
        rho = random_density((2, 3), 6, 53)
        r = check_classical_mutual_info(rho, random_povm(2, 3, 54), random_povm(3, 2, 55))
        assert r.passed
        assert r.meta["marginal_residual"] <= 1e-10


class TestCqChain:
    def test_trivial_povms(self):
        rho = random_density((2, 3), 6, 56)
        first, second = check_cq_chain(rho, Povm([np.eye(2)]), Povm([np.eye(3)]))
        assert first.slack == pytest.approx(mutual_information(rho), abs=1e-9)
        assert abs(second.slack) < 1e-9

    def test_classical_diagonal_state(self):
        probs = np.array([0.4, 0.1, 0.2, 0.3])
        rho = DensityMatrix(np.diag(probs), (2, 2))
        p = Povm(basis_projectors(2))
        q = Povm(basis_projectors(2))
        first, second = check_cq_chain(rho, p, q)
        assert abs(first.slack) < 1e-9
        assert abs(second.slack) < 1e-9

    def test_random(self):
        rho = random_density((2, 3), 6, 57)
        first, second = check_cq_chain(rho, random_povm(2, 2, 58), random_povm(3, 3, 59))
        assert first.passed and second.passed


class TestCqq:
    def test_trivial_povm_reduces_to_ssa(self):
        rho = random_density((2, 2, 2), 8, 60)
        base = check_ssa(rho)
        r = check_cqq(rho, Povm([np.eye(2)]))
        assert r.lhs == pytest.approx(base.lhs, abs=1e-10)
        assert r.rhs == pytest.approx(base.rhs, abs=1e-10)

    def test_agrees_with_sqrt_kraus(self):
        rho = random_density((2, 2, 2), 8, 61)
        p = random_povm(2, 3, 62)
        a = check_cqq(rho, p)
        b = check_stronger_ssa(rho, povm_to_kraus(p, acts_on=(1,)))
        assert a.lhs == pytest.approx(b.lhs, abs=1e-10)
        assert a.rhs == pytest.approx(b.rhs, abs=1e-10)

    def test_random(self):
        rho = random_density((2, 3, 2), 12, 63)
        assert check_cqq(rho, random_povm(2, 4, 64)).passed


class TestConvexityClMinusQ:
    def test_equal_arguments(self):
        a = random_density((2, 2), 4, 65)
        p = random_povm(2, 2, 66)
        assert abs(check_convexity_cl_minus_q(a, a, p).slack) < 1e-10

    def test_endpoints(self):
        a = random_density((2, 2), 4, 67)
        b = random_density((2, 2), 2, 68)
        p = random_povm(2, 3, 69)
        assert abs(check_convexity_cl_minus_q(a, b, p, lambdas=(0.0, 1.0)).slack) < 1e-10

    def test_random_midpoint(self):
        a = random_density((2, 3), 6, 70)
        b = random_density((2, 3), 3, 71)
        p = random_povm(2, 2, 72)
        assert check_convexity_cl_minus_q(a, b, p, lambdas=(0.5,)).slack >= -1e-9


class TestHolevo:
    def test_identical_states(self):
        rho = random_density((3,), 3, 73)
        q = random_povm(3, 3, 74)
        r = check_holevo([0.3, 0.7], [rho, rho], q)
        assert abs(r.lhs) < 1e-9 and abs(r.rhs) < 1e-9

    def test_orthogonal_pure_states(self):
        states = [DensityMatrix(pmat, (3,)) for pmat in basis_projectors(3)]
        q = Povm(basis_projectors(3))
        weights = [0.5, 0.25, 0.25]
        r = check_holevo(weights, states, q)
        assert r.lhs == pytest.approx(shannon(weights), abs=1e-10)
        assert r.rhs == pytest.approx(shannon(weights), abs=1e-10)

    def test_random(self):
        states = [random_density((4,), 4, 75, substream=j) for j in range(3)]
        q = random_povm(4, 3, 76)
        assert check_holevo([0.2, 0.5, 0.3], states, q).passed

    def test_rejects_bad_weights(self):
        rho = random_density((2,), 2, 77)
        with pytest.raises(ValueError):
            check_holevo([0.4, 0.4], [rho, rho], random_povm(2, 2, 78))


class TestReportInvariants:
    def test_pass_recomputable(self):
        rho = random_density((2, 2, 2), 8, 79)
        k = random_kraus(4, 2, 80, acts_on=(1, 2))
        for r in (check_ssa(rho), check_stronger_ssa(rho, k), check_cpt_monotonicity(rho, k)):
            margin = (r.rhs - r.lhs) if r.relation == "<=" else (r.lhs - r.rhs)
            assert r.slack == pytest.approx(margin, abs=0.0)
            assert r.passed == (r.slack >= -r.tol)

    def test_json_schema(self):
        r = check_ssa(random_density((2, 2, 2), 8, 81))
        obj = r.to_json_dict()
        assert list(obj) == ["name", "seed", "dims", "lhs", "rhs", "slack", "tol", "pass", "status", "meta"]
        assert obj["status"] == "ok"
        assert obj["meta"]["relation"] == "<="
