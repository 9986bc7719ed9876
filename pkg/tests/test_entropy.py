"""Entropy functionals: golden values, identities, and classical bounds."""

import math

import numpy as np
import pytest

from qssa.entropy import (
    classical_entropy,
    classical_quantum_entropy,
    mutual_information,
    relative_entropy,
    shannon,
    von_neumann,
    weighted_entropy_sum,
)
from qssa.linalg import DensityMatrix, kron, partial_trace, trace_distance
from qssa.measurement import Povm, povm_conditionals, povm_weights
from qssa.randgen import basis_projectors, random_density, random_povm, random_unitary


def bell_state():
    psi = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
    return DensityMatrix(np.outer(psi, psi.conj()), (2, 2))


class TestVonNeumann:
    def test_maximally_mixed(self):
        for d in (2, 3, 5):
            rho = DensityMatrix(np.eye(d) / d, (d,))
            assert von_neumann(rho) == pytest.approx(math.log(d), abs=1e-12)

    def test_pure_state(self):
        rho = random_density((2, 3), 1, 4)
        assert abs(von_neumann(rho)) < 1e-10

    def test_direct_scalar_oracle(self):
        p = (0.5, 1 / 3, 1 / 6)
        expected = -sum(x * math.log(x) for x in p)
        rho = DensityMatrix(np.diag(p), (3,))
        assert von_neumann(rho) == pytest.approx(expected, abs=1e-12)
        assert expected == pytest.approx(1.01140, abs=5e-6)


class TestShannon:
    def test_deterministic(self):
        assert shannon([1.0, 0.0, 0.0]) == 0.0

    def test_uniform(self):
        for d in (2, 4, 7):
            assert shannon(np.full(d, 1.0 / d)) == pytest.approx(math.log(d), abs=1e-12)

    def test_matches_diagonal_state(self):
        p = np.array([0.5, 1 / 3, 1 / 6])
        rho = DensityMatrix(np.diag(p), (3,))
        assert shannon(p) == pytest.approx(von_neumann(rho), abs=1e-12)

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            shannon([0.5, 0.6, -0.1])

    def test_rejects_unnormalized(self):
        with pytest.raises(ValueError):
            shannon([0.5, 0.6])


class TestRelativeEntropy:
    def test_self_is_zero(self):
        rho = random_density((2, 2), 4, 6)
        assert abs(relative_entropy(rho, rho)) < 1e-10

    def test_pure_vs_mixed(self):
        for d in (2, 4):
            m = np.zeros((d, d), dtype=complex)
            m[0, 0] = 1.0
            pure = DensityMatrix(m, (d,))
            mixed = DensityMatrix(np.eye(d) / d, (d,))
            assert relative_entropy(pure, mixed) == pytest.approx(math.log(d), abs=1e-10)

    def test_support_violation_is_infinite(self):
        a = np.zeros((2, 2), dtype=complex)
        a[0, 0] = 1.0
        b = np.zeros((2, 2), dtype=complex)
        b[1, 1] = 1.0
        val = relative_entropy(DensityMatrix(a, (2,)), DensityMatrix(b, (2,)))
        assert math.isinf(val)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            relative_entropy(random_density((2,), 2, 1), random_density((3,), 3, 1))

    def test_klein_nonnegative(self):
        for seed in range(10):
            a = random_density((2, 2), 4, seed, substream=50)
            b = random_density((2, 2), 4, seed, substream=51)
            assert relative_entropy(a, b) >= -1e-9


class TestMutualInformation:
    def test_product_state(self):
        a = random_density((2,), 2, 1)
        b = random_density((3,), 3, 2)
        rho = DensityMatrix(kron(a.mat, b.mat), (2, 3))
        assert abs(mutual_information(rho)) < 1e-9

    def test_bell(self):
        assert mutual_information(bell_state()) == pytest.approx(2 * math.log(2), abs=1e-10)

    def test_relative_entropy_identity(self):
        for seed in range(5):
            rho = random_density((2, 3), 6, seed, substream=60)
            r1 = partial_trace(rho, {1})
            r2 = partial_trace(rho, {2})
            prod = DensityMatrix(kron(r1.mat, r2.mat), (2, 3), trace_tol=1e-8)
            assert mutual_information(rho) == pytest.approx(relative_entropy(rho, prod), abs=1e-9)

    def test_wrong_factor_count(self):
        with pytest.raises(ValueError):
            mutual_information(random_density((2, 2, 2), 8, 1))


def classical_entropy_oracle(rho, p, q):
    """Brute-force double sum over materialized P x Q products."""
    total = 0.0
    for pa in p.elements:
        for qb in q.elements:
            r = float(np.trace(kron(pa, qb) @ rho.mat).real)
            if r > 1e-15:
                total -= r * math.log(r)
    return total


class TestClassicalEntropy:
    def test_trivial_partition_is_zero(self):
        rho = random_density((2, 3), 6, 3)
        p = Povm([np.eye(2)])
        q = Povm([np.eye(3)])
        assert classical_entropy(rho, p, q) == 0.0

    def test_matching_basis_on_diagonal_state(self):
        probs = np.array([0.4, 0.1, 0.3, 0.2])
        rho = DensityMatrix(np.diag(probs), (2, 2))
        p = Povm(basis_projectors(2))
        q = Povm(basis_projectors(2))
        assert classical_entropy(rho, p, q) == pytest.approx(von_neumann(rho), abs=1e-12)

    def test_double_sum_oracle(self):
        rho = random_density((2, 3), 6, 8)
        p = random_povm(2, 3, 9)
        q = random_povm(3, 2, 10)
        assert classical_entropy(rho, p, q) == pytest.approx(
            classical_entropy_oracle(rho, p, q), abs=1e-12
        )


class TestClassicalQuantumEntropy:
    def test_trivial_povm(self):
        rho = random_density((2, 3), 6, 11)
        val = classical_quantum_entropy(rho, Povm([np.eye(2)]))
        assert val == pytest.approx(von_neumann(partial_trace(rho, {2})), abs=1e-10)

    def test_fully_classical_case(self):
        probs = np.array([0.35, 0.05, 0.25, 0.35])
        rho = DensityMatrix(np.diag(probs), (2, 2))
        p = Povm(basis_projectors(2))
        q = Povm(basis_projectors(2))
        assert classical_quantum_entropy(rho, p) == pytest.approx(
            classical_entropy(rho, p, q), abs=1e-12
        )

    def test_decomposition_oracle(self):
        rho = random_density((2, 3), 6, 12)
        p = random_povm(2, 3, 13)
        n = povm_weights(rho, p, factor=1)
        total = weighted_entropy_sum(n)
        for w, b in zip(n, povm_conditionals(rho, p, factor=1)):
            cond = DensityMatrix(b / w, (3,), trace_tol=1e-8, psd_tol=1e-9)
            total += w * von_neumann(cond)
        assert classical_quantum_entropy(rho, p) == pytest.approx(total, abs=1e-9)


class TestEntropyProperties:
    @pytest.mark.parametrize("lam", [0.1, 0.3, 0.5, 0.7, 0.9])
    def test_concavity(self, lam):
        for seed in range(5):
            a = random_density((2, 2), 4, seed, substream=70)
            b = random_density((2, 2), 2, seed, substream=71)
            mix = DensityMatrix(lam * a.mat + (1 - lam) * b.mat, (2, 2))
            assert von_neumann(mix) >= lam * von_neumann(a) + (1 - lam) * von_neumann(b) - 1e-9

    def test_klein_equality_at_equal_inputs(self):
        rho = random_density((3,), 3, 14)
        assert relative_entropy(rho, rho) <= 1e-10
        assert trace_distance(rho, rho) <= 1e-7

    def test_triangle_inequality(self):
        for seed in range(10):
            rho = random_density((2, 3), 4, seed, substream=72)
            s1 = von_neumann(partial_trace(rho, {1}))
            s2 = von_neumann(partial_trace(rho, {2}))
            assert abs(s1 - s2) <= von_neumann(rho) + 1e-8

    def test_subadditivity(self):
        for seed in range(10):
            rho = random_density((2, 3), 6, seed, substream=73)
            s1 = von_neumann(partial_trace(rho, {1}))
            s2 = von_neumann(partial_trace(rho, {2}))
            assert von_neumann(rho) <= s1 + s2 + 1e-9

    def test_rank_one_projective_classical_dominates(self):
        # outcome entropy of a rank-1 projective measurement is at least S
        for seed in range(5):
            rho = random_density((3,), 3, seed, substream=74)
            u = random_unitary(3, seed, substream=75)
            p = Povm([np.outer(u[:, i], u[:, i].conj()) for i in range(3)])
            outcome = np.array([float(np.trace(el @ rho.mat).real) for el in p.elements])
            assert shannon(outcome) >= von_neumann(rho) - 1e-9
