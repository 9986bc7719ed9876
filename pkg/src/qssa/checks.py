"""Inequality checkers for entropies of measured states.

The central statement verified here refines strong subadditivity: measuring
factors {1,2} (or {1}) of a tripartite state with a complete Kraus family
splits the conditional entropy S[rho123] - S[rho12] into a weighted average
over outcomes, and that average still dominates it. The remaining checks
cover the chain of consequences: the sandwich between the refined bound and
plain SSA, the joint concavity of the trace-exponential map behind it, the
Gibbs variational principle, monotonicity of relative entropy under the
block-diagonal measurement channel, and the classical/quantum entropy
comparisons down to the Holevo bound.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np

from .entropy import (
    classical_quantum_entropy,
    entropy_from_eigs,
    mutual_information,
    relative_entropy,
    shannon,
    von_neumann,
    weighted_entropy_sum,
)
from .linalg import (
    DensityMatrix,
    hermitian_eig,
    hermitize,
    kron,
    matrix_exp,
    matrix_log,
    partial_trace,
)
from .measurement import (
    KrausSet,
    MeasurementEnsemble,
    Povm,
    cpt_phi,
    measurement_ensemble,
    povm_conditionals,
    povm_joint_distribution,
    povm_weights,
)
from .report import InequalityReport, make_report, skipped_report

DEFAULT_LAMBDAS = (0.25, 0.5, 0.75)


class ConcavityInstance:
    """Arguments (L, {K_a}, {A_a}) of the trace-exponential concavity check.

    The Kraus family may be sub-complete (sum K†K <= I); the A_a must be
    positive definite so their logarithms are well conditioned.
    """

    __slots__ = ("l_op", "kraus", "a_ops")

    def __init__(self, l_op: np.ndarray, kraus: KrausSet, a_ops: Sequence[np.ndarray]):
        l_op, _ = hermitize(l_op)
        a_ops = tuple(np.asarray(a, dtype=complex) for a in a_ops)
        if len(a_ops) != len(kraus.ops):
            raise ValueError(f"{len(a_ops)} positive operators for {len(kraus.ops)} Kraus operators")
        d = kraus.dim
        if l_op.shape != (d, d):
            raise ValueError(f"L shape {l_op.shape} does not match Kraus dim {d}")
        for a in a_ops:
            if a.shape != (d, d):
                raise ValueError(f"operator shape {a.shape} does not match Kraus dim {d}")
            w = np.linalg.eigvalsh((a + a.conj().T) / 2)
            if w[0] <= 0:
                raise ValueError(f"argument not positive definite: min eigenvalue {w[0]:.3e}")
        self.l_op = l_op
        self.kraus = kraus
        self.a_ops = a_ops


def trace_exp_map(inst: ConcavityInstance, a_ops: Sequence[np.ndarray] | None = None) -> float:
    """Tr exp(L + sum_a K_a† (ln A_a) K_a)."""
    a_ops = inst.a_ops if a_ops is None else a_ops
    h = inst.l_op.copy()
    for k, a in zip(inst.kraus.ops, a_ops):
        h = h + k.conj().T @ matrix_log(a, clamp=False) @ k
    return float(np.trace(matrix_exp(h)).real)


def _ensemble_bound(ens: MeasurementEnsemble) -> float:
    """sum_a n_a (S[rho23_a] - S[rho2_a]) over retained outcomes."""
    return sum(n * (von_neumann(r23) - von_neumann(r2)) for n, r23, r2 in ens.entries)


def check_ssa(rho123: DensityMatrix, tol: float | None = None) -> InequalityReport:
    """Strong subadditivity: S123 - S12 <= S23 - S2."""
    if len(rho123.dims) != 3:
        raise ValueError(f"need a 3-factor state, got dims {rho123.dims}")
    lhs = von_neumann(rho123) - von_neumann(partial_trace(rho123, {1, 2}))
    rhs = von_neumann(partial_trace(rho123, {2, 3})) - von_neumann(partial_trace(rho123, {2}))
    return make_report("ssa", lhs, rhs, tol=tol, dims=rho123.dims.dims)


def check_stronger_ssa(rho123: DensityMatrix, k: KrausSet, tol: float | None = None) -> InequalityReport:
    """Measured refinement: S123 - S12 <= sum_a n_a (S[rho23_a] - S[rho2_a])."""
    ens = measurement_ensemble(rho123, k)
    lhs = von_neumann(rho123) - von_neumann(partial_trace(rho123, {1, 2}))
    rhs = _ensemble_bound(ens)
    return make_report(
        "stronger_ssa", lhs, rhs, tol=tol, dims=rho123.dims.dims,
        kraus_count=len(k), acts_on=list(k.acts_on),
        skipped_terms=ens.skipped, skipped_mass=ens.skipped_mass,
    )


def check_sandwich(rho123: DensityMatrix, k: KrausSet, tol: float | None = None) -> tuple[InequalityReport, InequalityReport]:
    """Both links of S123 - S12 <= sum_a n_a (S23_a - S2_a) <= S23 - S2.

    The right link needs the Kraus family to act on factor 1 only, so that
    the weighted conditionals average back to rho23 and concavity of the
    conditional entropy applies.
    """
    if k.acts_on != (1,):
        raise ValueError(f"sandwich requires a Kraus set acting on factor 1 only, got {k.acts_on}")
    ens = measurement_ensemble(rho123, k)
    middle = _ensemble_bound(ens)
    lhs = von_neumann(rho123) - von_neumann(partial_trace(rho123, {1, 2}))
    rhs = von_neumann(partial_trace(rho123, {2, 3})) - von_neumann(partial_trace(rho123, {2}))
    left = make_report("sandwich_left", lhs, middle, tol=tol, dims=rho123.dims.dims,
                       kraus_count=len(k))
    right = make_report("sandwich_right", middle, rhs, tol=tol, dims=rho123.dims.dims,
                        kraus_count=len(k))
    return left, right


def check_concave_map(
    inst_a: ConcavityInstance,
    inst_b: ConcavityInstance,
    lambdas: Iterable[float] = DEFAULT_LAMBDAS,
    tol: float | None = None,
) -> InequalityReport:
    """Joint concavity of (A_1,...,A_M) -> Tr exp(L + sum K†(ln A)K).

    Evaluates the map at convex combinations of the two argument tuples and
    reports the minimum concavity margin over the mixing weights.
    """
    if len(inst_a.a_ops) != len(inst_b.a_ops):
        raise ValueError(f"argument tuples differ in length: {len(inst_a.a_ops)} vs {len(inst_b.a_ops)}")
    if inst_a.kraus is not inst_b.kraus and not all(
        np.array_equal(x, y) for x, y in zip(inst_a.kraus.ops, inst_b.kraus.ops)
    ):
        raise ValueError("instances must share the Kraus family")
    if not np.array_equal(inst_a.l_op, inst_b.l_op):
        raise ValueError("instances must share the fixed Hermitian term")
    fa = trace_exp_map(inst_a)
    fb = trace_exp_map(inst_b)
    worst = None
    for lam in lambdas:
        mixed = [lam * a + (1 - lam) * b for a, b in zip(inst_a.a_ops, inst_b.a_ops)]
        fmix = trace_exp_map(inst_a, mixed)
        combo = lam * fa + (1 - lam) * fb
        if worst is None or fmix - combo < worst[0]:
            worst = (fmix - combo, lam, combo, fmix)
    _, lam, combo, fmix = worst
    return make_report(
        "concave_map", combo, fmix, tol=tol, dims=(inst_a.kraus.dim,),
        lambda_at_min=lam, terms=len(inst_a.a_ops), f_a=fa, f_b=fb,
    )


def check_gibbs_variational(rho: DensityMatrix, h: np.ndarray, tol: float | None = None) -> InequalityReport:
    """S[rho] + Tr(rho H) <= ln Tr e^H, saturated by the Gibbs state of H."""
    h, h_asym = hermitize(h)
    if h.shape != rho.mat.shape:
        raise ValueError(f"dimension mismatch: state {rho.mat.shape} vs H {h.shape}")
    lhs = von_neumann(rho) + float(np.trace(rho.mat @ h).real)
    w, _ = hermitian_eig(h)
    # log-sum-exp for a stable ln Tr e^H
    top = w[-1]
    rhs = float(top + np.log(np.sum(np.exp(w - top))))
    return make_report("gibbs_variational", lhs, rhs, tol=tol, dims=rho.dims.dims,
                       h_asymmetry=h_asym)


def check_cpt_monotonicity(rho123: DensityMatrix, k: KrausSet, tol: float | None = None) -> InequalityReport:
    """Relative entropy contracts under the block-diagonal measurement channel.

    Checks H(Phi(rho123), Phi(rho12 x rho3)) <= H(rho123, rho12 x rho3) and
    records, in the metadata, the residual of the identity expressing the
    contracted side through the ensemble entropies
    sum_a n_a (S[rho2_a] - S[rho23_a] + S[rho3]).
    """
    if len(rho123.dims) != 3:
        raise ValueError(f"need a 3-factor state, got dims {rho123.dims}")
    d = rho123.dims.dims
    rho12 = partial_trace(rho123, {1, 2})
    rho3 = partial_trace(rho123, {3})
    product = DensityMatrix(kron(rho12.mat, rho3.mat), d, trace_tol=1e-8, psd_tol=1e-9)
    big = relative_entropy(rho123, product)
    phi_rho = cpt_phi(rho123, k)
    phi_prod = cpt_phi(product, k)
    small = relative_entropy(phi_rho, phi_prod)
    if not (math.isfinite(big) and math.isfinite(small)):
        return skipped_report("cpt_monotonicity", "support", seed=None, dims=d,
                              lhs_finite=math.isfinite(small), rhs_finite=math.isfinite(big))
    ens = measurement_ensemble(rho123, k)
    s3 = von_neumann(rho3)
    identity_value = sum(n * (von_neumann(r2) - von_neumann(r23) + s3) for n, r23, r2 in ens.entries)
    return make_report(
        "cpt_monotonicity", big, small, relation=">=", tol=tol, dims=d,
        kraus_count=len(k), identity_residual=abs(small - identity_value),
    )


def improved_subadd_middle(rho12: DensityMatrix, p: Povm) -> tuple[float, np.ndarray]:
    """S[rho1] + sum_a n_a S[rho2_a] and the outcome weights."""
    s1 = von_neumann(partial_trace(rho12, {1}))
    weights = []
    cond_entropy = 0.0
    for b in povm_conditionals(rho12, p, factor=1):
        eigs = np.linalg.eigvalsh((b + b.conj().T) / 2)
        n = float(eigs.sum())
        weights.append(n)
        # -Tr B ln B = n S[B/n] - n ln n, so subtracting the weight term
        # recovers the weighted conditional entropy n S[rho2_a].
        cond_entropy += entropy_from_eigs(eigs) + (n * np.log(n) if n > 1e-15 else 0.0)
    return s1 + cond_entropy, np.array(weights)


def check_improved_subadd(rho12: DensityMatrix, p: Povm, tol: float | None = None) -> tuple[InequalityReport, InequalityReport]:
    """S12 <= S1 + sum_a n_a S[rho2_a] <= S1 + S2 for a POVM on factor 1."""
    if len(rho12.dims) != 2:
        raise ValueError(f"need a 2-factor state, got dims {rho12.dims}")
    s12 = von_neumann(rho12)
    s1 = von_neumann(partial_trace(rho12, {1}))
    s2 = von_neumann(partial_trace(rho12, {2}))
    middle, _ = improved_subadd_middle(rho12, p)
    left = make_report("improved_subadd_left", s12, middle, tol=tol, dims=rho12.dims.dims,
                       povm_count=len(p))
    right = make_report("improved_subadd_right", middle, s1 + s2, tol=tol, dims=rho12.dims.dims,
                        povm_count=len(p))
    return left, right


def counterexample_two_sided(d: int) -> tuple[float, float]:
    """Uniformly correlated basis pairs defeat the two-sided split bound.

    For rho12 = (1/d) sum_a |aa><aa| and basis projectors on both factors,
    S[rho12] = ln d while every conditional state is pure, so splitting
    both factors yields zero on the right: ln d <= 0 fails for d >= 2.
    """
    if d < 2:
        raise ValueError(f"need d >= 2, got {d}")
    eye = np.eye(d, dtype=complex)
    mat = np.zeros((d * d, d * d), dtype=complex)
    for a in range(d):
        mat[a * d + a, a * d + a] = 1.0 / d
    rho12 = DensityMatrix(mat, (d, d), trace_tol=1e-12, psd_tol=1e-12)
    lhs = von_neumann(rho12)
    projectors = Povm([np.outer(eye[:, a], eye[:, a].conj()) for a in range(d)], tol=1e-12)
    rhs = 0.0
    for factor in (1, 2):
        for b in povm_conditionals(rho12, projectors, factor=factor):
            eigs = np.linalg.eigvalsh((b + b.conj().T) / 2)
            n = float(eigs.sum())
            if n > 1e-15:
                rhs += n * entropy_from_eigs(eigs / n)
    return lhs, rhs


def check_classical_mutual_info(rho12: DensityMatrix, p: Povm, q: Povm, tol: float | None = None) -> InequalityReport:
    """Quantum mutual information dominates the measured mutual information."""
    r = povm_joint_distribution(rho12, p, q)
    marg_p = r.sum(axis=1)
    marg_q = r.sum(axis=0)
    classical_mi = shannon(marg_p) + shannon(marg_q) - shannon(r.ravel())
    quantum_mi = mutual_information(rho12)
    direct = povm_weights(rho12, p, factor=1)
    marginal_residual = float(np.abs(direct - marg_p).max())
    if marginal_residual > 1e-10:
        raise RuntimeError(f"outcome-table marginal disagrees with direct weights by {marginal_residual:.3e}")
    return make_report(
        "classical_mutual_info", quantum_mi, classical_mi, relation=">=", tol=tol,
        dims=rho12.dims.dims, p_count=len(p), q_count=len(q),
        marginal_residual=marginal_residual,
    )


def check_cq_chain(rho12: DensityMatrix, p: Povm, q: Povm, tol: float | None = None) -> tuple[InequalityReport, InequalityReport]:
    """Two links interpolating quantum and fully classical mutual information.

    First: S12 - S1 - S2 <= S_cQ - S_cl[rho1] - S2, where S_cQ measures
    factor 1 and keeps factor 2 quantum. Second: the same quantity is
    bounded by the fully classical S_cl[rho12] - S_cl[rho1] - S_cl[rho2].
    """
    if len(rho12.dims) != 2:
        raise ValueError(f"need a 2-factor state, got dims {rho12.dims}")
    s12 = von_neumann(rho12)
    s1 = von_neumann(partial_trace(rho12, {1}))
    s2 = von_neumann(partial_trace(rho12, {2}))
    s_cq = classical_quantum_entropy(rho12, p)
    n = povm_weights(rho12, p, factor=1)
    s_cl_1 = weighted_entropy_sum(n)
    r = povm_joint_distribution(rho12, p, q)
    s_cl_12 = weighted_entropy_sum(r.ravel())
    s_cl_2 = weighted_entropy_sum(r.sum(axis=0))
    first = make_report(
        "cq_chain_quantum_to_cq", s12 - s1 - s2, s_cq - s_cl_1 - s2, tol=tol,
        dims=rho12.dims.dims, p_count=len(p),
    )
    second = make_report(
        "cq_chain_cq_to_classical", s_cq - s_cl_1 - s2, s_cl_12 - s_cl_1 - s_cl_2, tol=tol,
        dims=rho12.dims.dims, p_count=len(p), q_count=len(q),
    )
    return first, second


def check_cqq(rho123: DensityMatrix, p: Povm, tol: float | None = None) -> InequalityReport:
    """S123 - S12 <= S_cQQ - S_cQ with factor 1 measured by a POVM.

    S_cQQ keeps factors {2,3} quantum, S_cQ keeps factor 2; both decompose
    through the unnormalized conditionals of the POVM, and the difference
    equals the measured refinement bound for the square-root Kraus family.
    """
    if len(rho123.dims) != 3:
        raise ValueError(f"need a 3-factor state, got dims {rho123.dims}")
    s123 = von_neumann(rho123)
    s12 = von_neumann(partial_trace(rho123, {1, 2}))
    s_cqq = 0.0
    s_cq = 0.0
    d = rho123.dims.dims
    for b in povm_conditionals(rho123, p, factor=1):
        s_cqq += entropy_from_eigs(np.linalg.eigvalsh((b + b.conj().T) / 2))
        b2 = np.trace(b.reshape(d[1], d[2], d[1], d[2]), axis1=1, axis2=3)
        s_cq += entropy_from_eigs(np.linalg.eigvalsh((b2 + b2.conj().T) / 2))
    return make_report(
        "cqq", s123 - s12, s_cqq - s_cq, tol=tol, dims=d, povm_count=len(p),
    )


def check_convexity_cl_minus_q(
    a12: DensityMatrix,
    b12: DensityMatrix,
    p: Povm,
    lambdas: Iterable[float] = DEFAULT_LAMBDAS,
    tol: float | None = None,
) -> InequalityReport:
    """Convexity of rho -> S_cQ[rho] - S[rho] along the segment [a12, b12]."""
    if a12.dims != b12.dims:
        raise ValueError(f"dimension mismatch: {a12.dims} vs {b12.dims}")

    def g(rho: DensityMatrix) -> float:
        return classical_quantum_entropy(rho, p) - von_neumann(rho)

    ga = g(a12)
    gb = g(b12)
    worst = None
    for lam in lambdas:
        mix = DensityMatrix(lam * a12.mat + (1 - lam) * b12.mat, a12.dims,
                            trace_tol=1e-9, psd_tol=1e-9)
        margin = lam * ga + (1 - lam) * gb - g(mix)
        if worst is None or margin < worst[0]:
            worst = (margin, lam, g(mix), lam * ga + (1 - lam) * gb)
    _, lam, gmix, combo = worst
    return make_report(
        "convexity_cl_minus_q", gmix, combo, tol=tol, dims=a12.dims.dims,
        lambda_at_min=lam, g_a=ga, g_b=gb,
    )


def check_holevo(weights, states: Sequence[DensityMatrix], q: Povm, tol: float | None = None) -> InequalityReport:
    """Accessible information of an ensemble is at most its Holevo quantity."""
    weights = np.asarray(weights, dtype=float)
    if abs(weights.sum() - 1.0) > 1e-9:
        raise ValueError(f"ensemble weights sum to {weights.sum()!r}")
    if len(weights) != len(states):
        raise ValueError(f"{len(weights)} weights for {len(states)} states")
    dims = states[0].dims
    for s in states:
        if s.dims != dims:
            raise ValueError("ensemble states must share dimensions")
    if q.dim != dims.total:
        raise ValueError(f"POVM dim {q.dim} does not match state dim {dims.total}")
    r = np.array([[w * float(np.trace(el @ s.mat).real) for el in q.elements]
                  for w, s in zip(weights, states)])
    accessible = shannon(r.sum(axis=1)) + shannon(r.sum(axis=0)) - shannon(r.ravel())
    avg = DensityMatrix(sum(w * s.mat for w, s in zip(weights, states)), dims,
                        trace_tol=1e-8, psd_tol=1e-9)
    chi = von_neumann(avg) - sum(w * von_neumann(s) for w, s in zip(weights, states))
    return make_report(
        "holevo", accessible, chi, tol=tol, dims=dims.dims,
        ensemble_size=len(states), povm_count=len(q),
    )
