"""Deterministic, seeded generation of random states, unitaries and measurements.

All generators are stateless: the returned object is a pure function of the
parameters, the seed and the substream key. The PRNG is numpy's PCG64;
stream splitting uses `numpy.random.SeedSequence(seed, spawn_key=key)`, so
disjoint substream keys give independent streams that are safe to draw in
parallel. Complex Gaussian entries are (x + iy)/sqrt(2) with x, y standard
normal (numpy ziggurat `standard_normal`).
"""

from __future__ import annotations

import numpy as np

from .linalg import DensityMatrix, as_dims, hermitian_eig
from .measurement import KrausSet, Povm

RNG_NAME = "numpy-PCG64"

Seed = int


def rng_for(seed: Seed, substream=()) -> np.random.Generator:
    """Generator for a (seed, substream) pair; substream is an int or tuple."""
    if isinstance(substream, (int, np.integer)):
        substream = (int(substream),)
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(s) for s in substream))
    return np.random.Generator(np.random.PCG64(ss))


def complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def random_density(dims, rank: int, seed: Seed, substream=0) -> DensityMatrix:
    """Random state G G† / Tr(G G†) with G a (total x rank) complex Gaussian."""
    dims = as_dims(dims)
    if not 1 <= rank <= dims.total:
        raise ValueError(f"rank {rank} out of range 1..{dims.total}")
    g = complex_gaussian(rng_for(seed, substream), (dims.total, rank))
    m = g @ g.conj().T
    m /= np.trace(m).real
    return DensityMatrix(m, dims, trace_tol=1e-12, psd_tol=1e-12)


def random_unitary(dim: int, seed: Seed, substream=0) -> np.ndarray:
    """Haar-distributed unitary: QR of a complex Gaussian with phase-fixed R."""
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    g = complex_gaussian(rng_for(seed, substream), (dim, dim))
    q, r = np.linalg.qr(g)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_kraus(dim: int, count: int, seed: Seed, substream=0, acts_on=(1,)) -> KrausSet:
    """Complete Kraus family sliced from a Haar isometry.

    The first `dim` columns of a Haar unitary on dim*count dimensions form
    an isometry V with V†V = I; its `count` row blocks of `dim` rows are the
    operators, so completeness holds to machine precision.
    """
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    u = random_unitary(dim * count, seed, substream)
    iso = u[:, :dim]
    ops = [iso[a * dim : (a + 1) * dim, :] for a in range(count)]
    return KrausSet(ops, acts_on=acts_on, tol=1e-12)


def random_povm(dim: int, count: int, seed: Seed, substream=0) -> Povm:
    """Random partition of unity P_i = T^{-1/2} A_i T^{-1/2}, A_i Gaussian PSD."""
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    if isinstance(substream, (int, np.integer)):
        substream = (int(substream),)
    for attempt in range(5):
        rng = rng_for(seed, tuple(substream) + (attempt,))
        mats = []
        for _ in range(count):
            g = complex_gaussian(rng, (dim, dim))
            mats.append(g @ g.conj().T)
        total = sum(mats)
        w, v = hermitian_eig(total)
        if w[0] > 1e-10 * w[-1]:
            inv_sqrt = (v / np.sqrt(w)) @ v.conj().T
            return Povm([inv_sqrt @ a @ inv_sqrt for a in mats], tol=1e-11)
    raise RuntimeError(f"random_povm: singular normalizer after 5 attempts (dim={dim}, count={count})")


def random_cq_state(dims, seed: Seed, substream=0) -> DensityMatrix:
    """State that is classical (diagonal) on factors 1 and 2.

    Returns sum_ij p(i,j) |i><i| x |j><j| x sigma_ij with a random
    probability table p and random full-rank states sigma_ij on factor 3.
    """
    dims = as_dims(dims)
    if len(dims) != 3:
        raise ValueError(f"need exactly 3 factors, got {dims}")
    d1, d2, d3 = dims.dims
    rng = rng_for(seed, substream)
    p = rng.dirichlet(np.ones(d1 * d2)).reshape(d1, d2)
    mat = np.zeros((dims.total, dims.total), dtype=complex)
    for i in range(d1):
        for j in range(d2):
            g = complex_gaussian(rng, (d3, d3))
            sigma = g @ g.conj().T
            sigma /= np.trace(sigma).real
            base = (i * d2 + j) * d3
            mat[base : base + d3, base : base + d3] = p[i, j] * sigma
    return DensityMatrix(mat, dims, trace_tol=1e-12, psd_tol=1e-12)


def random_hermitian(dim: int, seed: Seed, substream=0, scale: float = 1.0) -> np.ndarray:
    g = complex_gaussian(rng_for(seed, substream), (dim, dim))
    return scale * (g + g.conj().T) / 2


def random_positive(dim: int, seed: Seed, substream=0, eig_range=(0.1, 10.0)) -> np.ndarray:
    """Random positive-definite matrix with eigenvalues uniform in `eig_range`."""
    if isinstance(substream, (int, np.integer)):
        substream = (int(substream),)
    u = random_unitary(dim, seed, tuple(substream) + (0,))
    w = rng_for(seed, tuple(substream) + (1,)).uniform(eig_range[0], eig_range[1], size=dim)
    return (u * w) @ u.conj().T


def random_pure_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unit vector, drawn from an existing generator."""
    v = complex_gaussian(rng, dim)
    return v / np.linalg.norm(v)


def basis_projectors(dim: int) -> list[np.ndarray]:
    """Rank-1 projectors onto the computational basis."""
    eye = np.eye(dim, dtype=complex)
    return [np.outer(eye[:, i], eye[:, i].conj()) for i in range(dim)]


def product_basis_kraus(d1: int, d2: int, tol: float = 1e-12) -> KrausSet:
    """Rank-1 product-basis projectors |ij><ij| as a Kraus set on factors {1,2}."""
    ops = []
    eye = np.eye(d1 * d2, dtype=complex)
    for k in range(d1 * d2):
        ops.append(np.outer(eye[:, k], eye[:, k].conj()))
    return KrausSet(ops, acts_on=(1, 2), tol=tol)
