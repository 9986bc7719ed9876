"""Dense complex linear algebra on tensor-product spaces.

States live on a product of finite-dimensional factors. Factors are labeled
1..n throughout the public API (the same labels appear in the JSON wire
formats). All operations are pure functions of immutable inputs; arrays
held by :class:`DensityMatrix` are frozen after construction.
"""

from __future__ import annotations

from typing import Callable, Iterable, Sequence

import numpy as np

# Relative eigenvalue floor used when taking matrix logarithms and when
# dropping near-zero eigenvalues from entropy sums (0 ln 0 = 0 convention).
CLAMP_REL = 1e-12

# Operations expecting Hermitian input symmetrize first; beyond this
# max-abs asymmetry the input is considered malformed.
ASYM_TOL = 1e-8


class HilbertDims:
    """Ordered factor dimensions (d1, d2, ...) of a tensor-product space."""

    __slots__ = ("dims",)

    def __init__(self, dims: Iterable[int]):
        dims = tuple(int(d) for d in dims)
        if len(dims) < 1:
            raise ValueError("need at least one factor")
        if any(d < 1 for d in dims):
            raise ValueError(f"factor dimensions must be >= 1, got {dims}")
        self.dims = dims

    @property
    def total(self) -> int:
        return int(np.prod(self.dims))

    def __len__(self) -> int:
        return len(self.dims)

    def __iter__(self):
        return iter(self.dims)

    def __getitem__(self, i: int) -> int:
        return self.dims[i]

    def __eq__(self, other) -> bool:
        return isinstance(other, HilbertDims) and self.dims == other.dims

    def __hash__(self) -> int:
        return hash(self.dims)

    def __repr__(self) -> str:
        return f"HilbertDims{self.dims}"


def as_dims(dims) -> HilbertDims:
    return dims if isinstance(dims, HilbertDims) else HilbertDims(dims)


def hermitize(m: np.ndarray, asym_tol: float = ASYM_TOL) -> tuple[np.ndarray, float]:
    """Return ((M + M†)/2, max-abs asymmetry); error beyond `asym_tol`."""
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    asym = float(np.abs(m - m.conj().T).max()) if m.size else 0.0
    if asym > asym_tol:
        raise ValueError(f"matrix asymmetry {asym:.3e} exceeds tolerance {asym_tol:.3e}")
    return (m + m.conj().T) / 2, asym


class DensityMatrix:
    """A PSD, unit-trace complex matrix tagged with tensor factor dimensions.

    `unnormalized=True` relaxes the unit-trace requirement to any positive
    trace (the inequalities checked downstream are homogeneous of order one,
    so they remain meaningful for positive trace-class operators).
    """

    __slots__ = ("mat", "dims", "trace_tol", "psd_tol", "unnormalized", "asymmetry")

    def __init__(
        self,
        mat,
        dims,
        *,
        trace_tol: float = 1e-9,
        psd_tol: float = 1e-9,
        unnormalized: bool = False,
    ):
        dims = as_dims(dims)
        mat = np.asarray(mat, dtype=complex)
        if mat.shape != (dims.total, dims.total):
            raise ValueError(f"matrix shape {mat.shape} does not match dims {dims} (total {dims.total})")
        herm, asym = hermitize(mat, asym_tol=trace_tol)
        if asym > trace_tol:
            raise ValueError(f"asymmetry {asym:.3e} exceeds trace_tol {trace_tol:.3e}")
        eigs = np.linalg.eigvalsh(herm)
        if eigs[0] < -psd_tol:
            raise ValueError(f"matrix is not PSD: min eigenvalue {eigs[0]:.3e} < -{psd_tol:.3e}")
        tr = float(np.trace(herm).real)
        if unnormalized:
            if tr <= 0:
                raise ValueError(f"unnormalized state must have positive trace, got {tr:.3e}")
        elif abs(tr - 1.0) > trace_tol:
            raise ValueError(f"trace {tr!r} is not 1 within {trace_tol:.3e}")
        herm.flags.writeable = False
        self.mat = herm
        self.dims = dims
        self.trace_tol = trace_tol
        self.psd_tol = psd_tol
        self.unnormalized = unnormalized
        self.asymmetry = asym

    @property
    def dim(self) -> int:
        return self.dims.total

    def trace(self) -> float:
        return float(np.trace(self.mat).real)

    def reduced(self, keep: Iterable[int]) -> "DensityMatrix":
        return partial_trace(self, keep)

    def __repr__(self) -> str:
        return f"DensityMatrix(dims={self.dims.dims}, trace={self.trace():.6f})"


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product; (A ⊗ B)[ip+k, jq+l] = A[i,j] B[k,l]."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def _keep_to_zero_based(keep: Iterable[int], n: int) -> tuple[int, ...]:
    keep = sorted(set(int(k) for k in keep))
    if not keep:
        raise ValueError("keep set must be nonempty")
    if keep[0] < 1 or keep[-1] > n:
        raise ValueError(f"factor indices {keep} out of range 1..{n}")
    return tuple(k - 1 for k in keep)


def ptrace_mat(mat: np.ndarray, dims: Sequence[int], keep0: Sequence[int]) -> np.ndarray:
    """Partial trace of a raw square matrix over the factors not in `keep0`.

    `keep0` holds zero-based factor indices; kept factors retain their
    original relative order.
    """
    dims = list(dims)
    n = len(dims)
    t = np.asarray(mat, dtype=complex).reshape(dims + dims)
    for ax in sorted(set(range(n)) - set(keep0), reverse=True):
        t = np.trace(t, axis1=ax, axis2=ax + len(dims))
        del dims[ax]
    d = int(np.prod(dims))
    return t.reshape(d, d)


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Reduce a state to the factors in `keep` (1-based labels)."""
    keep0 = _keep_to_zero_based(keep, len(rho.dims))
    sub = ptrace_mat(rho.mat, rho.dims.dims, keep0)
    new_dims = tuple(rho.dims[i] for i in keep0)
    return DensityMatrix(
        sub,
        new_dims,
        trace_tol=rho.trace_tol,
        psd_tol=rho.psd_tol,
        unnormalized=rho.unnormalized,
    )


def hermitian_eig(m: np.ndarray, asym_tol: float = ASYM_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a (nearly) Hermitian matrix.

    Returns eigenvalues ascending and the matrix whose columns are the
    corresponding orthonormal eigenvectors. Input is symmetrized first.
    """
    herm, _ = hermitize(m, asym_tol=asym_tol)
    w, v = np.linalg.eigh(herm)
    return w, v


def clamp_threshold(eigs: np.ndarray) -> float:
    """Eigenvalue floor below which log-type expressions treat values as zero."""
    top = float(eigs.max()) if len(eigs) else 0.0
    return CLAMP_REL * max(1.0, top)


def matrix_fn(m: np.ndarray, f: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Apply a real scalar function to a Hermitian matrix via its spectrum."""
    w, v = hermitian_eig(m)
    return (v * f(w)) @ v.conj().T


def matrix_log(m: np.ndarray, clamp: bool = True) -> np.ndarray:
    """Matrix logarithm of a PSD Hermitian matrix.

    Eigenvalues below the clamp threshold are raised to it when `clamp` is
    set; otherwise such an eigenvalue is an error.
    """
    w, v = hermitian_eig(m)
    eps = clamp_threshold(w)
    if not clamp and w[0] < eps:
        raise ValueError(f"matrix log undefined: eigenvalue {w[0]:.3e} below clamp threshold {eps:.3e}")
    w = np.maximum(w, eps)
    return (v * np.log(w)) @ v.conj().T


def matrix_exp(m: np.ndarray) -> np.ndarray:
    return matrix_fn(m, np.exp)


def sqrtm_psd(m: np.ndarray, psd_tol: float = 1e-9) -> np.ndarray:
    """Principal square root of a PSD Hermitian matrix."""
    w, v = hermitian_eig(m)
    if w[0] < -psd_tol:
        raise ValueError(f"matrix is not PSD: min eigenvalue {w[0]:.3e}")
    return (v * np.sqrt(np.maximum(w, 0.0))) @ v.conj().T


def trace_distance(a: DensityMatrix, b: DensityMatrix) -> float:
    """Half the trace norm of the difference of two states on equal dims."""
    if a.dims != b.dims:
        raise ValueError(f"dimension mismatch: {a.dims} vs {b.dims}")
    w = np.linalg.eigvalsh(a.mat - b.mat)
    return 0.5 * float(np.abs(w).sum())


# --- JSON wire formats -----------------------------------------------------
#
# ComplexMatrix: {"rows": n, "cols": m, "re": [[...]], "im": [[...]]}
# DensityMatrix adds {"dims": [d1, ...]}.


def matrix_to_json(m: np.ndarray) -> dict:
    m = np.asarray(m, dtype=complex)
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "re": m.real.tolist(),
        "im": m.imag.tolist(),
    }


def matrix_from_json(obj: dict) -> np.ndarray:
    m = np.array(obj["re"], dtype=float) + 1j * np.array(obj["im"], dtype=float)
    if m.shape != (obj["rows"], obj["cols"]):
        raise ValueError(f"shape {m.shape} inconsistent with rows/cols {(obj['rows'], obj['cols'])}")
    return m


def density_to_json(rho: DensityMatrix) -> dict:
    out = matrix_to_json(rho.mat)
    out["dims"] = list(rho.dims.dims)
    return out


def density_from_json(obj: dict, **kwargs) -> DensityMatrix:
    return DensityMatrix(matrix_from_json(obj), obj["dims"], **kwargs)
