"""Dense complex linear algebra substrate.

Everything downstream (representation builders, cocycle solves, commutant
computations) reduces to Kronecker products, rank-revealing nullspaces and
vectorized intertwiner solves over dense complex matrices. Problem sizes stay
in the low thousands, so dense storage and full SVDs are the right tool.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "ToleranceConfig",
    "DEFAULT_TOL",
    "kron",
    "nullspace",
    "numerical_rank",
    "joint_kernel",
    "intertwiner_space",
    "matrix_to_json",
    "matrix_from_json",
]


@dataclass(frozen=True)
class ToleranceConfig:
    """Numeric thresholds shared across the library.

    rank_tol: relative singular-value cutoff; singular values below
        ``rank_tol * s_max`` count as zero. All operators handled here have
        exact 0/±1/unitary entries, so the spectral gap is large and a tight
        default avoids phantom dimensions.
    identity_tol: max-abs deviation allowed when asserting operator
        identities.
    stabilization_delta: truncation-level increment used when a dimension has
        to agree at two truncation levels before being reported.
    """

    rank_tol: float = 1e-9
    identity_tol: float = 1e-10
    stabilization_delta: int = 4

    def __post_init__(self) -> None:
        if not (0.0 < self.rank_tol < 1.0):
            raise ValueError(f"rank_tol must lie in (0, 1), got {self.rank_tol}")
        if not (0.0 < self.identity_tol < 1.0):
            raise ValueError(f"identity_tol must lie in (0, 1), got {self.identity_tol}")
        if self.stabilization_delta < 1:
            raise ValueError("stabilization_delta must be a positive integer")


DEFAULT_TOL = ToleranceConfig()


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with the (A ⊗ B)(x ⊗ y) = Ax ⊗ By convention."""
    return np.kron(np.asarray(a), np.asarray(b))


def _as_complex_matrix(a: np.ndarray) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-d array, got shape {m.shape}")
    return m


def nullspace(
    a: np.ndarray, tol: ToleranceConfig = DEFAULT_TOL, scale: float = 0.0
) -> np.ndarray:
    """Orthonormal basis of the numerical kernel of ``a``.

    Returns an (n, k) array whose columns span {v : a @ v ≈ 0}. The rank
    decision is relative: singular values below ``rank_tol * s_max`` are
    treated as zero, and a zero matrix yields the full identity basis.

    When ``a`` is a difference of unit-scale operators (e.g. U - 1 for a
    unitary U) pass ``scale=1.0``: otherwise a numerically-zero matrix has
    only rounding noise for singular values and the relative cutoff mistakes
    that noise for rank.
    """
    a = _as_complex_matrix(a)
    if a.size == 0:
        raise ValueError("nullspace of an empty matrix is undefined")
    # the full vh is needed to read kernel rows; the left factor is not, and
    # for tall systems the reduced form already carries all of vh
    full = a.shape[0] < a.shape[1]
    _, s, vh = np.linalg.svd(a, full_matrices=full)
    rank = _rank_from_singular_values(s, tol, scale)
    return vh[rank:].conj().T


def numerical_rank(
    a: np.ndarray, tol: ToleranceConfig = DEFAULT_TOL, scale: float = 0.0
) -> int:
    """Rank at the same singular-value cutoff as ``nullspace``."""
    a = _as_complex_matrix(a)
    if a.size == 0:
        return 0
    s = np.linalg.svd(a, compute_uv=False)
    return _rank_from_singular_values(s, tol, scale)


def _rank_from_singular_values(
    s: np.ndarray, tol: ToleranceConfig, scale: float
) -> int:
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > tol.rank_tol * max(float(s[0]), scale)))


def joint_kernel(
    constraints: list[np.ndarray],
    tol: ToleranceConfig = DEFAULT_TOL,
    ambient_dim: int | None = None,
    scale: float = 0.0,
) -> np.ndarray:
    """Orthonormal basis of the intersection of the kernels of ``constraints``.

    All constraint matrices must share a column count. An empty constraint
    list is vacuous and needs ``ambient_dim`` to know which identity to
    return.
    """
    mats = [_as_complex_matrix(c) for c in constraints]
    if not mats:
        if ambient_dim is None:
            raise ValueError("empty constraint list requires ambient_dim")
        return np.eye(ambient_dim, dtype=complex)
    cols = {m.shape[1] for m in mats}
    if len(cols) != 1:
        raise ValueError(f"constraint column counts differ: {sorted(cols)}")
    if ambient_dim is not None and ambient_dim != cols.pop():
        raise ValueError("ambient_dim does not match constraint column count")
    return nullspace(np.vstack(mats), tol, scale)


def intertwiner_space(
    pairs: list[tuple[np.ndarray, np.ndarray]],
    tol: ToleranceConfig = DEFAULT_TOL,
) -> list[np.ndarray]:
    """Basis of {T : A_i T = T B_i for all pairs (A_i, B_i)}.

    Each A_i must be square of one size p and each B_i square of one size q;
    the returned T's are p×q. Uses column-stacking vectorization
    (vec(A T) = (I ⊗ A) vec T, vec(T B) = (Bᵀ ⊗ I) vec T), so witnesses
    round-trip deterministically. An empty list means only T = 0 works.
    """
    if not pairs:
        raise ValueError("need at least one pair of matrices")
    mats = [(_as_complex_matrix(a), _as_complex_matrix(b)) for a, b in pairs]
    p = mats[0][0].shape[0]
    q = mats[0][1].shape[0]
    for a, b in mats:
        if a.shape != (p, p) or b.shape != (q, q):
            raise ValueError(
                f"all A_i must be {p}x{p} and all B_i {q}x{q}; got {a.shape}, {b.shape}"
            )
    blocks = [np.kron(np.eye(q), a) - np.kron(b.T, np.eye(p)) for a, b in mats]
    # anchor the rank cutoff at the operator scale: when every commutator is
    # rounding noise the kernel is the whole space, not empty
    scale = max(float(np.max(np.abs(m))) for a, b in mats for m in (a, b))
    basis = joint_kernel(blocks, tol, scale=scale)
    return [basis[:, j].reshape((p, q), order="F") for j in range(basis.shape[1])]


def matrix_to_json(a: np.ndarray) -> dict:
    """Serialize to the row-major {"rows", "cols", "re", "im"} wire format."""
    a = _as_complex_matrix(a)
    return {
        "rows": a.shape[0],
        "cols": a.shape[1],
        "re": a.real.ravel(order="C").tolist(),
        "im": a.imag.ravel(order="C").tolist(),
    }


def matrix_from_json(obj: dict) -> np.ndarray:
    """Inverse of :func:`matrix_to_json`, with shape validation."""
    try:
        rows, cols = int(obj["rows"]), int(obj["cols"])
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj["im"], dtype=float)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed matrix object: {exc}") from exc
    if re.shape != (rows * cols,) or im.shape != (rows * cols,):
        raise ValueError(
            f"matrix entries have length {re.size}/{im.size}, expected {rows * cols}"
        )
    return (re + 1j * im).reshape((rows, cols), order="C")
