"""Commuting isometry pairs on truncated spaces.

The model space is C^n ⊗ C^L, a truncation of H ⊗ ℓ²(N) that keeps the first
L shift levels. Index convention throughout: (h, level) ↦ h*L + level, i.e.
operators are Kronecker products kron(op_on_H, op_on_levels).

The truncated shift fails to be an isometry on its top level, so every
operator identity is asserted only after compression to the *interior*
H ⊗ span{δ_0, …, δ_{L-guard-1}}. With guard ≥ d-1 the generators built here
satisfy their identities exactly on the interior, not merely approximately.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .linalg import DEFAULT_TOL, ToleranceConfig, kron, nullspace, numerical_rank

__all__ = [
    "TruncationParams",
    "ProjectionFamily",
    "IsoRep2",
    "ValidationReport",
    "PurityReport",
    "truncated_shift",
    "default_truncation",
    "reflection_family",
    "truncated_infinite_reflection_family",
    "uniform_profile",
    "direct_sum_family",
    "build_projection_family_rep",
    "build_reflection_rep",
    "validate",
    "strong_purity_check",
    "reparametrize",
    "sigma_power",
    "rep_from_config",
]


@dataclass(frozen=True)
class TruncationParams:
    """Truncation metadata: H = C^n, shift levels δ_0…δ_{L-1}, guard band.

    The guard band is the top ``guard`` levels; identity checks exclude it.
    """

    n: int
    L: int
    guard: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if not (1 <= self.guard < self.L):
            raise ValueError(f"need 1 <= guard < L, got guard={self.guard}, L={self.L}")

    @property
    def dim(self) -> int:
        return self.n * self.L

    @property
    def interior_levels(self) -> int:
        return self.L - self.guard

    @property
    def interior_dim(self) -> int:
        return self.n * self.interior_levels

    def level_mask(self) -> np.ndarray:
        """Boolean mask over C^{nL} selecting interior coordinates."""
        levels = np.arange(self.L) < self.interior_levels
        return np.tile(levels, self.n)

    def interior_projector(self) -> np.ndarray:
        return np.diag(self.level_mask().astype(complex))


def default_truncation(n: int, d: int) -> TruncationParams:
    """House rule L = 8d, guard = 2d: keeps cocycle supports (≤ d-1 levels)
    well inside the interior and the interior identities exact (guard ≥ d-1)."""
    return TruncationParams(n=n, L=8 * d, guard=2 * d)


def truncated_shift(L: int) -> np.ndarray:
    """L×L lower shift: S e_j = e_{j+1}, S e_{L-1} = 0."""
    s = np.zeros((L, L), dtype=complex)
    for j in range(L - 1):
        s[j + 1, j] = 1.0
    return s


@dataclass(frozen=True)
class ProjectionFamily:
    """A unitary U together with mutually orthogonal projections summing to 1.

    ``kind`` is "finite" for genuinely finite families and
    "truncated_infinite" when the family is a size-n snapshot of an infinite
    one; in the latter case ``regenerate`` rebuilds the family at another n so
    index computations can report growth instead of a single number.
    """

    projections: tuple[np.ndarray, ...]
    unitary: np.ndarray
    kind: str = "finite"
    regenerate: Callable[[int], "ProjectionFamily"] | None = field(
        default=None, compare=False, repr=False
    )

    @property
    def n(self) -> int:
        return self.unitary.shape[0]

    @property
    def d(self) -> int:
        return len(self.projections)

    def check(self, tol: ToleranceConfig = DEFAULT_TOL) -> None:
        """Raise ValueError if the family invariants fail at identity_tol."""
        u = np.asarray(self.unitary, dtype=complex)
        n = u.shape[0]
        if u.shape != (n, n):
            raise ValueError("unitary must be square")
        eye = np.eye(n)
        if max(_dev(u.conj().T @ u, eye), _dev(u @ u.conj().T, eye)) > tol.identity_tol:
            raise ValueError("U is not unitary at identity_tol")
        total = np.zeros((n, n), dtype=complex)
        for i, p in enumerate(self.projections):
            p = np.asarray(p, dtype=complex)
            if p.shape != (n, n):
                raise ValueError(f"P_{i + 1} has shape {p.shape}, expected {(n, n)}")
            if _dev(p, p.conj().T) > tol.identity_tol:
                raise ValueError(f"P_{i + 1} is not self-adjoint")
            if _dev(p @ p, p) > tol.identity_tol:
                raise ValueError(f"P_{i + 1} is not idempotent")
            for j, q in enumerate(self.projections[:i]):
                if np.max(np.abs(p @ q)) > tol.identity_tol:
                    raise ValueError(f"P_{i + 1} P_{j + 1} != 0: projections not orthogonal")
            total += p
        if _dev(total, eye) > tol.identity_tol:
            raise ValueError("projections do not sum to the identity")

    def q_complement(self, k: int) -> np.ndarray:
        """Q_k = 1 - sum_{i<=k} P_i (Q_0 = 1, Q_d = 0)."""
        q = np.eye(self.n, dtype=complex)
        for p in self.projections[:k]:
            q = q - p
        return q


def _dev(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(a - b))) if a.size else 0.0


@dataclass(frozen=True)
class IsoRep2:
    """A pair of commuting isometries (W1, W2) on C^n ⊗ C^L.

    ``family`` is set when the pair came from a projection-family build and
    enables the structured commutant/index formulas. ``rebuild`` reconstructs
    the same representation at a different truncation, which is what the
    two-level stability protocol needs.
    """

    W1: np.ndarray
    W2: np.ndarray
    trunc: TruncationParams
    family: ProjectionFamily | None = field(default=None, compare=False)
    rebuild: Callable[[TruncationParams], "IsoRep2"] | None = field(
        default=None, compare=False, repr=False
    )

    @property
    def dim(self) -> int:
        return self.trunc.dim

    def interior_projector(self) -> np.ndarray:
        return self.trunc.interior_projector()

    def generator(self, which: int) -> np.ndarray:
        if which == 1:
            return self.W1
        if which == 2:
            return self.W2
        raise ValueError("generator index must be 1 or 2")


def sigma_power(rep: IsoRep2, m: int, n: int) -> np.ndarray:
    """The lattice-point operator W1^m W2^n (the generators commute)."""
    if m < 0 or n < 0:
        raise ValueError("lattice exponents must be nonnegative")
    out = np.linalg.matrix_power(rep.W1, m)
    if n:
        out = out @ np.linalg.matrix_power(rep.W2, n)
    return out


def build_projection_family_rep(
    fam: ProjectionFamily,
    trunc: TruncationParams | None = None,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> IsoRep2:
    """W1 = 1 ⊗ S, W2 = Σ_i (U P_i) ⊗ S^{i-1} on the truncation.

    Requires d ≤ L - guard so the highest shift power still acts inside the
    interior. The default truncation additionally keeps guard ≥ d-1, which
    makes the isometry/commutation identities exact on the interior.
    """
    fam.check(tol)
    if trunc is None:
        trunc = default_truncation(fam.n, fam.d)
    if trunc.n != fam.n:
        raise ValueError(f"truncation n={trunc.n} does not match family n={fam.n}")
    if fam.d > trunc.interior_levels:
        raise ValueError(
            f"need d <= L - guard, got d={fam.d}, L-guard={trunc.interior_levels}"
        )
    s = truncated_shift(trunc.L)
    w1 = kron(np.eye(fam.n), s)
    w2 = np.zeros((trunc.dim, trunc.dim), dtype=complex)
    s_pow = np.eye(trunc.L, dtype=complex)
    for i, p in enumerate(fam.projections, start=1):
        w2 += kron(fam.unitary @ p, s_pow)
        s_pow = s @ s_pow

    def rebuild(tr: TruncationParams) -> IsoRep2:
        return build_projection_family_rep(fam, tr, tol)

    return IsoRep2(W1=w1, W2=w2, trunc=trunc, family=fam, rebuild=rebuild)


def reflection_family(a: np.ndarray, tol: ToleranceConfig = DEFAULT_TOL) -> ProjectionFamily:
    """Standard-basis projections with U = 1 - 2|a><a| for a unit vector a.

    Warns when some <a|e_i> vanishes: the irreducibility of the resulting
    representation needs every coordinate of a to be nonzero.
    """
    a = np.asarray(a, dtype=complex).ravel()
    n = a.size
    norm = np.linalg.norm(a)
    if norm == 0.0:
        raise ValueError("reflection vector must be nonzero")
    if abs(norm - 1.0) > 1e-9:
        raise ValueError(f"reflection vector must be unit norm, got ||a|| = {norm}")
    if np.min(np.abs(a)) <= tol.rank_tol:
        warnings.warn(
            "reflection vector has a vanishing coordinate; the representation "
            "need not be irreducible",
            stacklevel=2,
        )
    u = np.eye(n, dtype=complex) - 2.0 * np.outer(a, a.conj())
    projections = tuple(_coordinate_projection(n, i) for i in range(n))
    return ProjectionFamily(projections=projections, unitary=u)


def _coordinate_projection(n: int, i: int) -> np.ndarray:
    p = np.zeros((n, n), dtype=complex)
    p[i, i] = 1.0
    return p


def build_reflection_rep(
    a: np.ndarray,
    trunc: TruncationParams | None = None,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> IsoRep2:
    """Projection-family representation of the reflection family of ``a``."""
    return build_projection_family_rep(reflection_family(a, tol), trunc, tol)


def uniform_profile(n: int) -> np.ndarray:
    """All-coordinates-equal unit vector; every <a|e_i> = 1/sqrt(n) != 0."""
    return np.full(n, 1.0 / np.sqrt(n), dtype=complex)


def truncated_infinite_reflection_family(
    n: int,
    profile: Callable[[int], np.ndarray] = uniform_profile,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> ProjectionFamily:
    """Size-n snapshot of an infinite reflection family.

    ``profile`` supplies the reflection vector at any size, so the snapshot
    can be regenerated at larger n to witness index growth.
    """
    base = reflection_family(profile(n), tol)

    def regenerate(m: int) -> ProjectionFamily:
        return truncated_infinite_reflection_family(m, profile, tol)

    return ProjectionFamily(
        projections=base.projections,
        unitary=base.unitary,
        kind="truncated_infinite",
        regenerate=regenerate,
    )


def direct_sum_family(a: ProjectionFamily, b: ProjectionFamily) -> ProjectionFamily:
    """Blockwise direct sum; both families must have the same number of projections."""
    if a.d != b.d:
        raise ValueError("direct sum needs families of equal length")
    projections = tuple(
        _block_diag(p, q) for p, q in zip(a.projections, b.projections)
    )
    return ProjectionFamily(
        projections=projections, unitary=_block_diag(a.unitary, b.unitary)
    )


def _block_diag(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = np.zeros((a.shape[0] + b.shape[0], a.shape[1] + b.shape[1]), dtype=complex)
    out[: a.shape[0], : a.shape[1]] = a
    out[a.shape[0] :, a.shape[1] :] = b
    return out


@dataclass(frozen=True)
class ValidationReport:
    isometry_dev_w1: float
    isometry_dev_w2: float
    commutation_dev: float
    tol: float

    @property
    def isometry_ok(self) -> bool:
        return max(self.isometry_dev_w1, self.isometry_dev_w2) <= self.tol

    @property
    def commutation_ok(self) -> bool:
        return self.commutation_dev <= self.tol

    @property
    def ok(self) -> bool:
        return self.isometry_ok and self.commutation_ok

    def as_dict(self) -> dict:
        return {
            "isometry_dev_w1": self.isometry_dev_w1,
            "isometry_dev_w2": self.isometry_dev_w2,
            "commutation_dev": self.commutation_dev,
            "tolerance": self.tol,
            "isometry_ok": self.isometry_ok,
            "commutation_ok": self.commutation_ok,
            "ok": self.ok,
        }


def validate(rep: IsoRep2, tol: ToleranceConfig = DEFAULT_TOL) -> ValidationReport:
    """Interior-compressed isometry and commutation deviations of the pair."""
    p = rep.interior_projector()
    eye = np.eye(rep.dim)

    def iso_dev(w: np.ndarray) -> float:
        return float(np.max(np.abs(p @ (w.conj().T @ w - eye) @ p)))

    comm = p @ (rep.W1 @ rep.W2 - rep.W2 @ rep.W1) @ p
    return ValidationReport(
        isometry_dev_w1=iso_dev(rep.W1),
        isometry_dev_w2=iso_dev(rep.W2),
        commutation_dev=float(np.max(np.abs(comm))),
        tol=tol.identity_tol,
    )


@dataclass(frozen=True)
class PurityReport:
    verdict: str  # strongly_pure | not_pure | inconclusive
    generator_verdicts: tuple[str, str]
    multiplicities: tuple[int, int]
    rank_sequences: tuple[tuple[int, ...], tuple[int, ...]]
    faithful_depths: tuple[int, int]
    interior_dim: int

    def as_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "generator_verdicts": list(self.generator_verdicts),
            "multiplicities": list(self.multiplicities),
            "rank_sequences": [list(r) for r in self.rank_sequences],
            "faithful_depths": list(self.faithful_depths),
            "interior_dim": self.interior_dim,
        }


def level_climb(w: np.ndarray, trunc: TruncationParams, cutoff: float = 1e-12) -> int:
    """Largest shift-level raise among the nonzero blocks of ``w``.

    The generators built here are graded by shift level; a generator that
    climbs c levels per application keeps the interior compression of its
    powers faithful only up to depth (L - guard) / c.
    """
    blocks = np.abs(w).reshape(trunc.n, trunc.L, trunc.n, trunc.L).max(axis=(0, 2))
    out_lv, in_lv = np.nonzero(blocks > cutoff)
    if out_lv.size == 0:
        return 0
    return int(np.max(out_lv - in_lv))


def strong_purity_check(
    rep: IsoRep2, depth: int, tol: ToleranceConfig = DEFAULT_TOL
) -> PurityReport:
    """Classify each generator by the decay of its interior-compressed range.

    A pure isometry of multiplicity m loses exactly m interior range
    dimensions per power: rank(P_int W^k) = max(0, interior_dim - k*m), while
    a unitary direct summand makes the rank stall above zero. Both patterns
    are only read off at depths where the interior compression still reflects
    the untruncated operator (k * level_climb ≤ L - guard); beyond that the
    guard band leaks into the ranks. The verdict is three-valued because a
    finite truncation can never certify purity outright.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    if depth > rep.trunc.interior_levels:
        raise ValueError(
            f"depth {depth} exceeds interior levels {rep.trunc.interior_levels}"
        )
    p_int = rep.interior_projector()
    interior_dim = rep.trunc.interior_dim

    verdicts: list[str] = []
    mults: list[int] = []
    rank_seqs: list[tuple[int, ...]] = []
    faithful: list[int] = []
    for w in (rep.W1, rep.W2):
        m = nullspace(w.conj().T, tol).shape[1]
        ranks = []
        power = np.eye(rep.dim, dtype=complex)
        for _ in range(depth):
            power = w @ power
            ranks.append(numerical_rank(p_int @ power, tol))
        climb = level_climb(w, rep.trunc)
        k_max = min(depth, rep.trunc.interior_levels // max(climb, 1))
        expected = [max(0, interior_dim - k * m) for k in range(1, k_max + 1)]
        if m == 0:
            verdicts.append("not_pure")
        elif k_max >= 1 and ranks[:k_max] == expected:
            verdicts.append("pure")
        elif any(r2 == r1 > 0 for r1, r2 in zip(ranks[:k_max], ranks[1:k_max])):
            verdicts.append("not_pure")
        else:
            verdicts.append("inconclusive")
        mults.append(m)
        rank_seqs.append(tuple(ranks))
        faithful.append(k_max)

    if all(v == "pure" for v in verdicts):
        overall = "strongly_pure"
    elif any(v == "not_pure" for v in verdicts):
        overall = "not_pure"
    else:
        overall = "inconclusive"
    return PurityReport(
        verdict=overall,
        generator_verdicts=(verdicts[0], verdicts[1]),
        multiplicities=(mults[0], mults[1]),
        rank_sequences=(rank_seqs[0], rank_seqs[1]),
        faithful_depths=(faithful[0], faithful[1]),
        interior_dim=interior_dim,
    )


def reparametrize(
    rep: IsoRep2,
    a: tuple[int, int],
    b: tuple[int, int],
    allow_nonunimodular: bool = False,
) -> IsoRep2:
    """Pair (W1^{a1} W2^{a2}, W1^{b1} W2^{b2}) viewed as new generators.

    a and b must generate a sub-semigroup spanning Z^2, checked via
    det [a; b] = ±1 (override with ``allow_nonunimodular``). The guard widens
    by the larger level climb of the two new generators, so the interior
    identities stay exact for the reparametrized pair.
    """
    a = (int(a[0]), int(a[1]))
    b = (int(b[0]), int(b[1]))
    for point in (a, b):
        if point == (0, 0):
            raise ValueError("reparametrization points must be nonzero")
        if min(point) < 0:
            raise ValueError("reparametrization points must be nonnegative")
    det = a[0] * b[1] - a[1] * b[0]
    if abs(det) != 1 and not allow_nonunimodular:
        raise ValueError(
            f"semigroup generated by {a}, {b} does not span Z^2 (det {det}); "
            "pass allow_nonunimodular=True to override"
        )
    if (a, b) == ((1, 0), (0, 1)):
        return rep

    old = rep.trunc
    climb1 = level_climb(rep.W1, old)
    climb2 = level_climb(rep.W2, old)
    widen = max(
        a[0] * climb1 + a[1] * climb2,
        b[0] * climb1 + b[1] * climb2,
        1,
    )
    if old.guard + widen >= old.L:
        raise ValueError(
            f"guard {old.guard}+{widen} would swallow the truncation L={old.L}; "
            "rebuild at a larger L first"
        )
    new_trunc = replace(old, guard=old.guard + widen)
    w1 = sigma_power(rep, *a)
    w2 = sigma_power(rep, *b)

    base_rebuild = rep.rebuild
    rebuild = None
    if base_rebuild is not None:

        def rebuild(tr: TruncationParams) -> IsoRep2:
            base_tr = replace(tr, guard=tr.guard - widen)
            return reparametrize(base_rebuild(base_tr), a, b, allow_nonunimodular)

    return IsoRep2(W1=w1, W2=w2, trunc=new_trunc, family=None, rebuild=rebuild)


def rep_from_config(config: dict, tol: ToleranceConfig = DEFAULT_TOL) -> IsoRep2:
    """Build a representation from the JSON wire config.

    Schema: {"family": "projection" | "reflection" | "custom", "n", "L",
    "guard", "unitary": Matrix, "projections": [Matrix, …] | "standard_basis",
    "a_vector": […], "W1": Matrix, "W2": Matrix, "kind": "finite" |
    "truncated_infinite"}. Reflection vectors are normalized here so callers
    can pass unnormalized coordinates.
    """
    from .linalg import matrix_from_json

    kind = config.get("family")
    trunc = None
    if "L" in config:
        n = config.get("n")
        if n is None:
            n = _config_n(config)
        trunc = TruncationParams(
            n=int(n), L=int(config["L"]), guard=int(config.get("guard", 2))
        )
    if kind == "reflection":
        a = np.asarray(config["a_vector"], dtype=complex)
        norm = np.linalg.norm(a)
        if norm == 0.0:
            raise ValueError("config field a_vector: zero vector")
        a = a / norm
        if config.get("kind") == "truncated_infinite":
            fam = truncated_infinite_reflection_family(a.size, lambda m: uniform_profile(m), tol)
            return build_projection_family_rep(fam, trunc, tol)
        return build_reflection_rep(a, trunc, tol)
    if kind == "projection":
        unitary = matrix_from_json(config["unitary"])
        projections = config.get("projections", "standard_basis")
        if projections == "standard_basis":
            n = unitary.shape[0]
            projections = [_coordinate_projection(n, i) for i in range(n)]
        else:
            projections = [matrix_from_json(p) for p in projections]
        fam = ProjectionFamily(projections=tuple(projections), unitary=unitary)
        return build_projection_family_rep(fam, trunc, tol)
    if kind == "custom":
        w1 = matrix_from_json(config["W1"])
        w2 = matrix_from_json(config["W2"])
        if trunc is None:
            raise ValueError("config field L: required for custom representations")
        if w1.shape != (trunc.dim, trunc.dim) or w2.shape != (trunc.dim, trunc.dim):
            raise ValueError("config fields W1/W2: shape does not match n*L")
        return IsoRep2(W1=w1, W2=w2, trunc=trunc)
    raise ValueError(f"config field family: unknown kind {kind!r}")


def _config_n(config: dict) -> int:
    if "a_vector" in config:
        return len(config["a_vector"])
    if "unitary" in config:
        return int(config["unitary"]["rows"])
    raise ValueError("config field n: required")
