import numpy as np
import pytest

from isorep.commutant import (
    are_unitarily_equivalent,
    is_irreducible,
    star_commutant_basis,
    star_intertwiner_basis,
    structured_commutant_dim,
    truncated_commutant_oracle,
)
from isorep.linalg import DEFAULT_TOL, intertwiner_space
from isorep.repmodel import (
    IsoRep2,
    ProjectionFamily,
    TruncationParams,
    build_projection_family_rep,
    build_reflection_rep,
    direct_sum_family,
    reflection_family,
    reparametrize,
)

EX2_VECTOR = np.array([0.5, 0.5, 0.5, 0.5])


def coord_projections(n):
    return tuple(np.diag([1.0 + 0j if i == j else 0.0 for i in range(n)]) for j in range(n))


def identity_family(n):
    return ProjectionFamily(projections=coord_projections(n), unitary=np.eye(n, dtype=complex))


# --- structured commutant -------------------------------------------------------


def test_structured_example2_is_scalar():
    assert structured_commutant_dim(reflection_family(EX2_VECTOR)) == 1


def test_structured_identity_unitary_diagonal():
    assert structured_commutant_dim(identity_family(3)) == 3


def test_structured_scalar_case():
    assert structured_commutant_dim(identity_family(1)) == 1


# --- truncated oracle -------------------------------------------------------------


def test_oracle_example2_agrees():
    rep = build_reflection_rep(EX2_VECTOR, TruncationParams(4, 16, 8))
    assert truncated_commutant_oracle(rep) == 1


def test_oracle_identity_family():
    rep = build_projection_family_rep(identity_family(2), TruncationParams(2, 16, 4))
    assert truncated_commutant_oracle(rep) == 2


def test_oracle_direct_sum_sees_matrix_units():
    fam = reflection_family(EX2_VECTOR)
    doubled = direct_sum_family(fam, fam)
    rep = build_projection_family_rep(doubled, TruncationParams(8, 16, 4))
    assert truncated_commutant_oracle(rep) >= 4
    assert structured_commutant_dim(doubled) == 4


def test_oracle_matches_structured_for_random_families():
    rng = np.random.default_rng(1234)
    for _ in range(10):
        n = int(rng.integers(2, 6))
        z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        q, _ = np.linalg.qr(z)
        k = int(rng.integers(0, n + 1))
        phases = np.exp(1j * rng.uniform(0.3, 5.9, size=n - k))
        u = q @ np.diag(np.concatenate([np.ones(k), phases])) @ q.conj().T
        fam = ProjectionFamily(projections=coord_projections(n), unitary=u)
        rep = build_projection_family_rep(fam, TruncationParams(n, 16, min(2 * n, 15 - n)))
        assert truncated_commutant_oracle(rep) == structured_commutant_dim(fam)


def test_star_commutant_refinement_matches_dense():
    # same space computed by the dense vectorized solve and by the
    # eigenspace-refinement route used above the size cutoff
    rng = np.random.default_rng(77)
    for n in (6, 12):
        a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        b = np.diag(rng.normal(size=n))
        dense = intertwiner_space(
            [(a, a), (b, b), (a.conj().T, a.conj().T), (b.conj().T, b.conj().T)]
        )
        from isorep.commutant import _refined_commutant_for_tests

        refined = _refined_commutant_for_tests([a, b])
        assert len(dense) == len(refined)
        for t in refined:
            assert np.max(np.abs(a @ t - t @ a)) < 1e-9
            assert np.max(np.abs(b @ t - t @ b)) < 1e-9


# --- irreducibility ---------------------------------------------------------------


def test_example2_irreducible():
    assert is_irreducible(reflection_family(EX2_VECTOR)) is True


def test_identity_family_reducible():
    assert is_irreducible(identity_family(2)) is False


def test_scalar_family_irreducible():
    assert is_irreducible(identity_family(1)) is True


def test_rep_without_family_uses_oracle():
    rep = build_reflection_rep(EX2_VECTOR, TruncationParams(4, 16, 3))
    sub = reparametrize(rep, (1, 1), (2, 1))
    assert sub.family is None
    assert is_irreducible(sub) is True


def test_rep_without_rebuild_is_inconclusive():
    rep = build_reflection_rep(EX2_VECTOR, TruncationParams(4, 16, 3))
    raw = IsoRep2(W1=rep.W1, W2=rep.W2, trunc=rep.trunc)
    assert is_irreducible(raw) is None


# --- unitary equivalence -----------------------------------------------------------


def test_equivalent_to_itself_with_identity_witness():
    fam = reflection_family(EX2_VECTOR)
    verdict = are_unitarily_equivalent(fam, fam)
    assert verdict.status == "equivalent"
    w = verdict.witness
    assert np.max(np.abs(w - w[0, 0] * np.eye(4))) <= 1e-10
    assert verdict.diagnostics["unitarity"] <= 1e-10


def test_moduli_mismatch_is_inequivalent():
    b = np.array([0.8, 0.1, 0.1, 0.1])
    fam_a = reflection_family(EX2_VECTOR)
    fam_b = reflection_family(b / np.linalg.norm(b))
    verdict = are_unitarily_equivalent(fam_a, fam_b)
    assert verdict.status == "inequivalent"
    assert verdict.diagnostics["intertwiner_dim"] == 0


def test_phase_twisted_vector_is_equivalent():
    fam = reflection_family(EX2_VECTOR)
    twisted = reflection_family(np.exp(1j * 1.3) * EX2_VECTOR)
    verdict = are_unitarily_equivalent(fam, twisted)
    assert verdict.status == "equivalent"


def test_equivalence_status_is_symmetric():
    b = np.array([0.8, 0.1, 0.1, 0.1])
    pairs = [
        (reflection_family(EX2_VECTOR), reflection_family(b / np.linalg.norm(b))),
        (reflection_family(EX2_VECTOR), reflection_family(EX2_VECTOR)),
        (identity_family(3), identity_family(3)),
    ]
    for fam_a, fam_b in pairs:
        assert (
            are_unitarily_equivalent(fam_a, fam_b).status
            == are_unitarily_equivalent(fam_b, fam_a).status
        )


def test_equivalence_witness_intertwines():
    fam = reflection_family(EX2_VECTOR)
    verdict = are_unitarily_equivalent(fam, fam)
    t = verdict.witness
    assert np.max(np.abs(t @ fam.unitary - fam.unitary @ t)) <= 1e-10
    for p in fam.projections:
        assert np.max(np.abs(t @ p - p @ t)) <= 1e-10


def test_equivalence_generic_rep_path():
    rep_a = build_reflection_rep(EX2_VECTOR, TruncationParams(4, 8, 3))
    rep_b = build_reflection_rep(EX2_VECTOR, TruncationParams(4, 8, 3))
    verdict = are_unitarily_equivalent(rep_a, rep_b)
    assert verdict.status == "equivalent"


def test_equivalence_dimension_mismatch_raises():
    fam_a = reflection_family(EX2_VECTOR)
    fam_b = reflection_family(np.array([1.0, 1.0]) / np.sqrt(2))
    with pytest.raises(ValueError, match="different spaces"):
        are_unitarily_equivalent(fam_a, fam_b)


def test_verdict_json_shape():
    fam = reflection_family(EX2_VECTOR)
    obj = are_unitarily_equivalent(fam, fam, seed=7).to_json()
    assert set(obj) == {"status", "witness", "residuals", "seed"}
    assert obj["seed"] == 7
    assert obj["witness"]["rows"] == 4


# --- Schur consistency --------------------------------------------------------------


def test_irreducible_index_one_has_unique_cocycle_ray():
    # scalar commutant + one-dimensional cocycle space: the basis is unique up
    # to scale, so any two runs agree up to a phase
    from isorep.cocycle import cocycle_space

    a = np.array([1.0, 1.0]) / np.sqrt(2)
    rep = build_reflection_rep(a, TruncationParams(2, 8, 2))
    assert is_irreducible(rep.family) is True
    space = cocycle_space(rep)
    assert space.dim == 1
    again = cocycle_space(rep).basis[0].stacked()
    first = space.basis[0].stacked()
    overlap = abs(np.vdot(first, again)) / (np.linalg.norm(first) * np.linalg.norm(again))
    assert overlap == pytest.approx(1.0, abs=1e-10)
