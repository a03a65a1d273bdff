import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spincavity.operators import (
    HilbertLayout,
    adjoint,
    composite_operators,
    dissipator,
    fock_annihilation,
    identity,
    qd_lowering,
    qd_sigma_z,
    spost,
    spre,
    tensor,
    unvectorize,
    vectorize,
)

RNG = np.random.default_rng(42)


def random_hermitian(dim, rng=RNG):
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return m + m.conj().T


def apply_super(S, rho):
    d = rho.shape[0]
    return unvectorize(np.asarray(S @ vectorize(rho)).ravel(), d)


class TestFockAnnihilation:
    def test_cutoff_one(self):
        np.testing.assert_array_equal(fock_annihilation(1), [[0, 1], [0, 0]])

    def test_cutoff_two_sqrt2_entry(self):
        a = fock_annihilation(2)
        assert a[1, 2] == pytest.approx(np.sqrt(2))
        assert a[0, 1] == 1.0

    def test_number_operator_diagonal(self):
        a = fock_annihilation(5)
        n = adjoint(a) @ a
        np.testing.assert_allclose(np.diag(n).real, np.arange(6), atol=1e-14)

    def test_zero_cutoff_rejected(self):
        with pytest.raises(ValueError):
            fock_annihilation(0)

    def test_sparse_matches_dense(self):
        np.testing.assert_array_equal(
            fock_annihilation(7, sparse=True).toarray(), fock_annihilation(7)
        )


class TestQdOperators:
    def test_lowering_maps_excited_to_ground(self):
        excited = np.array([0.0, 1.0])
        np.testing.assert_array_equal(qd_lowering() @ excited, [1.0, 0.0])

    def test_raising_lowering_is_excited_projector(self):
        sm = qd_lowering()
        proj = adjoint(sm) @ sm
        np.testing.assert_array_equal(proj, np.diag([0.0, 1.0]))

    def test_sigma_z_ground_state(self):
        ground = np.array([1.0, 0.0])
        assert (qd_sigma_z() @ ground)[0] == -1.0


class TestLayout:
    def test_total_dim(self):
        layout = HilbertLayout(9)
        assert layout.total_dim == 2 * 10

    def test_index_round_trip(self):
        layout = HilbertLayout(4)
        for q in range(2):
            for n in range(5):
                assert layout.unindex(layout.index(q, n)) == (q, n)

    def test_rejects_small_cutoff(self):
        with pytest.raises(ValueError):
            HilbertLayout(0)

    def test_ordering_is_qd_major(self):
        # QD (x) field: flipping the QD level jumps by the field dimension
        layout = HilbertLayout(3)
        assert layout.index(1, 0) - layout.index(0, 0) == layout.field_dim


class TestTensor:
    def test_identity_product(self):
        np.testing.assert_array_equal(
            tensor(identity(2), identity(3)), identity(6)
        )

    def test_disjoint_factors_commute(self):
        a = fock_annihilation(3)
        left = tensor(qd_sigma_z(), identity(4))
        right = tensor(identity(2), adjoint(a) @ a)
        np.testing.assert_allclose(left @ right, right @ left, atol=1e-14)

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=25, deadline=None)
    def test_mixed_product_property(self, seed):
        rng = np.random.default_rng(seed)
        A, C = (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)) for _ in range(2))
        B, D = (rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)) for _ in range(2))
        np.testing.assert_allclose(
            tensor(A, B) @ tensor(C, D), tensor(A @ C, B @ D), atol=1e-12
        )

    def test_sparse_dense_agree(self):
        a = fock_annihilation(7)
        dense = tensor(qd_lowering(), a)
        sparse = tensor(qd_lowering(sparse=True), fock_annihilation(7, sparse=True))
        np.testing.assert_allclose(sparse.toarray(), dense, atol=1e-14)


class TestVectorization:
    def test_column_stacking_round_trip(self):
        rho = random_hermitian(6)
        np.testing.assert_array_equal(unvectorize(vectorize(rho), 6), rho)

    def test_spre_spost_convention(self):
        A = random_hermitian(4)
        rho = random_hermitian(4)
        np.testing.assert_allclose(apply_super(spre(A), rho), A @ rho, atol=1e-12)
        np.testing.assert_allclose(apply_super(spost(A), rho), rho @ A, atol=1e-12)


class TestDissipator:
    def test_zero_operator_gives_zero_map(self):
        D = dissipator(np.zeros((4, 4), dtype=complex))
        assert np.all(D == 0)

    def test_trace_preserving(self):
        layout = HilbertLayout(3)
        a, sm, _ = composite_operators(layout)
        for C in (a, sm, 0.3 * a + 0.7j * sm):
            D = dissipator(C)
            for _ in range(5):
                rho = random_hermitian(layout.total_dim)
                out = apply_super(D, rho)
                assert abs(np.trace(out)) <= 1e-12 * np.linalg.norm(rho)

    def test_hermiticity_preserving(self):
        layout = HilbertLayout(3)
        a, _, _ = composite_operators(layout)
        D = dissipator(a)
        rho = random_hermitian(layout.total_dim)
        out = apply_super(D, rho)
        np.testing.assert_allclose(out, out.conj().T, atol=1e-12 * np.linalg.norm(rho))

    def test_cavity_decay_rate_on_two_level_field(self):
        # D[sqrt(kappa) a] on a single-excitation field: d<n>/dt = -kappa <n>
        kappa = 0.37
        a = fock_annihilation(1)
        D = dissipator(np.sqrt(kappa) * a)
        rho = np.diag([0.4, 0.6]).astype(complex)
        n = adjoint(a) @ a
        drho = apply_super(D, rho)
        dn_dt = np.trace(n @ drho).real
        assert dn_dt == pytest.approx(-kappa * 0.6, rel=1e-12)

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(ValueError):
            dissipator(np.zeros((3, 4)))
