"""Elementary operators of the truncated QD-field Hilbert space.

Conventions fixed once and asserted by tests:

* composite ordering is QD factor (x) field factor, with QD basis
  (ground, excited) so sigma_z = diag(-1, +1);
* density matrices are vectorized by column stacking, so
  vec(A rho B) = (B^T kron A) vec(rho).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

QD_DIM = 2


@dataclass(frozen=True)
class HilbertLayout:
    """Index bookkeeping for the composite space, QD (x) field ordering."""

    fock_cutoff: int

    def __post_init__(self):
        if self.fock_cutoff < 1:
            raise ValueError("fock_cutoff must be >= 1")

    @property
    def field_dim(self) -> int:
        return self.fock_cutoff + 1

    @property
    def total_dim(self) -> int:
        return QD_DIM * self.field_dim

    def index(self, qd_level: int, fock_level: int) -> int:
        """Flat index of |qd_level> (x) |fock_level>."""
        if not 0 <= qd_level < QD_DIM:
            raise ValueError(f"qd_level out of range: {qd_level}")
        if not 0 <= fock_level <= self.fock_cutoff:
            raise ValueError(f"fock_level out of range: {fock_level}")
        return qd_level * self.field_dim + fock_level

    def unindex(self, flat: int) -> tuple[int, int]:
        if not 0 <= flat < self.total_dim:
            raise ValueError(f"index out of range: {flat}")
        return divmod(flat, self.field_dim)


def fock_annihilation(cutoff: int, sparse: bool = False):
    """Annihilation operator on Fock levels 0..cutoff: <n-1|a|n> = sqrt(n)."""
    if cutoff < 1:
        raise ValueError("cutoff must be >= 1; a 1-level field has no dynamics")
    a = np.diag(np.sqrt(np.arange(1, cutoff + 1, dtype=float)), 1).astype(complex)
    return sp.csr_matrix(a) if sparse else a


def qd_lowering(sparse: bool = False):
    """sigma_- in the (ground, excited) basis: maps excited -> ground."""
    s = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
    return sp.csr_matrix(s) if sparse else s


def qd_sigma_z(sparse: bool = False):
    """sigma_z = diag(-1, +1): -1 on the ground state (unsaturated)."""
    s = np.diag([-1.0 + 0j, 1.0 + 0j])
    return sp.csr_matrix(s) if sparse else s


def adjoint(A):
    if sp.issparse(A):
        return A.conj().T.tocsr()
    return A.conj().T


def identity(dim: int, sparse: bool = False):
    return sp.identity(dim, dtype=complex, format="csr") if sparse else np.eye(dim, dtype=complex)


def tensor(A, B):
    """Kronecker product in the fixed QD (x) field ordering."""
    if sp.issparse(A) or sp.issparse(B):
        return sp.kron(sp.csr_matrix(A), sp.csr_matrix(B), format="csr")
    return np.kron(A, B)


def composite_operators(layout: HilbertLayout, sparse: bool = True):
    """(a, sigma_minus, sigma_z) lifted to the composite space."""
    i_qd = identity(QD_DIM, sparse)
    i_field = identity(layout.field_dim, sparse)
    a = tensor(i_qd, fock_annihilation(layout.fock_cutoff, sparse))
    sm = tensor(qd_lowering(sparse), i_field)
    sz = tensor(qd_sigma_z(sparse), i_field)
    return a, sm, sz


def spre(A):
    """Superoperator of left multiplication: vec(A rho) = (I kron A) vec(rho)."""
    n = A.shape[0]
    return tensor(identity(n, sp.issparse(A)), A)


def spost(B):
    """Superoperator of right multiplication: vec(rho B) = (B^T kron I) vec(rho)."""
    n = B.shape[0]
    Bt = B.T.tocsr() if sp.issparse(B) else B.T
    return tensor(Bt, identity(n, sp.issparse(B)))


def dissipator(C):
    """Lindblad dissipator C rho C+ - {C+ C, rho}/2 on vectorized rho."""
    if C.shape[0] != C.shape[1]:
        raise ValueError(f"collapse operator must be square, got {C.shape}")
    Cd = adjoint(C)
    CdC = Cd @ C
    return spre(C) @ spost(Cd) - 0.5 * (spre(CdC) + spost(CdC))


def vectorize(rho: np.ndarray) -> np.ndarray:
    """Column-stacking vec."""
    return np.asarray(rho).reshape(-1, order="F")


def unvectorize(v: np.ndarray, dim: int) -> np.ndarray:
    return np.asarray(v).reshape((dim, dim), order="F")
