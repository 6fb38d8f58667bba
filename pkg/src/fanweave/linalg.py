"""Dense complex linear algebra underlying unitary-basis analysis.

Everything here works on plain ``numpy`` arrays: square complex matrices for
operators, length-``d**2`` vectors for bipartite states (coefficients of
``e_j (x) e_k`` with ``j`` major).  All functions are pure; randomized steps
take an explicit seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import ANGLE_DECIMALS, DEFAULT_TOLS
from .errors import InvariantError

_TWO_PI = 2.0 * np.pi
_TWO_PI_ROUNDED = round(_TWO_PI, ANGLE_DECIMALS)


def as_square_matrix(a, name: str = "matrix") -> np.ndarray:
    """Coerce to a square complex ndarray, rejecting non-square or non-finite input."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"{name} must be square, got shape {m.shape}")
    if not np.isfinite(m).all():
        raise ValueError(f"{name} contains non-finite entries")
    return m


def round_unit_angle(z: complex) -> float:
    """Principal angle of ``z`` in [0, 2*pi), rounded at the invariant resolution."""
    theta = float(np.angle(z)) % _TWO_PI
    r = round(theta, ANGLE_DECIMALS)
    return 0.0 if r >= _TWO_PI_ROUNDED else r


def unit_spectrum_angles(a) -> tuple[float, ...]:
    """Sorted rounded angles of the eigenvalues of a (unitary) matrix."""
    lam = np.linalg.eigvals(as_square_matrix(a))
    return tuple(sorted(round_unit_angle(z) for z in lam))


def is_unitary(a, tol: float | None = None) -> bool:
    """True iff ``||A*A - I||_F <= tol``."""
    m = as_square_matrix(a)
    tol = DEFAULT_TOLS.unitarity if tol is None else tol
    return bool(np.linalg.norm(m.conj().T @ m - np.eye(m.shape[0])) <= tol)


def hs_orthogonality_check(family, tol: float | None = None) -> bool:
    """Check ``tr(U_x* U_y) = d delta_xy`` for every pair of the family."""
    mats = [as_square_matrix(f, f"family[{i}]") for i, f in enumerate(family)]
    if not mats:
        raise ValueError("family must be non-empty")
    d = mats[0].shape[0]
    if any(m.shape[0] != d for m in mats):
        raise ValueError("family members have mismatched dimensions")
    tol = DEFAULT_TOLS.orthogonality if tol is None else tol
    v = np.stack(mats).reshape(len(mats), d * d)
    gram = v.conj() @ v.T
    dev = np.abs(gram - d * np.eye(len(mats)))
    return bool(dev.max() <= tol)


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Unitary eigendecomposition ``A = V diag(eigenvalues) V*``."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _phase_fixed(vec: np.ndarray) -> np.ndarray:
    mags = np.abs(vec)
    idx = int(np.nonzero(mags >= mags.max() - 1e-12)[0][0])
    piv = vec[idx]
    if abs(piv) == 0.0:
        return vec
    return vec * (piv.conjugate() / abs(piv))


def _vector_key(vec: np.ndarray) -> tuple:
    w = _phase_fixed(vec)
    return tuple((round(float(z.real), 10), round(float(z.imag), 10)) for z in w)


def _eig_key(values) -> tuple:
    return tuple((round_unit_angle(z), round(float(abs(z)), ANGLE_DECIMALS)) for z in values)


def _joint_eigenvectors(mats: list[np.ndarray], rng: np.random.Generator, depth: int = 0) -> np.ndarray:
    """Orthonormal joint eigenbasis of a commuting normal family.

    Mixes the family into a random Hermitian matrix, diagonalizes it, and
    recurses on the restriction to each degenerate eigenspace with fresh
    coefficients.  Clusters are taken generously: over-merging is repaired by
    the recursion, while splitting a true joint eigenspace is harmless.
    """
    if depth > 40:
        raise InvariantError("joint diagonalization did not converge; family may not commute")
    d = mats[0].shape[0]
    h = np.zeros((d, d), dtype=complex)
    for f in mats:
        c_re, c_im = rng.uniform(1.0, 2.0, size=2)
        h += c_re * (f + f.conj().T) / 2.0 + c_im * (f - f.conj().T) / 2.0j
    w, v = np.linalg.eigh(h)
    scale = max(1.0, float(np.max(np.abs(w))))
    columns = []
    i = 0
    while i < d:
        j = i
        while j + 1 < d and abs(w[j + 1] - w[j]) < 1e-6 * scale:
            j += 1
        block = v[:, i : j + 1]
        if j > i:
            restricted = [block.conj().T @ f @ block for f in mats]
            size = j - i + 1
            scalar = all(
                np.linalg.norm(g - g[0, 0] * np.eye(size)) <= 1e-10 * size for g in restricted
            )
            if not scalar:
                block = block @ _joint_eigenvectors(restricted, rng, depth + 1)
        columns.append(block)
        i = j + 1
    return np.hstack(columns)


def simul_diag(family, tol: float | None = None, rng_seed: int = 0):
    """Simultaneously diagonalize a commuting family of normal matrices.

    Parameters
    ----------
    family : iterable of square complex matrices, pairwise commuting within
        ``tol`` and each normal.
    tol : commutation tolerance on ``||AB - BA||_F`` (default 1e-9).
    rng_seed : seed for the random Hermitian mixing; the output is a
        deterministic function of (family, tol, rng_seed).

    Returns
    -------
    (u, diagonals) : ``u`` unitary with canonically ordered columns;
        ``diagonals[k]`` is the diagonal of ``u* family[k] u``.
    """
    mats = [as_square_matrix(f, f"family[{i}]") for i, f in enumerate(family)]
    if not mats:
        raise ValueError("family must be non-empty")
    d = mats[0].shape[0]
    if any(m.shape[0] != d for m in mats):
        raise ValueError("family members have mismatched dimensions")
    tol = DEFAULT_TOLS.commutation if tol is None else tol
    for i, m in enumerate(mats):
        scale = max(np.linalg.norm(m) ** 2, 1e-300)
        resid = np.linalg.norm(m.conj().T @ m - m @ m.conj().T)
        if resid > DEFAULT_TOLS.normality * scale:
            raise InvariantError(f"family[{i}] is not normal: ||A*A - AA*||_F = {resid:.3e}")
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            resid = np.linalg.norm(mats[i] @ mats[j] - mats[j] @ mats[i])
            if resid > tol:
                raise InvariantError(
                    f"family members {i} and {j} do not commute: ||AB - BA||_F = {resid:.3e}"
                )
    rng = np.random.default_rng(rng_seed)
    u = _joint_eigenvectors(mats, rng)
    diags = np.stack([np.einsum("ij,ij->j", u.conj(), m @ u) for m in mats])
    order = sorted(
        range(d), key=lambda c: (_eig_key(diags[:, c]), _vector_key(u[:, c]))
    )
    u = u[:, order]
    diags = diags[:, order]
    limit = DEFAULT_TOLS.diag_residual * np.sqrt(d)
    for k, m in enumerate(mats):
        resid = np.linalg.norm(u.conj().T @ m @ u - np.diag(diags[k]))
        if resid > limit:
            raise InvariantError(
                f"joint diagonalization residual {resid:.3e} exceeds {limit:.3e} for family[{k}]"
            )
    return u, [diags[k].copy() for k in range(len(mats))]


def eig_normal(a, tol: float | None = None) -> SpectralDecomposition:
    """Unitary eigendecomposition of a normal matrix with deterministic ordering.

    Eigenvalues are sorted by principal angle in [0, 2*pi) then modulus, with
    ties broken by the phase-fixed eigenvector entries.
    """
    m = as_square_matrix(a)
    tol = DEFAULT_TOLS.normality if tol is None else tol
    scale = max(np.linalg.norm(m) ** 2, 1e-300)
    resid = np.linalg.norm(m.conj().T @ m - m @ m.conj().T)
    if resid > tol * scale:
        raise InvariantError(
            f"matrix is not normal: ||A*A - AA*||_F = {resid:.3e} > {tol:.1e} * ||A||_F^2"
        )
    u, diags = simul_diag([m], rng_seed=0)
    lam = diags[0]
    d = m.shape[0]
    if np.linalg.norm(u.conj().T @ u - np.eye(d)) > 1e-10:
        raise InvariantError("eigenvector columns are not orthonormal")
    recon = np.linalg.norm(m - u @ np.diag(lam) @ u.conj().T)
    if recon > 1e-9 * max(np.linalg.norm(m), 1e-300):
        raise InvariantError(f"eigendecomposition reconstruction residual {recon:.3e}")
    return SpectralDecomposition(eigenvalues=lam, eigenvectors=u)


def is_psd(a, tol: float | None = None) -> bool:
    """True iff the Hermitian matrix ``a`` has ``lambda_min >= -tol``."""
    m = as_square_matrix(a)
    tol = DEFAULT_TOLS.psd if tol is None else tol
    herm_resid = np.linalg.norm(m - m.conj().T)
    if herm_resid > DEFAULT_TOLS.hermitian * max(1.0, np.linalg.norm(m)):
        raise ValueError(f"matrix is not Hermitian: ||A - A*||_F = {herm_resid:.3e}")
    w = np.linalg.eigvalsh((m + m.conj().T) / 2.0)
    return bool(w.min() >= -tol)


def partial_transpose(m, d1: int, d2: int, subsystem: int = 2) -> np.ndarray:
    """Blockwise transpose on one tensor factor of a (d1*d2)-dimensional matrix.

    ``subsystem=2`` maps the block matrix ``[A_jk]`` to ``[A_jk^t]``;
    ``subsystem=1`` maps it to ``[A_kj]``.  The operation is an involution and
    permutes entries exactly (no arithmetic).
    """
    mat = as_square_matrix(m)
    if mat.shape[0] != d1 * d2:
        raise ValueError(f"dimension {mat.shape[0]} does not factor as {d1} * {d2}")
    if subsystem not in (1, 2):
        raise ValueError("subsystem must be 1 or 2")
    t = mat.reshape(d1, d2, d1, d2)
    t = t.transpose(2, 1, 0, 3) if subsystem == 1 else t.transpose(0, 3, 2, 1)
    return np.ascontiguousarray(t.reshape(d1 * d2, d1 * d2))


def vec_to_op(psi) -> np.ndarray:
    """Operator corresponding to a bipartite vector: ``A[j, k] = sqrt(d) psi[j*d + k]``.

    This is the inverse of :func:`op_to_vec`; the canonical maximally
    entangled vector maps to the identity.
    """
    v = np.asarray(psi, dtype=complex).reshape(-1)
    d = round(len(v) ** 0.5)
    if d * d != len(v):
        raise ValueError(f"bipartite vector length {len(v)} is not a perfect square")
    return np.sqrt(d) * v.reshape(d, d)


def op_to_vec(a) -> np.ndarray:
    """Bipartite vector ``(A (x) I) Omega`` of an operator, as a length-d^2 array."""
    m = as_square_matrix(a)
    return m.reshape(-1) / np.sqrt(m.shape[0])


def _schmidt_probabilities(psi) -> np.ndarray:
    v = np.asarray(psi, dtype=complex).reshape(-1)
    d = round(len(v) ** 0.5)
    if d * d != len(v):
        raise ValueError(f"bipartite vector length {len(v)} is not a perfect square")
    nrm = np.linalg.norm(v)
    if abs(nrm - 1.0) > DEFAULT_TOLS.vector_norm:
        raise ValueError(f"vector is not normalized: ||psi|| = {nrm!r}")
    sv = np.linalg.svd(v.reshape(d, d), compute_uv=False)
    return sv**2


def schmidt_rank(psi, tol: float | None = None) -> int:
    """Number of singular values of the associated operator above ``tol``."""
    tol = DEFAULT_TOLS.schmidt if tol is None else tol
    probs = _schmidt_probabilities(psi)
    d = len(probs)
    sv_op = np.sqrt(probs * d)  # singular values of vec_to_op(psi)
    return int(np.count_nonzero(sv_op > tol))


def entanglement_entropy(psi) -> float:
    """Shannon entropy (natural log) of the Schmidt probability spectrum."""
    probs = _schmidt_probabilities(psi)
    probs = probs[probs > 1e-15]
    return float(-np.sum(probs * np.log(probs)))


def flip(d: int) -> np.ndarray:
    """Swap operator on C^d (x) C^d: ``F (phi (x) psi) = psi (x) phi``."""
    if d < 2:
        raise ValueError("flip requires d >= 2")
    f = np.zeros((d * d, d * d), dtype=complex)
    for j in range(d):
        for k in range(d):
            f[k * d + j, j * d + k] = 1.0
    return f


def omega(d: int) -> np.ndarray:
    """Canonical maximally entangled vector ``(1/sqrt(d)) sum_j e_j (x) e_j``."""
    if d < 2:
        raise ValueError("omega requires d >= 2")
    v = np.zeros(d * d, dtype=complex)
    v[:: d + 1] = 1.0 / np.sqrt(d)
    return v


def random_unitary(d: int, rng) -> np.ndarray:
    """Haar-distributed unitary, for property tests and random conjugations."""
    rng = np.random.default_rng(rng) if not isinstance(rng, np.random.Generator) else rng
    z = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(z)
    ph = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * ph.conjugate()
