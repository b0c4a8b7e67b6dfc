"""Quantum subspace expansion around a (possibly mixed) reference state.

Subspace matrices can be assembled two ways: directly as operator traces
against a dense reference density matrix, or purely from stored reduced
density matrices via the linear-response matrix-element formulas. Both
routes agree for consistent inputs and are kept independent so one can
check the other.
"""

from dataclasses import dataclass, field
from itertools import combinations, product

import numpy as np

from .linalg import Spectrum, generalized_eigensolve
from .molecule import hamiltonian_from_tensors
from .operators import (FermionOperator, PauliOperator, commutator,
                        jordan_wigner, normal_order, pauli_to_dense)
from .rdm import RdmSet, cumulants_from_rdms, expectation_from_rdms, reconstruct_rdms

# Looser than the linalg default: RDM-contracted matrices carry accumulated
# contraction noise in their null directions.
QSE_METRIC_CUTOFF = 1e-8
FERMIONIC_MODE_LIMIT = 8
QUBIT_LIMIT = 12
_HERM_SYM_TOL = 1e-12


@dataclass
class ExpansionBasis:
    kind: str                       # "fermionic" or "qubit"
    order: int
    operators: list                 # PauliOperator per element; index 0 = identity
    includes_reference: bool
    labels: list = field(default_factory=list)

    def __len__(self):
        return len(self.operators)


@dataclass
class SubspaceProblem:
    basis: ExpansionBasis | None
    h_sub: np.ndarray
    s_sub: np.ndarray
    symmetry_subs: dict = field(default_factory=dict)
    combo: np.ndarray | None = None  # projected coordinates -> basis coordinates

    @property
    def dim(self) -> int:
        return self.h_sub.shape[0]


def _dedup(ops, labels):
    seen = set()
    out_ops, out_labels = [], []
    for op, label in zip(ops, labels):
        if op.is_zero():
            continue
        key = op.render()
        if key in seen:
            continue
        seen.add(key)
        out_ops.append(op)
        out_labels.append(label)
    return out_ops, out_labels


def fermionic_basis(mode_count: int, order: int,
                    includes_reference: bool = True) -> ExpansionBasis:
    """Excitation products (a_i^ a_j)^order, Jordan-Wigner mapped.

    Order 1 is the linear-response set {a_i^ a_j} over all index pairs; the
    identity is prepended (index 0) when the reference is included.
    """
    if not 1 <= order <= 2:
        raise ValueError("fermionic expansion order must be 1 or 2")
    if mode_count > FERMIONIC_MODE_LIMIT:
        raise ValueError(f"mode_count {mode_count} exceeds {FERMIONIC_MODE_LIMIT}")
    m = mode_count
    ops, labels = [], []
    if includes_reference:
        ops.append(PauliOperator.identity(m))
        labels.append("g")
    for indices in product(range(m), repeat=2 * order):
        terms = {}
        seq = []
        for f in range(order):
            seq.extend([(indices[2 * f], True), (indices[2 * f + 1], False)])
        terms[tuple(seq)] = 1.0
        fop = FermionOperator(m, terms)
        ops.append(jordan_wigner(normal_order(fop)))
        labels.append(" ".join(f"{i}^ {j}" for i, j in zip(indices[0::2], indices[1::2])))
    ops, labels = _dedup(ops, labels)
    return ExpansionBasis(kind="fermionic", order=order, operators=ops,
                          includes_reference=includes_reference, labels=labels)


def qubit_basis(qubit_count: int, order: int) -> ExpansionBasis:
    """Low-Hamming-weight Pauli expansion: identity, single Paulis, pairs."""
    if not 1 <= order <= 2:
        raise ValueError("qubit expansion order must be 1 or 2")
    n = qubit_count
    if n > QUBIT_LIMIT:
        raise ValueError(f"qubit_count {n} exceeds {QUBIT_LIMIT}")
    ops = [PauliOperator.identity(n)]
    labels = ["g"]
    for q in range(n):
        for letter in "XYZ":
            ops.append(PauliOperator.from_letter(letter, q, n))
            labels.append(f"{letter}{q}")
    if order == 2:
        for q1, q2 in combinations(range(n), 2):
            for l1, l2 in product("XYZ", repeat=2):
                word = ["I"] * n
                word[q1], word[q2] = l1, l2
                ops.append(PauliOperator(n, {"".join(word): 1.0}))
                labels.append(f"{l1}{q1} {l2}{q2}")
    ops, labels = _dedup(ops, labels)
    return ExpansionBasis(kind="qubit", order=order, operators=ops,
                          includes_reference=True, labels=labels)


def _symmetrized(mat: np.ndarray, tol: float = _HERM_SYM_TOL) -> np.ndarray:
    return 0.5 * (mat + mat.conj().T)


def build_subspace_direct(basis: ExpansionBasis, h: np.ndarray, rho: np.ndarray,
                          symmetry_ops: dict | None = None) -> SubspaceProblem:
    """Assemble h_sub[a,b] = Tr[E_a^ H E_b rho] and overlaps by dense traces."""
    h = np.asarray(h, dtype=complex)
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim == 1:
        rho = np.outer(rho, rho.conj())
    dim = h.shape[0]
    if rho.shape != (dim, dim):
        raise ValueError("H and rho dimensions differ")
    dense_ops = [pauli_to_dense(op) for op in basis.operators]
    if dense_ops and dense_ops[0].shape[0] != dim:
        raise ValueError("basis operator dimension does not match H")
    n_b = len(dense_ops)
    evec = np.stack([e.ravel() for e in dense_ops], axis=1)  # (dim^2, n_b)

    def block(weight):
        cols = np.stack([(weight @ e @ rho).ravel() for e in dense_ops], axis=1)
        return _symmetrized(evec.conj().T @ cols)

    s_sub = block(np.eye(dim))
    h_sub = block(h)
    sym = {}
    for name, op in (symmetry_ops or {}).items():
        sym[name] = block(np.asarray(op, dtype=complex))
    return SubspaceProblem(basis=basis, h_sub=h_sub, s_sub=s_sub, symmetry_subs=sym)


def _overlap_lr(rdms: RdmSet) -> np.ndarray:
    m = rdms.mode_count
    d1, d2 = rdms.d(1), rdms.d(2)
    dim = m * m + 1
    s = np.zeros((dim, dim), dtype=complex)
    s[0, 0] = 1.0
    # S^{ij}_g = D1[j, i], rows flattened over (i, j)
    s[1:, 0] = d1.T.reshape(m * m)
    # S^{ij}_{kl} = delta_ik D1[j,l] - 2 D2[j,k,l,i]
    s4 = (np.einsum("ik,jl->ijkl", np.eye(m), d1)
          - 2.0 * np.einsum("jkli->ijkl", d2))
    s[1:, 1:] = s4.reshape(m * m, m * m)
    s[0, 1:] = s[1:, 0].conj()
    return _symmetrized(s)


def _one_body_lr(t1: np.ndarray, rdms: RdmSet) -> np.ndarray:
    """LR matrix of sum_pr t1[p,r] a_p^ a_r from D1..D3."""
    m = rdms.mode_count
    d1, d2, d3 = rdms.d(1), rdms.d(2), rdms.d(3)
    dim = m * m + 1
    out = np.zeros((dim, dim), dtype=complex)
    out[0, 0] = np.einsum("pr,pr->", t1, d1)
    f_g = (np.einsum("ir,jr->ij", t1, d1)
           - 2.0 * np.einsum("pr,jpri->ij", t1, d2))
    out[1:, 0] = f_g.reshape(m * m)
    f4 = (-2.0 * np.einsum("ik,pr,jprl->ijkl", np.eye(m), t1, d2)
          + np.einsum("ik,jl->ijkl", t1, d1)
          + 2.0 * np.einsum("ir,jkrl->ijkl", t1, d2)
          - 2.0 * np.einsum("pk,jpli->ijkl", t1, d2)
          - 6.0 * np.einsum("pr,jkprli->ijkl", t1, d3))
    out[1:, 1:] = f4.reshape(m * m, m * m)
    # g-row from Hermiticity (the coefficient tensors used here are Hermitian)
    out[0, 1:] = np.conj(out[1:, 0])
    return out


def _two_body_lr(v: np.ndarray, rdms: RdmSet) -> np.ndarray:
    """LR matrix of sum_pqrs v[p,q,r,s] a_p^ a_q^ a_r a_s from D2..D4."""
    m = rdms.mode_count
    d2, d3, d4 = rdms.d(2), rdms.d(3), rdms.d(4)
    dim = m * m + 1
    eye = np.eye(m)
    out = np.zeros((dim, dim), dtype=complex)
    out[0, 0] = 2.0 * np.einsum("pqrs,pqsr->", v, d2)
    v_g = (2.0 * np.einsum("iqrs,jqsr->ij", v, d2)
           - 2.0 * np.einsum("pirs,jpsr->ij", v, d2)
           + 6.0 * np.einsum("pqrs,jpqsri->ij", v, d3))
    out[1:, 0] = v_g.reshape(m * m)
    v4 = (6.0 * np.einsum("ik,pqrs,jpqsrl->ijkl", eye, v, d3)
          + 2.0 * np.einsum("iqks,jqsl->ijkl", v, d2)
          - 2.0 * np.einsum("iqrk,jqrl->ijkl", v, d2)
          - 6.0 * np.einsum("iqrs,jkqsrl->ijkl", v, d3)
          - 2.0 * np.einsum("piks,jpsl->ijkl", v, d2)
          + 2.0 * np.einsum("pirk,jprl->ijkl", v, d2)
          + 6.0 * np.einsum("pirs,jkpsrl->ijkl", v, d3)
          + 6.0 * np.einsum("pqks,jpqsli->ijkl", v, d3)
          - 6.0 * np.einsum("pqrk,jpqrli->ijkl", v, d3)
          - 24.0 * np.einsum("pqrs,jkpqsrli->ijkl", v, d4))
    out[1:, 1:] = v4.reshape(m * m, m * m)
    out[0, 1:] = np.conj(out[1:, 0])
    return out


def operator_to_tensors(op: FermionOperator):
    """Split a rank<=2 operator into (core, t1, t2) coefficient tensors.

    The tensors satisfy op = core + sum t1[p,q] a_p^ a_q
    + 1/2 sum t2[p,q,r,s] a_p^ a_q^ a_r a_s after normal ordering.
    """
    m = op.mode_count
    core = 0.0 + 0.0j
    t1 = np.zeros((m, m), dtype=complex)
    t2 = np.zeros((m, m, m, m), dtype=complex)
    for seq, coeff in normal_order(op).terms.items():
        if len(seq) == 0:
            core += coeff
        elif len(seq) == 2:
            t1[seq[0][0], seq[1][0]] += coeff
        elif len(seq) == 4:
            p, q, r, s = (mode for mode, _ in seq)
            half = 0.5 * coeff
            t2[p, q, r, s] += half
            t2[q, p, r, s] -= half
            t2[p, q, s, r] -= half
            t2[q, p, s, r] += half
        else:
            raise ValueError("operator has rank above 2")
    return core, t1, t2


def build_lr_from_rdms(h1: np.ndarray, h2: np.ndarray, rdms: RdmSet,
                       core_energy: float = 0.0,
                       symmetry_ops: dict | None = None) -> SubspaceProblem:
    """Linear-response matrices contracted from stored 1..4-RDMs.

    h1/h2 follow the Hamiltonian assembly convention (the two-body part
    enters as 1/2 sum h2 a^ a^ a a). Rows are ordered [g] + [(i, j) pairs],
    matching fermionic_basis(order=1).
    """
    if rdms.max_k < 4:
        raise ValueError("the RDM route requires tensors through the 4-RDM")
    m = rdms.mode_count
    s_sub = _overlap_lr(rdms)
    h_sub = (core_energy * s_sub + _one_body_lr(np.asarray(h1, dtype=complex), rdms)
             + _two_body_lr(0.5 * np.asarray(h2, dtype=complex), rdms))
    h_sub = _symmetrized(h_sub)
    sym = {}
    for name, op in (symmetry_ops or {}).items():
        c0, t1, t2 = operator_to_tensors(op)
        mat = (c0 * s_sub + _one_body_lr(t1, rdms)
               + _two_body_lr(0.5 * t2, rdms))
        sym[name] = _symmetrized(mat)
    basis = fermionic_basis(m, 1)
    return SubspaceProblem(basis=basis, h_sub=h_sub, s_sub=s_sub, symmetry_subs=sym)


def solve_subspace(prob: SubspaceProblem,
                   metric_cutoff: float = QSE_METRIC_CUTOFF) -> Spectrum:
    """Generalized eigensolve of (h_sub, s_sub) with canonical orthogonalization."""
    return generalized_eigensolve(prob.h_sub, prob.s_sub, metric_cutoff)


def subspace_expectation(prob: SubspaceProblem, name: str, vec: np.ndarray) -> float:
    """<O> of a subspace vector, normalized by its metric norm."""
    o = prob.symmetry_subs[name]
    vec = np.asarray(vec, dtype=complex)
    norm = np.real(vec.conj() @ prob.s_sub @ vec)
    return float(np.real(vec.conj() @ o @ vec) / norm)


def project_symmetry(prob: SubspaceProblem, name: str, target: float,
                     window: float,
                     metric_cutoff: float = QSE_METRIC_CUTOFF) -> SubspaceProblem:
    """Restrict the problem to the span where <O> lies within window of target.

    Solves the generalized eigenproblem of (O_sub, s_sub), keeps eigenvectors
    with eigenvalue in [target - window, target + window], and congruence-
    transforms every stored matrix into that span.
    """
    if name not in prob.symmetry_subs:
        raise KeyError(f"no symmetry matrix named {name!r} in this problem")
    spec = generalized_eigensolve(prob.symmetry_subs[name], prob.s_sub, metric_cutoff)
    keep = np.abs(spec.eigenvalues - target) <= window
    if not np.any(keep):
        raise ValueError(f"no subspace states with <{name}> within {window} of {target}")
    c = spec.eigenvectors[:, keep]
    combo = c if prob.combo is None else prob.combo @ c
    sym = {k: _symmetrized(c.conj().T @ mat @ c) for k, mat in prob.symmetry_subs.items()}
    return SubspaceProblem(basis=prob.basis,
                           h_sub=_symmetrized(c.conj().T @ prob.h_sub @ c),
                           s_sub=_symmetrized(c.conj().T @ prob.s_sub @ c),
                           symmetry_subs=sym, combo=combo)


def _excitation_terms(m: int):
    """FermionOperator per LR row, ordered as _lr_index."""
    ops = [FermionOperator.identity(m)]
    for i in range(m):
        for j in range(m):
            ops.append(FermionOperator(m, {((i, True), (j, False)): 1.0}))
    return ops


def approximate_lr(method: str, h1: np.ndarray, h2: np.ndarray, rdms: RdmSet,
                   e_g: float, truncate: bool = False, core_energy: float = 0.0,
                   reconstruct_d3: bool = True) -> SubspaceProblem:
    """ZC / ZA approximations to the linear-response Hamiltonian matrix.

    ZC uses <(a_i^ a_j)^ [H, a_k^ a_l]> + e_g * S, whose normal-ordered form
    needs at most the 3-RDM; with truncate=True the 3-RDM is itself
    reconstructed from cumulant truncation (order-3 cumulant zeroed). ZA
    evaluates the plain product expression with the 3- and 4-RDMs
    reconstructed from lower orders (reconstruct_d3=False keeps an exact
    3-RDM and reconstructs only the 4-RDM). The overlap matrix always comes
    from the exact 1- and 2-RDMs.
    """
    method = method.upper()
    if method not in ("ZC", "ZA"):
        raise ValueError("method must be 'ZC' or 'ZA'")
    m = rdms.mode_count
    if method == "ZA":
        zero_above = 2 if reconstruct_d3 else 3
        if rdms.max_k < zero_above:
            raise ValueError(f"ZA needs RDMs through order {zero_above}")
        trimmed = RdmSet(mode_count=m, d1=rdms.d1, d2=rdms.d2,
                         d3=None if reconstruct_d3 else rdms.d3, d4=None)
        rec = reconstruct_rdms(cumulants_from_rdms(trimmed), zero_above)
        prob = build_lr_from_rdms(h1, h2, rec, core_energy=core_energy)
        # overlap from the exact tensors, not the reconstruction
        prob.s_sub = _overlap_lr(rdms)
        return prob

    # ZC
    if truncate:
        if rdms.max_k < 2:
            raise ValueError("ZC with truncation needs RDMs through order 2")
        base = RdmSet(mode_count=m, d1=rdms.d1, d2=rdms.d2)
        work = reconstruct_rdms(cumulants_from_rdms(base), 2)
    else:
        if rdms.max_k < 3:
            raise ValueError("ZC needs RDMs through the 3-RDM (or truncate=True)")
        work = rdms
    h_op = hamiltonian_from_tensors(np.asarray(h1, dtype=float),
                                    np.asarray(h2, dtype=float), 0.0)
    rows = _excitation_terms(m)
    adjoints = [op.adjoint() for op in rows]
    dim = len(rows)
    s_sub = _overlap_lr(rdms)
    h_sub = np.zeros((dim, dim), dtype=complex)
    comms = [normal_order(commutator(h_op, op)) for op in rows]
    for b, comm in enumerate(comms):
        if comm.rank() > 2:
            raise AssertionError("commutator with an excitation exceeded rank 2")
        for a, row_adj in enumerate(adjoints):
            expr = normal_order(row_adj * comm)
            if expr.rank() > 3:
                raise AssertionError("ZC expression exceeded rank 3 after "
                                     "normal ordering")
            h_sub[a, b] = expectation_from_rdms(expr, work)
    # e_g is the full <H> including any constant, so no separate core term:
    # <E_a^ H E_b> = <E_a^ [H0, E_b]> + e_g S for an eigenstate reference.
    h_sub += e_g * s_sub
    basis = fermionic_basis(m, 1)
    return SubspaceProblem(basis=basis, h_sub=_symmetrized(h_sub), s_sub=s_sub,
                           symmetry_subs={})
