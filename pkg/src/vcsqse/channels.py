"""Kraus-operator noise channels and register lifting.

Single-qubit channels are parameterized by the dimensionless ratios
tp_over_t1 and tp_over_t2 (state-preparation time over decay and coherence
times). The composite amplitude+phase channel is built so its action on a
qubit is exactly

    [[rho00 + (1 - e^{-Tp/T1}) rho11,  e^{-Tp/T2} rho01],
     [e^{-Tp/T2} rho10,                e^{-Tp/T1} rho11]]

which requires the pure-dephasing rate 1/T2 - 1/(2 T1) to be non-negative
(T2 <= 2 T1); unphysical ratio pairs are rejected. The depolarizing time
constant is tied to tp_over_t2 so a single ratio controls each channel.
"""

from dataclasses import dataclass
from itertools import product
from math import exp, sqrt

import numpy as np

COMPLETENESS_TOL = 1e-12
LIFT_KRAUS_LIMIT = 65536
LIFT_QUBIT_LIMIT = 12

_I2 = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)

CHANNEL_KINDS = ("dephasing", "amplitude_phase", "depolarizing")


@dataclass(frozen=True)
class ChannelSpec:
    kind: str
    tp_over_t1: float = 0.0
    tp_over_t2: float = 0.0

    def __post_init__(self):
        if self.kind not in CHANNEL_KINDS:
            raise ValueError(f"unknown channel kind {self.kind!r}")
        for name in ("tp_over_t1", "tp_over_t2"):
            value = getattr(self, name)
            if not np.isfinite(value) or value < 0:
                raise ValueError(f"{name} must be finite and non-negative")


class KrausChannel:
    """Completeness-checked list of Kraus matrices defining a CPTP map."""

    def __init__(self, kraus_ops, label: str = ""):
        ops = [np.asarray(k, dtype=complex) for k in kraus_ops]
        if not ops:
            raise ValueError("a channel needs at least one Kraus operator")
        dim = ops[0].shape[0]
        for k in ops:
            if k.shape != (dim, dim):
                raise ValueError("all Kraus operators must be square with equal dims")
        total = sum(k.conj().T @ k for k in ops)
        if np.abs(total - np.eye(dim)).max() > COMPLETENESS_TOL:
            raise ValueError("Kraus completeness sum K^dag K = I violated")
        self.kraus_ops = ops
        self.label = label
        self.dim = dim

    def __repr__(self):
        return f"KrausChannel({self.label or 'unnamed'}, dim={self.dim}, {len(self.kraus_ops)} ops)"


def identity_channel(dim: int = 2) -> KrausChannel:
    return KrausChannel([np.eye(dim, dtype=complex)], label="identity")


def _dephasing(p_tilde: float, label: str) -> KrausChannel:
    return KrausChannel(
        [sqrt(1.0 - p_tilde / 2.0) * _I2, sqrt(p_tilde / 2.0) * _Z], label=label)


def _amplitude_damping(p: float) -> KrausChannel:
    k0 = np.array([[1.0, 0.0], [0.0, sqrt(1.0 - p)]], dtype=complex)
    k1 = np.array([[0.0, sqrt(p)], [0.0, 0.0]], dtype=complex)
    return KrausChannel([k0, k1], label="amplitude")


def single_qubit_channel(spec: ChannelSpec) -> KrausChannel:
    """Kraus operators for one qubit per the channel's closed form."""
    r1, r2 = spec.tp_over_t1, spec.tp_over_t2
    if spec.kind == "dephasing":
        return _dephasing(1.0 - exp(-r2), label="dephasing")
    if spec.kind == "depolarizing":
        p = 1.0 - exp(-r2)
        return KrausChannel(
            [sqrt(1.0 - p) * _I2, sqrt(p / 3.0) * _X, sqrt(p / 3.0) * _Y,
             sqrt(p / 3.0) * _Z], label="depolarizing")
    # amplitude_phase: dephase at the pure-dephasing rate 1/T2 - 1/(2 T1) so
    # the composite coherence decay is exactly e^{-Tp/T2}.
    phi = r2 - 0.5 * r1
    if phi < -1e-12:
        raise ValueError(
            "amplitude_phase needs tp_over_t2 >= tp_over_t1 / 2 (i.e. T2 <= 2 T1); "
            f"got tp_over_t1={r1}, tp_over_t2={r2}")
    p_tilde = 1.0 - exp(-max(phi, 0.0))
    return compose(_amplitude_damping(1.0 - exp(-r1)), _dephasing(p_tilde, "phase"),
                   label="amplitude_phase")


def compose(a: KrausChannel, b: KrausChannel, label: str = "") -> KrausChannel:
    """Channel applying a first then b; Kraus set {B_j A_i}."""
    if a.dim != b.dim:
        raise ValueError(f"channel dims differ: {a.dim} vs {b.dim}")
    ops = [kb @ ka for ka, kb in product(a.kraus_ops, b.kraus_ops)]
    return KrausChannel(ops, label=label or f"{b.label}*{a.label}")


def lift_to_register(per_qubit: KrausChannel, n: int) -> KrausChannel:
    """Tensor the single-qubit channel onto each of n qubits independently."""
    if per_qubit.dim != 2:
        raise ValueError("lift_to_register expects a single-qubit channel")
    if n < 1 or n > LIFT_QUBIT_LIMIT:
        raise ValueError(f"register size {n} outside [1, {LIFT_QUBIT_LIMIT}]")
    if len(per_qubit.kraus_ops) ** n > LIFT_KRAUS_LIMIT:
        raise ValueError(
            f"{len(per_qubit.kraus_ops)}^{n} Kraus operators exceed the "
            f"{LIFT_KRAUS_LIMIT} limit")
    ops = []
    # Factor for qubit n-1 first so bit i of the index is qubit i.
    for combo in product(per_qubit.kraus_ops, repeat=n):
        mat = np.array([[1.0 + 0.0j]])
        for k in reversed(combo):
            mat = np.kron(mat, k)
        ops.append(mat)
    return KrausChannel(ops, label=f"{per_qubit.label}^x{n}")


def apply_channel_factorwise(per_qubit: KrausChannel, rho: np.ndarray,
                             check: bool = True) -> np.ndarray:
    """Apply a single-qubit channel to every qubit of an n-qubit state.

    Equivalent to apply_channel(lift_to_register(per_qubit, n), rho) but
    sweeps the register one qubit at a time (n * |K| matrix products instead
    of |K|^n), so it works for registers beyond the lifted-Kraus guard.
    """
    if per_qubit.dim != 2:
        raise ValueError("factor-wise application expects a single-qubit channel")
    rho = np.asarray(rho, dtype=complex)
    dim = rho.shape[0]
    n = dim.bit_length() - 1
    if rho.shape != (dim, dim) or dim != 1 << n:
        raise ValueError(f"state shape {rho.shape} is not an n-qubit register")
    if check:
        _check_density(rho)
    for q in range(n):
        left = np.eye(1 << (n - q - 1), dtype=complex)
        right = np.eye(1 << q, dtype=complex)
        out = np.zeros_like(rho)
        for k in per_qubit.kraus_ops:
            full = np.kron(left, np.kron(k, right))
            out += full @ rho @ full.conj().T
        rho = out
    return rho


def _check_density(rho):
    if np.abs(rho - rho.conj().T).max() > 1e-10:
        raise ValueError("state is not Hermitian")
    if abs(np.trace(rho) - 1.0) > 1e-10:
        raise ValueError("state is not trace-one")
    if np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0] < -1e-10:
        raise ValueError("state is not positive semidefinite")


def apply_channel(ch: KrausChannel, rho: np.ndarray, check: bool = True) -> np.ndarray:
    """rho -> sum_i K_i rho K_i^dag."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (ch.dim, ch.dim):
        raise ValueError(f"state dim {rho.shape} does not match channel dim {ch.dim}")
    if check:
        _check_density(rho)
    out = np.zeros_like(rho)
    for k in ch.kraus_ops:
        out += k @ rho @ k.conj().T
    return out


def channel_spec_tokens(spec: ChannelSpec) -> dict:
    """Flat key/value form used by the experiment config files."""
    short = {"dephasing": "dephasing", "amplitude_phase": "ap", "depolarizing": "depol"}
    return {"channel": short[spec.kind], "tp_over_t1": spec.tp_over_t1,
            "tp_over_t2": spec.tp_over_t2}


def channel_kind_from_token(token: str) -> str:
    aliases = {"dephasing": "dephasing", "ph": "dephasing",
               "ap": "amplitude_phase", "amplitude_phase": "amplitude_phase",
               "depol": "depolarizing", "depolarizing": "depolarizing"}
    if token not in aliases:
        raise ValueError(f"unknown channel token {token!r}")
    return aliases[token]
