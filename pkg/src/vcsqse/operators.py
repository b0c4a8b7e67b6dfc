"""Symbolic fermionic and Pauli-string operators with a Jordan-Wigner bridge.

Conventions used throughout the package:

* Spin-orbital ordering: mode 2p is spatial orbital p with spin alpha,
  mode 2p+1 the same orbital with spin beta.
* Occupation encoding: basis index b has mode i occupied iff bit i of b is
  set, so qubit 0 is the least significant bit and qubit |1> means occupied.
* Jordan-Wigner: a_p^dag -> (prod_{m<p} Z_m) (X_p - i Y_p)/2, which sends
  the creation operator to |1><0| on qubit p.
"""

from functools import lru_cache
from itertools import product

import numpy as np

# Coefficients below this magnitude are dropped after every simplification.
PRUNE_TOL = 1e-14

DENSE_QUBIT_LIMIT = 12

_PAULI_MATS = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "Y": np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    "Z": np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
}

# (a, b) -> (phase, a*b) for single-qubit Pauli letters.
_PAULI_MUL = {
    ("I", "I"): (1, "I"), ("I", "X"): (1, "X"), ("I", "Y"): (1, "Y"), ("I", "Z"): (1, "Z"),
    ("X", "I"): (1, "X"), ("X", "X"): (1, "I"), ("X", "Y"): (1j, "Z"), ("X", "Z"): (-1j, "Y"),
    ("Y", "I"): (1, "Y"), ("Y", "X"): (-1j, "Z"), ("Y", "Y"): (1, "I"), ("Y", "Z"): (1j, "X"),
    ("Z", "I"): (1, "Z"), ("Z", "X"): (1j, "Y"), ("Z", "Y"): (-1j, "X"), ("Z", "Z"): (1, "I"),
}


def _format_coeff(c: complex) -> str:
    re = format(float(np.real(c)), ".12g")
    im = float(np.imag(c))
    sign = "+" if im >= 0 or np.isnan(im) else "-"
    return f"({re}{sign}{format(abs(im), '.12g')}i)"


def parse_ladder(text: str) -> tuple:
    """Parse a ladder sequence like ``"0^ 1"`` into ((0, True), (1, False))."""
    seq = []
    for tok in text.split():
        if tok.endswith("^"):
            seq.append((int(tok[:-1]), True))
        else:
            seq.append((int(tok), False))
    return tuple(seq)


class FermionOperator:
    """Weighted sum of products of fermionic ladder operators on M modes.

    Terms are stored as a dict mapping tuples of (mode, is_dagger) pairs to
    complex coefficients. The empty tuple is the identity.
    """

    def __init__(self, mode_count: int, terms=None):
        if mode_count < 0:
            raise ValueError("mode_count must be non-negative")
        self.mode_count = int(mode_count)
        self.terms = {}
        if terms:
            for seq, coeff in terms.items():
                seq = tuple((int(m), bool(d)) for m, d in seq)
                for m, _ in seq:
                    if not 0 <= m < self.mode_count:
                        raise ValueError(f"mode {m} outside [0, {self.mode_count})")
                if abs(coeff) >= PRUNE_TOL:
                    self.terms[seq] = self.terms.get(seq, 0.0) + complex(coeff)
            self._prune()

    @classmethod
    def zero(cls, mode_count):
        return cls(mode_count)

    @classmethod
    def identity(cls, mode_count, coeff=1.0):
        return cls(mode_count, {(): coeff})

    @classmethod
    def from_term(cls, text: str, coeff, mode_count):
        return cls(mode_count, {parse_ladder(text): coeff})

    def _prune(self):
        self.terms = {s: c for s, c in self.terms.items() if abs(c) >= PRUNE_TOL}
        return self

    def _check_compatible(self, other):
        if not isinstance(other, FermionOperator):
            raise TypeError("expected a FermionOperator")
        if other.mode_count != self.mode_count:
            raise ValueError(
                f"mode_count mismatch: {self.mode_count} vs {other.mode_count}")

    def copy(self):
        out = FermionOperator(self.mode_count)
        out.terms = dict(self.terms)
        return out

    def __add__(self, other):
        if np.isscalar(other):
            other = FermionOperator.identity(self.mode_count, other)
        self._check_compatible(other)
        out = self.copy()
        for seq, c in other.terms.items():
            out.terms[seq] = out.terms.get(seq, 0.0) + c
        return out._prune()

    __radd__ = __add__

    def __sub__(self, other):
        return self + (other * -1.0)

    def __mul__(self, other):
        if np.isscalar(other):
            out = FermionOperator(self.mode_count)
            out.terms = {s: c * other for s, c in self.terms.items()}
            return out._prune()
        self._check_compatible(other)
        out = FermionOperator(self.mode_count)
        for s1, c1 in self.terms.items():
            for s2, c2 in other.terms.items():
                seq = s1 + s2
                out.terms[seq] = out.terms.get(seq, 0.0) + c1 * c2
        return out._prune()

    def __rmul__(self, other):
        if np.isscalar(other):
            return self * other
        return NotImplemented

    def adjoint(self):
        """Reverse every ladder sequence, flip daggers, conjugate coefficients."""
        out = FermionOperator(self.mode_count)
        for seq, c in self.terms.items():
            rev = tuple((m, not d) for m, d in reversed(seq))
            out.terms[rev] = out.terms.get(rev, 0.0) + np.conj(c)
        return out._prune()

    def rank(self) -> int:
        """max over terms of max(#creations, #annihilations)."""
        best = 0
        for seq in self.terms:
            ncr = sum(1 for _, d in seq if d)
            best = max(best, ncr, len(seq) - ncr)
        return best

    def is_zero(self) -> bool:
        return not self.terms

    def render(self) -> str:
        """Canonical text form: sorted terms, 12-significant-digit coefficients."""
        if not self.terms:
            return "(0+0i) []"
        parts = []
        for seq in sorted(self.terms, key=_ladder_sort_key):
            body = " ".join(f"{m}^" if d else f"{m}" for m, d in seq)
            parts.append(f"{_format_coeff(self.terms[seq])} [{body}]")
        return "\n".join(parts)

    __str__ = render

    def __repr__(self):
        return f"FermionOperator(M={self.mode_count}, {len(self.terms)} terms)"


def _ladder_sort_key(seq):
    return tuple((m, 0 if d else 1) for m, d in seq)


def add(a, b):
    return a + b


def multiply(a, b):
    return a * b


def adjoint(a):
    return a.adjoint()


def commutator(a: FermionOperator, b: FermionOperator) -> FermionOperator:
    return a * b - b * a


@lru_cache(maxsize=1 << 20)
def _normal_order_seq(seq):
    """Normal-order one ladder sequence.

    Returns a tuple of (coeff, sequence) pairs equivalent to the input as an
    operator, with all creations left of annihilations, creations ascending
    and annihilations descending in mode index.
    """
    out = {}
    stack = [(1.0, list(seq))]
    while stack:
        coeff, ops = stack.pop()
        pos = 0
        dead = False
        while pos < len(ops) - 1:
            (m1, d1), (m2, d2) = ops[pos], ops[pos + 1]
            if not d1 and d2:
                # a_m a_n^dag = delta_mn - a_n^dag a_m
                swapped = ops[:pos] + [(m2, d2), (m1, d1)] + ops[pos + 2:]
                if m1 == m2:
                    stack.append((coeff, ops[:pos] + ops[pos + 2:]))
                stack.append((-coeff, swapped))
                dead = True
                break
            if d1 == d2 and m1 == m2:
                dead = True  # repeated ladder operator annihilates the term
                break
            if d1 and d2 and m1 > m2:
                ops[pos], ops[pos + 1] = ops[pos + 1], ops[pos]
                coeff = -coeff
                pos = max(pos - 1, 0)
                continue
            if not d1 and not d2 and m1 < m2:
                ops[pos], ops[pos + 1] = ops[pos + 1], ops[pos]
                coeff = -coeff
                pos = max(pos - 1, 0)
                continue
            pos += 1
        if not dead:
            key = tuple(ops)
            out[key] = out.get(key, 0.0) + coeff
    return tuple((c, s) for s, c in out.items() if c != 0.0)


def normal_order(op: FermionOperator) -> FermionOperator:
    """Rewrite using anticommutation so creations precede annihilations."""
    out = FermionOperator(op.mode_count)
    for seq, coeff in op.terms.items():
        for factor, nseq in _normal_order_seq(seq):
            out.terms[nseq] = out.terms.get(nseq, 0.0) + coeff * factor
    return out._prune()


class PauliOperator:
    """Weighted sum of n-qubit Pauli strings.

    Strings are stored as length-n words over {I, X, Y, Z}; letter k acts on
    qubit k.
    """

    def __init__(self, qubit_count: int, terms=None):
        self.qubit_count = int(qubit_count)
        self.terms = {}
        if terms:
            for word, coeff in terms.items():
                if len(word) != self.qubit_count or any(ch not in "IXYZ" for ch in word):
                    raise ValueError(f"bad Pauli word {word!r} for n={self.qubit_count}")
                if abs(coeff) >= PRUNE_TOL:
                    self.terms[word] = self.terms.get(word, 0.0) + complex(coeff)
            self._prune()

    @classmethod
    def zero(cls, qubit_count):
        return cls(qubit_count)

    @classmethod
    def identity(cls, qubit_count, coeff=1.0):
        return cls(qubit_count, {"I" * qubit_count: coeff})

    @classmethod
    def from_letter(cls, letter, qubit, qubit_count, coeff=1.0):
        word = "".join(letter if q == qubit else "I" for q in range(qubit_count))
        return cls(qubit_count, {word: coeff})

    def _prune(self):
        self.terms = {w: c for w, c in self.terms.items() if abs(c) >= PRUNE_TOL}
        return self

    def _check_compatible(self, other):
        if not isinstance(other, PauliOperator):
            raise TypeError("expected a PauliOperator")
        if other.qubit_count != self.qubit_count:
            raise ValueError(
                f"qubit_count mismatch: {self.qubit_count} vs {other.qubit_count}")

    def copy(self):
        out = PauliOperator(self.qubit_count)
        out.terms = dict(self.terms)
        return out

    def __add__(self, other):
        if np.isscalar(other):
            other = PauliOperator.identity(self.qubit_count, other)
        self._check_compatible(other)
        out = self.copy()
        for w, c in other.terms.items():
            out.terms[w] = out.terms.get(w, 0.0) + c
        return out._prune()

    __radd__ = __add__

    def __sub__(self, other):
        return self + (other * -1.0)

    def __mul__(self, other):
        if np.isscalar(other):
            out = PauliOperator(self.qubit_count)
            out.terms = {w: c * other for w, c in self.terms.items()}
            return out._prune()
        self._check_compatible(other)
        out = PauliOperator(self.qubit_count)
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                phase, word = _word_product(w1, w2)
                coeff = c1 * c2 * phase
                out.terms[word] = out.terms.get(word, 0.0) + coeff
        return out._prune()

    def __rmul__(self, other):
        if np.isscalar(other):
            return self * other
        return NotImplemented

    def adjoint(self):
        out = PauliOperator(self.qubit_count)
        out.terms = {w: np.conj(c) for w, c in self.terms.items()}
        return out._prune()

    def is_zero(self):
        return not self.terms

    def render(self) -> str:
        if not self.terms:
            return "(0+0i) []"
        parts = []
        for word in sorted(self.terms, key=_pauli_sort_key):
            body = " ".join(f"{ch}{q}" for q, ch in enumerate(word) if ch != "I")
            parts.append(f"{_format_coeff(self.terms[word])} [{body}]")
        return "\n".join(parts)

    __str__ = render

    def __repr__(self):
        return f"PauliOperator(n={self.qubit_count}, {len(self.terms)} terms)"


def _pauli_sort_key(word):
    return tuple((q, ch) for q, ch in enumerate(word) if ch != "I")


@lru_cache(maxsize=1 << 18)
def _word_product(w1, w2):
    phase = 1.0 + 0.0j
    letters = []
    for a, b in zip(w1, w2):
        ph, c = _PAULI_MUL[(a, b)]
        phase *= ph
        letters.append(c)
    return phase, "".join(letters)


@lru_cache(maxsize=4096)
def _jw_ladder(mode, dagger, n):
    """Pauli form of a single ladder operator: (prod_{m<p} Z_m) sigma_p^{+/-}."""
    zs = "Z" * mode
    tail = "I" * (n - mode - 1)
    x_word = zs + "X" + tail
    y_word = zs + "Y" + tail
    y_coeff = -0.5j if dagger else 0.5j
    return ((x_word, 0.5), (y_word, y_coeff))


def jordan_wigner(op: FermionOperator) -> PauliOperator:
    """Map a fermionic operator to Pauli strings (algebra homomorphism)."""
    n = op.mode_count
    out = PauliOperator.zero(n)
    for seq, coeff in op.terms.items():
        acc = PauliOperator.identity(n, coeff)
        for mode, dagger in seq:
            factor = PauliOperator(n, dict(_jw_ladder(mode, dagger, n)))
            acc = acc * factor
        out = out + acc
    return out


def pauli_to_dense(op: PauliOperator) -> np.ndarray:
    """Dense 2^n x 2^n matrix; qubit 0 is the least significant bit."""
    n = op.qubit_count
    if n > DENSE_QUBIT_LIMIT:
        raise ValueError(f"qubit_count {n} exceeds dense limit {DENSE_QUBIT_LIMIT}")
    dim = 1 << n
    out = np.zeros((dim, dim), dtype=complex)
    for word, coeff in op.terms.items():
        mat = np.array([[coeff]])
        # Highest qubit first so bit i of the index is qubit i.
        for ch in reversed(word):
            mat = np.kron(mat, _PAULI_MATS[ch])
        out += mat
    return out


def fermion_to_dense(op: FermionOperator) -> np.ndarray:
    """Dense matrix by direct ladder-operator action on occupation states.

    Independent of the Jordan-Wigner route but uses the same phase
    convention: a_p picks up (-1)^(number of occupied modes below p).
    """
    m = op.mode_count
    if m > DENSE_QUBIT_LIMIT:
        raise ValueError(f"mode_count {m} exceeds dense limit {DENSE_QUBIT_LIMIT}")
    dim = 1 << m
    out = np.zeros((dim, dim), dtype=complex)
    for seq, coeff in op.terms.items():
        for b in range(dim):
            state, phase, alive = b, 1.0, True
            for mode, dagger in reversed(seq):
                occupied = (state >> mode) & 1
                if dagger == bool(occupied):
                    alive = False
                    break
                if (state & ((1 << mode) - 1)).bit_count() & 1:
                    phase = -phase
                state ^= 1 << mode
            if alive:
                out[state, b] += coeff * phase
    return out


def symmetry_operator(kind: str, mode_count: int) -> FermionOperator:
    """Total number, S_z, or S^2 in second quantization.

    Spinful operators assume the interleaved (alpha, beta) mode ordering and
    therefore need an even mode count. S^2 is realized as
    S_- S_+ + S_z (S_z + 1), expanded and normal-ordered.
    """
    m = mode_count
    if kind == "number":
        return FermionOperator(m, {((i, True), (i, False)): 1.0 for i in range(m)})
    if kind in ("sz", "s_squared") and m % 2:
        raise ValueError("spinful symmetry operators need an even mode count")
    if kind == "sz":
        terms = {}
        for p in range(m // 2):
            terms[((2 * p, True), (2 * p, False))] = 0.5
            terms[((2 * p + 1, True), (2 * p + 1, False))] = -0.5
        return FermionOperator(m, terms)
    if kind == "s_squared":
        s_plus = FermionOperator(m, {
            ((2 * p, True), (2 * p + 1, False)): 1.0 for p in range(m // 2)})
        s_minus = s_plus.adjoint()
        sz = symmetry_operator("sz", m)
        return normal_order(s_minus * s_plus + sz * sz + sz)
    raise ValueError(f"unknown symmetry operator kind {kind!r}")


def add_penalty(h: FermionOperator, o: FermionOperator, target: float,
                weight: float) -> FermionOperator:
    """Return H + weight * (O - target)^2, normal-ordered."""
    if weight < 0:
        raise ValueError("penalty weight must be non-negative")
    shifted = o - FermionOperator.identity(o.mode_count, target)
    return normal_order(h + weight * (shifted * shifted))
