"""CPTP channels in Kraus form, built directly or by unitary dilation.

The dilation construction is the workhorse: given a unitary on a parent
space and the initial state of the environment factors, the reduced
dynamics of the remaining factors is completely positive and trace
preserving, with one Kraus operator per pair of environment
eigendirections,

    K[e, e'] = sqrt(p_e) <e'| U |e>,

where the bra and ket act on the environment indices only and p_e are the
eigenvalues of the initial environment state.  Pairs whose Kraus operator
falls below the pruning norm are dropped; they contribute nothing to the
map.  Kraus decompositions are not unique, so channel equality is decided
on Choi matrices, never on Kraus lists.

Composability of such reduced maps is not automatic.  semigroup_defect
measures how far a two-segment composition (with the environment re-fed
its reduced state at the cut, correlations deliberately discarded) lands
from the single-segment map.  The defect vanishes for factorized
evolutions and for evolutions that return the parent to a product state
at the cut, and is generically large for entangling couplings.
"""

from __future__ import annotations

from dataclasses import InitVar, dataclass
from typing import Callable, Sequence

import numpy as np

from . import tolerances as tol
from .errors import BadInterval, NotUnitary, SpaceMismatch, ToleranceBreach
from .qcore import (
    DensityMatrix,
    HilbertSpace,
    _check_partition,
    matrix_from_json,
    matrix_to_json,
    partial_trace,
    permute_factors,
    space_from_json,
    space_to_json,
    tensor,
    trace_distance,
)

__all__ = [
    "UnitaryOperator",
    "QuantumChannel",
    "CPTPReport",
    "unitary_channel",
    "dilation_channel",
    "apply",
    "compose",
    "choi_matrix",
    "verify_cptp",
    "channel_distance",
    "semigroup_defect",
    "UnitaryFamily",
    "factorized_family",
    "swap_refactorizing_family",
    "entangling_cnot_family",
    "SWAP_REFACTOR_TIME",
    "channel_to_json",
    "channel_from_json",
    "PAULI_X",
    "PAULI_Y",
    "PAULI_Z",
    "HADAMARD",
    "CNOT",
    "SWAP",
]


PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2)

# two-qubit gates on a (control, target) ordering of factors
CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=np.complex128
)
SWAP = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=np.complex128
)


@dataclass(frozen=True, eq=False)
class UnitaryOperator:
    """Unitary matrix on a labeled space."""

    space: HilbertSpace
    matrix: np.ndarray

    def __post_init__(self) -> None:
        d = self.space.total_dim
        arr = np.array(self.matrix, dtype=np.complex128)
        if arr.shape != (d, d):
            raise SpaceMismatch(f"unitary has shape {arr.shape}, expected ({d}, {d})")
        defect = np.max(np.abs(arr.conjugate().T @ arr - np.eye(d)))
        if defect > tol.CONSTRUCTION:
            raise NotUnitary(f"U†U deviates from identity by {defect}")
        arr.setflags(write=False)
        object.__setattr__(self, "matrix", arr)


@dataclass(frozen=True, eq=False)
class QuantumChannel:
    """Trace-preserving completely positive map as a pruned Kraus family.

    Construction checks Kraus completeness against the identity and the
    positivity of the Choi matrix.  Pass validate=False only to wrap raw
    data for diagnosis by verify_cptp.
    """

    in_space: HilbertSpace
    out_space: HilbertSpace
    kraus: tuple[np.ndarray, ...]
    validate: InitVar[bool] = True

    def __post_init__(self, validate: bool) -> None:
        din, dout = self.in_space.total_dim, self.out_space.total_dim
        ops = []
        for k in self.kraus:
            arr = np.array(k, dtype=np.complex128)
            if arr.shape != (dout, din):
                raise SpaceMismatch(
                    f"Kraus operator has shape {arr.shape}, expected ({dout}, {din})"
                )
            arr.setflags(write=False)
            ops.append(arr)
        if not ops:
            raise SpaceMismatch("a channel needs at least one Kraus operator")
        object.__setattr__(self, "kraus", tuple(ops))
        if validate:
            report = verify_cptp(self)
            if not report.trace_preserving:
                raise ToleranceBreach(
                    f"Kraus completeness defect {report.completeness_defect}"
                )
            if not report.completely_positive:
                raise ToleranceBreach(
                    f"Choi eigenvalue {report.min_choi_eigenvalue} below floor"
                )


@dataclass(frozen=True)
class CPTPReport:
    trace_preserving: bool
    completely_positive: bool
    min_choi_eigenvalue: float
    completeness_defect: float


def unitary_channel(u: UnitaryOperator) -> QuantumChannel:
    return QuantumChannel(u.space, u.space, (u.matrix,))


def _prune(ops: Sequence[np.ndarray]) -> list[np.ndarray]:
    kept = [k for k in ops if np.linalg.norm(k) >= tol.KRAUS_PRUNE]
    return kept if kept else [ops[0]]


def dilation_channel(
    u_w: UnitaryOperator,
    rho_e0: DensityMatrix,
    split: tuple[Sequence[str], Sequence[str]],
) -> QuantumChannel:
    """Reduced dynamics of the first group under a parent unitary.

    `split` names (system labels, environment labels); together they must
    partition the parent factors.  `rho_e0` is the initial environment
    state and must live on the environment factors in their parent order.
    The channel acts on the system subspace, also in parent order.
    """
    s_labels, e_labels = [list(g) for g in split]
    _check_partition(u_w.space, [s_labels, e_labels])
    s_space = u_w.space.subspace(s_labels)
    e_space = u_w.space.subspace(e_labels)
    if rho_e0.space != e_space:
        raise SpaceMismatch(
            f"environment state lives on {rho_e0.space.factors}, expected {e_space.factors}"
        )
    ds, de = s_space.total_dim, e_space.total_dim
    u_mat, _ = permute_factors(
        u_w.matrix, u_w.space, list(s_space.labels) + list(e_space.labels)
    )
    u4 = u_mat.reshape(ds, de, ds, de)
    p_env, vecs = np.linalg.eigh(rho_e0.matrix)
    ops: list[np.ndarray] = []
    for e in range(de):
        p = float(p_env[e])
        if p <= 0.0:
            continue
        # amp[a, f, b] = sum_g U[(a, f), (b, g)] <g|e>
        amp = np.einsum("afbg,g->afb", u4, vecs[:, e])
        # one operator per output environment direction e'
        blocks = np.einsum("afb,fy->yab", amp, vecs.conjugate())
        ops.extend(np.sqrt(p) * blocks[y] for y in range(de))
    return QuantumChannel(s_space, s_space, tuple(_prune(ops)))


def apply(ch: QuantumChannel, rho: DensityMatrix) -> DensityMatrix:
    if rho.space != ch.in_space:
        raise SpaceMismatch(f"state on {rho.space.labels}, channel takes {ch.in_space.labels}")
    out = np.zeros((ch.out_space.total_dim,) * 2, dtype=np.complex128)
    for k in ch.kraus:
        out += k @ rho.matrix @ k.conjugate().T
    return DensityMatrix(ch.out_space, out)


def compose(later: QuantumChannel, earlier: QuantumChannel) -> QuantumChannel:
    """Channel running `earlier` first, then `later`."""
    if earlier.out_space != later.in_space:
        raise SpaceMismatch(
            f"cannot feed {earlier.out_space.labels} into {later.in_space.labels}"
        )
    products = [l @ e for l in later.kraus for e in earlier.kraus]
    return QuantumChannel(earlier.in_space, later.out_space, tuple(_prune(products)))


def choi_matrix(ch: QuantumChannel) -> np.ndarray:
    """Sum over input basis pairs |i><j| (x) ch(|i><j|), assembled per Kraus term."""
    din, dout = ch.in_space.total_dim, ch.out_space.total_dim
    choi = np.zeros((din * dout, din * dout), dtype=np.complex128)
    for k in ch.kraus:
        v = k.flatten(order="F")
        choi += np.outer(v, v.conjugate())
    return choi


def verify_cptp(ch: QuantumChannel) -> CPTPReport:
    """Diagnostic report; never raises, even for badly broken Kraus sets."""
    din = ch.in_space.total_dim
    gram = sum(k.conjugate().T @ k for k in ch.kraus)
    defect = float(np.max(np.abs(gram - np.eye(din))))
    lo = float(np.linalg.eigvalsh(choi_matrix(ch))[0])
    return CPTPReport(
        trace_preserving=defect <= tol.DERIVED,
        completely_positive=lo >= tol.EIG_FLOOR,
        min_choi_eigenvalue=lo,
        completeness_defect=defect,
    )


def channel_distance(a: QuantumChannel, b: QuantumChannel) -> float:
    """Largest entry of the Choi-matrix difference; zero iff the maps agree."""
    if a.in_space != b.in_space or a.out_space != b.out_space:
        raise SpaceMismatch("channels act on different spaces")
    return float(np.max(np.abs(choi_matrix(a) - choi_matrix(b))))


# ---------------------------------------------------------------------------
# time-parameterized unitaries and the composability probe
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class UnitaryFamily:
    """exp(-i H t) for a fixed Hermitian generator, via eigendecomposition.

    Diagonalizing once keeps every U(t) unitary to rounding and avoids
    integrator error entirely.
    """

    space: HilbertSpace
    generator: np.ndarray

    def __post_init__(self) -> None:
        d = self.space.total_dim
        arr = np.array(self.generator, dtype=np.complex128)
        if arr.shape != (d, d):
            raise SpaceMismatch(f"generator has shape {arr.shape}, expected ({d}, {d})")
        herm = np.max(np.abs(arr - arr.conjugate().T))
        if herm > tol.CONSTRUCTION:
            raise ToleranceBreach(f"generator Hermiticity defect {herm}")
        arr.setflags(write=False)
        object.__setattr__(self, "generator", arr)
        evals, evecs = np.linalg.eigh(arr)
        object.__setattr__(self, "_evals", evals)
        object.__setattr__(self, "_evecs", evecs)

    def at(self, t: float) -> UnitaryOperator:
        phases = np.exp(-1j * self._evals * t)
        u = (self._evecs * phases) @ self._evecs.conjugate().T
        return UnitaryOperator(self.space, u)

    def __call__(self, t: float) -> UnitaryOperator:
        return self.at(t)


def semigroup_defect(
    u_w_family: Callable[[float], UnitaryOperator],
    rho_e0: DensityMatrix,
    split: tuple[Sequence[str], Sequence[str]],
    t1: float,
    t2: float,
    probe: DensityMatrix,
) -> float:
    """Trace distance between one-segment and two-segment reduced dynamics.

    The second segment is dilated with the environment's reduced state at
    the cut, so any system-environment correlations built up during the
    first segment are thrown away.  That discard is exactly what the
    defect measures.
    """
    if not 0.0 < t1 < t2:
        raise BadInterval(f"need 0 < t1 < t2, got t1={t1}, t2={t2}")
    u1 = u_w_family(t1)
    u2 = u_w_family(t2)
    s_labels, e_labels = [list(g) for g in split]
    seg10 = dilation_channel(u1, rho_e0, split)
    seg20 = dilation_channel(u2, rho_e0, split)

    prod = tensor(probe, rho_e0)
    aligned, _ = permute_factors(prod.matrix, prod.space, u1.space.labels)
    evolved = u1.matrix @ aligned @ u1.matrix.conjugate().T
    rho_w_t1 = DensityMatrix(u1.space, evolved)
    rho_e_t1 = partial_trace(rho_w_t1, e_labels)

    u_seg = UnitaryOperator(u1.space, u2.matrix @ u1.matrix.conjugate().T)
    seg21 = dilation_channel(u_seg, rho_e_t1, split)

    lhs = apply(compose(seg21, seg10), probe)
    rhs = apply(seg20, probe)
    return trace_distance(lhs, rhs)


# the SWAP generator satisfies exp(-i (pi/2) SWAP) = -i SWAP, so at this
# time the parent state is an exact product again and composability holds
SWAP_REFACTOR_TIME = np.pi / 2


def _two_qubit_space(s_label: str = "s", e_label: str = "e") -> HilbertSpace:
    return HilbertSpace.of((s_label, 2), (e_label, 2))


def factorized_family(s_label: str = "s", e_label: str = "e") -> UnitaryFamily:
    """Non-interacting generator: Pauli-Z on the system, Pauli-X on the environment."""
    h = np.kron(PAULI_Z, np.eye(2)) + np.kron(np.eye(2), PAULI_X)
    return UnitaryFamily(_two_qubit_space(s_label, e_label), h)


def swap_refactorizing_family(s_label: str = "s", e_label: str = "e") -> UnitaryFamily:
    """SWAP generator; the parent refactorizes exactly at SWAP_REFACTOR_TIME."""
    return UnitaryFamily(_two_qubit_space(s_label, e_label), SWAP)


def entangling_cnot_family(s_label: str = "s", e_label: str = "e") -> UnitaryFamily:
    """CNOT generator (system controls environment); entangles at generic times."""
    return UnitaryFamily(_two_qubit_space(s_label, e_label), CNOT)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def channel_to_json(ch: QuantumChannel) -> dict:
    return {
        "in_space": space_to_json(ch.in_space),
        "out_space": space_to_json(ch.out_space),
        "kraus": [matrix_to_json(k) for k in ch.kraus],
    }


def channel_from_json(payload: dict, validate: bool = True) -> QuantumChannel:
    return QuantumChannel(
        space_from_json(payload["in_space"]),
        space_from_json(payload["out_space"]),
        tuple(matrix_from_json(k) for k in payload["kraus"]),
        validate=validate,
    )
