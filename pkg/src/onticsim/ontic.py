"""Spectral decompositions of density matrices and conditional probabilities.

A density matrix's eigendecomposition is read as an exhaustive list of
possible configurations with their probabilities.  Entries are ordered by
descending probability with a deterministic lexicographic tie-break on
the phase-canonicalized eigenvectors, near-zero eigenvalues are kept but
flagged null so tables built from two decompositions stay square, and
near-coincident eigenvalues are reported as degeneracy groups because the
eigenbasis inside such a group is a numerically arbitrary choice.

Conditional probabilities link a parent-space decomposition at one time
to subsystem decompositions at a later time through a channel:

    p(i1..in | w) = Tr[ (P_1(i1) (x) ... (x) P_n(in)) ch(P_W(w)) ].

Each row is a probability distribution whenever the channel is trace
preserving and the subsystem projectors resolve the identity, which the
table type checks at construction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import tolerances as tol
from .channels import QuantumChannel, apply
from .errors import NotPSD, SpaceMismatch, ToleranceBreach
from .qcore import (
    DensityMatrix,
    HilbertSpace,
    PureState,
    _check_partition,
    _partial_trace_matrix,
    kron_all,
    permute_factors,
)

__all__ = [
    "OnticEntry",
    "OnticDecomposition",
    "ConditionalProbabilityTable",
    "ontic_decomposition",
    "conditional_probabilities",
    "single_system_conditional",
    "bayesian_propagation_check",
    "psd_pairing_check",
    "table_to_csv",
    "table_to_json",
]


@dataclass(frozen=True, eq=False)
class OnticEntry:
    """One eigenvalue/eigenvector pair of a density matrix."""

    probability: float
    state: PureState
    projector: np.ndarray
    null: bool


@dataclass(frozen=True, eq=False)
class OnticDecomposition:
    """Complete eigensystem of a density matrix, in canonical order."""

    source_space: HilbertSpace
    entries: tuple[OnticEntry, ...]
    degeneracy_groups: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        probs = self.probabilities
        total = probs.sum()
        if abs(total - 1.0) > tol.DERIVED:
            raise ToleranceBreach(f"probabilities sum to {total}")
        vecs = np.column_stack([e.state.amplitudes for e in self.entries])
        gram = vecs.conjugate().T @ vecs
        ortho = np.max(np.abs(gram - np.eye(len(self.entries))))
        if ortho > tol.DERIVED:
            raise ToleranceBreach(f"eigenvectors not orthonormal, defect {ortho}")
        for e in self.entries:
            drift = np.max(np.abs(e.projector - e.state.projector()))
            if drift > tol.CONSTRUCTION:
                raise ToleranceBreach(f"projector drifts from its state by {drift}")

    @property
    def probabilities(self) -> np.ndarray:
        return np.array([e.probability for e in self.entries])

    def reconstruct(self) -> np.ndarray:
        out = np.zeros((self.source_space.total_dim,) * 2, dtype=np.complex128)
        for e in self.entries:
            out += e.probability * e.projector
        return out


def _lex_key(vector: np.ndarray) -> tuple[float, ...]:
    return tuple(x for c in vector for x in (float(c.real), float(c.imag)))


def ontic_decomposition(
    rho: DensityMatrix, delta_deg: float = tol.DEGENERACY_GAP
) -> OnticDecomposition:
    """Eigendecompose a density matrix into its canonical configuration list."""
    evals, evecs = np.linalg.eigh(rho.matrix)
    probs = np.clip(evals, 0.0, 1.0)
    states = [PureState(rho.space, evecs[:, k]) for k in range(len(evals))]
    order = sorted(
        range(len(evals)),
        key=lambda k: (-probs[k], _lex_key(states[k].amplitudes)),
    )
    entries = tuple(
        OnticEntry(
            probability=float(probs[k]),
            state=states[k],
            projector=states[k].projector(),
            null=bool(probs[k] < tol.NULL_PROBABILITY),
        )
        for k in order
    )

    groups: list[tuple[int, ...]] = []
    start = 0
    for k in range(1, len(entries) + 1):
        if k == len(entries) or entries[start].probability - entries[k].probability >= delta_deg:
            if k - start > 1:
                groups.append(tuple(range(start, k)))
            start = k

    dec = OnticDecomposition(rho.space, entries, tuple(groups))
    drift = np.max(np.abs(dec.reconstruct() - rho.matrix))
    if drift > tol.DERIVED:
        raise ToleranceBreach(f"decomposition reconstructs source within {drift} only")
    return dec


# ---------------------------------------------------------------------------
# conditional probability tables
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ConditionalProbabilityTable:
    """Rows: parent configurations at t.  Columns: joint subsystem
    configurations at t'.  Values: conditional probabilities.

    Rows must be probability distributions; entries may undershoot zero
    only within the eigenvalue floor and are clamped to zero for output.
    `splits` records which factor labels each column index position refers
    to; synthetic kernels may leave it None.
    """

    parent_indices: tuple[int, ...]
    column_indices: tuple[tuple[int, ...], ...]
    values: np.ndarray
    splits: tuple[tuple[str, ...], ...] | None = None

    def __post_init__(self) -> None:
        vals = np.array(self.values, dtype=float)
        shape = (len(self.parent_indices), len(self.column_indices))
        if vals.shape != shape:
            raise SpaceMismatch(f"values shape {vals.shape}, expected {shape}")
        lo = float(vals.min())
        if lo < -tol.DERIVED:
            raise ToleranceBreach(f"conditional probability {lo} below floor")
        sums = vals.sum(axis=1)
        worst = float(np.max(np.abs(sums - 1.0)))
        if worst > tol.ROW_SUM:
            raise ToleranceBreach(f"row sum deviates from 1 by {worst}")
        vals = np.clip(vals, 0.0, None)
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "parent_indices", tuple(int(i) for i in self.parent_indices))
        object.__setattr__(
            self, "column_indices", tuple(tuple(int(i) for i in c) for c in self.column_indices)
        )
        if self.splits is not None:
            object.__setattr__(
                self, "splits", tuple(tuple(str(l) for l in g) for g in self.splits)
            )


def _conditional_core(
    ch_w: QuantumChannel,
    rho_w_t: DensityMatrix,
    splits: Sequence[Sequence[str]],
    delta_deg: float,
):
    if rho_w_t.space != ch_w.in_space:
        raise SpaceMismatch(
            f"state on {rho_w_t.space.labels}, channel takes {ch_w.in_space.labels}"
        )
    split_labels = [tuple(g) for g in splits]
    _check_partition(rho_w_t.space, split_labels)
    _check_partition(ch_w.out_space, split_labels)

    parent = ontic_decomposition(rho_w_t, delta_deg)
    evolved = apply(ch_w, rho_w_t)

    out_space = ch_w.out_space
    out_dims = out_space.dims
    reduced_decs: list[OnticDecomposition] = []
    for group in split_labels:
        axes = sorted(out_space.axis(label) for label in group)
        if len(axes) == len(out_space.factors):
            reduced = evolved
        else:
            sub = _partial_trace_matrix(evolved.matrix, out_dims, axes)
            reduced = DensityMatrix(out_space.subspace(group), sub)
        reduced_decs.append(ontic_decomposition(reduced, delta_deg))

    # factor order of the assembled projectors: split groups concatenated,
    # each group in parent-relative order; permute back to the parent order
    concat_labels = [l for dec in reduced_decs for l in dec.source_space.labels]
    needs_perm = list(concat_labels) != list(out_space.labels)
    concat_space = HilbertSpace(
        tuple((l, out_space.dim_of(l)) for l in concat_labels)
    )

    evolved_projectors = [
        sum(k @ e.projector @ k.conjugate().T for k in ch_w.kraus)
        for e in parent.entries
    ]

    column_indices = tuple(
        itertools.product(*[range(len(dec.entries)) for dec in reduced_decs])
    )
    columns = []
    for combo in column_indices:
        big = kron_all([reduced_decs[g].entries[i].projector for g, i in enumerate(combo)])
        if needs_perm:
            big, _ = permute_factors(big, concat_space, out_space.labels)
        columns.append(big)

    col_stack = np.stack(columns)
    row_stack = np.stack(evolved_projectors)
    values = np.real(np.einsum("cij,rji->rc", col_stack, row_stack))

    table = ConditionalProbabilityTable(
        parent_indices=tuple(range(len(parent.entries))),
        column_indices=column_indices,
        values=values,
        splits=tuple(split_labels),
    )
    return table, parent, reduced_decs, evolved


def conditional_probabilities(
    ch_w: QuantumChannel,
    rho_w_t: DensityMatrix,
    splits: Sequence[Sequence[str]],
    delta_deg: float = tol.DEGENERACY_GAP,
) -> ConditionalProbabilityTable:
    """Joint subsystem configuration probabilities conditioned on the parent.

    The parent state at t is decomposed, pushed through the channel, and
    projected onto the eigenconfigurations of each subsystem's reduced
    state at t'.  Null parent configurations get rows too: they are valid
    conditioning events of probability zero.
    """
    table, _, _, _ = _conditional_core(ch_w, rho_w_t, splits, delta_deg)
    return table


def single_system_conditional(
    ch: QuantumChannel,
    rho_t: DensityMatrix,
    delta_deg: float = tol.DEGENERACY_GAP,
) -> ConditionalProbabilityTable:
    """Conditional table for the undivided system, linking t to t'."""
    table, _, _, _ = _conditional_core(ch, rho_t, [list(rho_t.space.labels)], delta_deg)
    return table


def bayesian_propagation_check(
    ch_w: QuantumChannel,
    rho_w_t: DensityMatrix,
    splits: Sequence[Sequence[str]],
    delta_deg: float = tol.DEGENERACY_GAP,
) -> float:
    """Largest gap between direct and chained first-subsystem probabilities.

    Direct route: project the evolved parent state onto the first
    subsystem's eigenconfigurations.  Chained route: sum the conditional
    table against the parent probabilities and marginalize the other
    subsystems.  The two must agree for any trace-preserving channel.
    """
    table, parent, reduced_decs, evolved = _conditional_core(
        ch_w, rho_w_t, splits, delta_deg
    )
    first = reduced_decs[0]
    first_labels = first.source_space.labels
    out_space = evolved.space

    worst = 0.0
    parent_probs = parent.probabilities
    for i1, entry in enumerate(first.entries):
        if len(first_labels) == len(out_space.labels):
            big = entry.projector
            if list(first_labels) != list(out_space.labels):
                big, _ = permute_factors(big, first.source_space, out_space.labels)
        else:
            rest = [l for l in out_space.labels if l not in first_labels]
            rest_dim = int(np.prod([out_space.dim_of(l) for l in rest]))
            big = np.kron(entry.projector, np.eye(rest_dim))
            concat = first.source_space.tensor(out_space.subspace(rest))
            big, _ = permute_factors(big, concat, out_space.labels)
        direct = float(np.real(np.trace(big @ evolved.matrix)))

        mask = [c[0] == i1 for c in table.column_indices]
        chained = float(parent_probs @ table.values[:, mask].sum(axis=1))
        worst = max(worst, abs(direct - chained))
    return worst


def psd_pairing_check(a: np.ndarray, b: np.ndarray) -> float:
    """Tr[a b] for two PSD matrices; the pairing every table value reduces to."""
    for name, m in (("first", a), ("second", b)):
        arr = np.asarray(m, dtype=np.complex128)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise NotPSD(f"{name} argument is not square")
        if np.max(np.abs(arr - arr.conjugate().T)) > tol.DERIVED:
            raise NotPSD(f"{name} argument is not Hermitian")
        if float(np.linalg.eigvalsh(arr)[0]) < tol.EIG_FLOOR:
            raise NotPSD(f"{name} argument has an eigenvalue below {tol.EIG_FLOOR}")
    return float(np.real(np.trace(np.asarray(a) @ np.asarray(b))))


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def table_to_csv(table: ConditionalProbabilityTable) -> str:
    """Rows of `w,i1,...,in,p`, one line per table cell."""
    n = len(table.column_indices[0])
    header = "w," + ",".join(f"i{k + 1}" for k in range(n)) + ",p"
    lines = [header]
    for r, w in enumerate(table.parent_indices):
        for c, combo in enumerate(table.column_indices):
            cells = [str(w), *[str(i) for i in combo], repr(float(table.values[r, c]))]
            lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def table_to_json(table: ConditionalProbabilityTable) -> dict:
    return {
        "parent_indices": list(table.parent_indices),
        "splits": None if table.splits is None else [list(g) for g in table.splits],
        "column_indices": [list(c) for c in table.column_indices],
        "values": [[float(x) for x in row] for row in table.values],
    }
