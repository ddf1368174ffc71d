"""Dense state-vector engine for small labeled composite systems.

States are values: every operation returns a new StateVector and leaves its
input untouched. Besides the amplitudes, each state carries a loss ledger
mapping a cause tag to accumulated probability, so that

    norm()**2 + ledger total == 1

holds through unitaries, absorptions and measurements. Absorbed weight moves
into the ledger; a measurement renormalizes its post-state back to the
pre-measurement norm so the conservation identity survives post-selection.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

CONSERVATION_TOL = 1e-9
UNITARITY_TOL = 1e-12

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
IDENTITY_2 = np.eye(2, dtype=complex)


def rotation(theta: float) -> np.ndarray:
    """Real rotation matrix [[cos, -sin], [sin, cos]]."""
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]], dtype=complex)


@dataclass(frozen=True)
class SubsystemSpec:
    """A labeled finite-dimensional subsystem."""

    label: str
    dimension: int

    def __post_init__(self) -> None:
        if self.dimension < 2:
            raise ValueError(f"subsystem {self.label!r} needs dimension >= 2")


class StateVector:
    """Sub-normalized complex amplitudes over an ordered composite.

    The flat amplitude array uses row-major order over the subsystem axes in
    the order given at construction. The basis order is fixed for the life of
    the state; use :func:`reorder` to obtain a relabeled view.
    """

    __slots__ = ("subsystems", "amplitudes", "loss_ledger", "_axes")

    def __init__(
        self,
        subsystems: Sequence[SubsystemSpec],
        amplitudes: np.ndarray | Sequence[complex],
        loss_ledger: Mapping[str, float] | None = None,
        check: bool = True,
    ) -> None:
        subs = tuple(subsystems)
        labels = [sub.label for sub in subs]
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate subsystem labels in {labels}")
        amps = np.array(amplitudes, dtype=complex).reshape(-1)
        size = int(np.prod([sub.dimension for sub in subs]))
        if amps.size != size:
            raise ValueError(f"expected {size} amplitudes, got {amps.size}")
        ledger = {str(k): float(v) for k, v in dict(loss_ledger or {}).items()}
        if check:
            if any(v < -CONSERVATION_TOL or v > 1 + CONSERVATION_TOL for v in ledger.values()):
                raise ValueError(f"ledger entries must lie in [0, 1]: {ledger}")
            total = float(np.sum(np.abs(amps) ** 2)) + sum(ledger.values())
            if abs(total - 1.0) > CONSERVATION_TOL:
                raise ValueError(f"norm^2 + ledger = {total}, expected 1")
        amps.setflags(write=False)
        self.subsystems = subs
        self.amplitudes = amps
        self.loss_ledger = ledger
        self._axes = {sub.label: i for i, sub in enumerate(subs)}

    # -- introspection -------------------------------------------------

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(sub.label for sub in self.subsystems)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(sub.dimension for sub in self.subsystems)

    def axis(self, label: str) -> int:
        try:
            return self._axes[label]
        except KeyError:
            raise ValueError(f"no subsystem labeled {label!r}") from None

    def dimension(self, label: str) -> int:
        return self.subsystems[self.axis(label)].dimension

    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def norm(self) -> float:
        return math.sqrt(self.norm_sq())

    def ledger_total(self) -> float:
        return sum(self.loss_ledger.values())

    def reshaped(self) -> np.ndarray:
        return self.amplitudes.reshape(self.dims)

    def with_amplitudes(
        self,
        amplitudes: np.ndarray,
        loss_ledger: Mapping[str, float] | None = None,
        check: bool = True,
    ) -> "StateVector":
        ledger = self.loss_ledger if loss_ledger is None else loss_ledger
        return StateVector(self.subsystems, amplitudes, ledger, check=check)

    def __repr__(self) -> str:
        kets = ",".join(f"{sub.label}:{sub.dimension}" for sub in self.subsystems)
        return f"StateVector([{kets}], norm^2={self.norm_sq():.6f}, ledger={self.loss_ledger})"


Selector = Mapping[str, "int | Iterable[int]"]


def selector_mask(state: StateVector, where: Selector | Callable[[tuple[int, ...]], bool]) -> np.ndarray:
    """Boolean mask (flat) of basis indices matched by a selector.

    A selector is either a mapping from subsystem label to an index or a
    collection of indices, or a predicate over per-subsystem index tuples.
    """
    dims = state.dims
    if callable(where):
        flat = np.fromiter(
            (bool(where(idx)) for idx in np.ndindex(*dims)), dtype=bool, count=int(np.prod(dims))
        )
        return flat
    mask = np.ones(dims, dtype=bool)
    grids = np.indices(dims)
    for label, values in where.items():
        axis = state.axis(label)
        vals = [values] if isinstance(values, (int, np.integer)) else list(values)
        for v in vals:
            if not 0 <= int(v) < dims[axis]:
                raise ValueError(f"index {v} out of range for subsystem {label!r}")
        mask &= np.isin(grids[axis], vals)
    return mask.reshape(-1)


def weight(state: StateVector, where: Selector | Callable[[tuple[int, ...]], bool]) -> float:
    """Squared-magnitude weight carried by the selected basis indices."""
    mask = selector_mask(state, where)
    return float(np.sum(np.abs(state.amplitudes[mask]) ** 2))


def basis_state(
    subsystems: Sequence[SubsystemSpec], values: Mapping[str, int] | Sequence[int]
) -> StateVector:
    """Computational basis ket with the given per-subsystem indices."""
    subs = tuple(subsystems)
    if isinstance(values, Mapping):
        idx = tuple(int(values[sub.label]) for sub in subs)
    else:
        idx = tuple(int(v) for v in values)
    dims = tuple(sub.dimension for sub in subs)
    amps = np.zeros(dims, dtype=complex)
    amps[idx] = 1.0
    return StateVector(subs, amps.reshape(-1))


def from_amplitudes(
    subsystems: Sequence[SubsystemSpec], amplitudes: Sequence[complex]
) -> StateVector:
    return StateVector(subsystems, np.asarray(amplitudes, dtype=complex))


def tensor(a: StateVector, b: StateVector) -> StateVector:
    """Kronecker product of two states; a's subsystems come first."""
    if set(a.labels) & set(b.labels):
        raise ValueError(f"label collision between {a.labels} and {b.labels}")
    if a.loss_ledger or b.loss_ledger:
        raise ValueError("tensor requires empty loss ledgers")
    amps = np.kron(a.amplitudes, b.amplitudes)
    return StateVector(a.subsystems + b.subsystems, amps, check=False)


@dataclass(frozen=True)
class LocalUnitary:
    """A unitary matrix acting on one or more labeled subsystems."""

    matrix: np.ndarray
    targets: tuple[str, ...]

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("unitary must be a square matrix")
        _check_unitary(m)
        object.__setattr__(self, "matrix", m)
        targets = (self.targets,) if isinstance(self.targets, str) else tuple(self.targets)
        object.__setattr__(self, "targets", targets)


def _check_unitary(m: np.ndarray) -> None:
    dev = float(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))))
    if dev > UNITARITY_TOL:
        raise ValueError(f"matrix is not unitary (deviation {dev:.3e})")


def apply_unitary(state: StateVector, u: LocalUnitary) -> StateVector:
    return apply_on(state, u.matrix, u.targets)


def apply_on(
    state: StateVector,
    matrix: np.ndarray,
    targets: str | Sequence[str],
    where: Mapping[str, int] | None = None,
) -> StateVector:
    """Apply a unitary on target subsystems, optionally conditioned on fixed
    basis values of other subsystems (a controlled application)."""
    targets = (targets,) if isinstance(targets, str) else tuple(targets)
    m = np.asarray(matrix, dtype=complex)
    _check_unitary(m)
    taxes = [state.axis(t) for t in targets]
    dt = int(np.prod([state.dims[a] for a in taxes]))
    if m.shape != (dt, dt):
        raise ValueError(f"matrix shape {m.shape} does not match target dimension {dt}")
    cond = {state.axis(lbl): int(v) for lbl, v in (where or {}).items()}
    if set(cond) & set(taxes):
        raise ValueError("condition labels overlap the unitary targets")

    arr = state.reshaped().copy()
    slicer = tuple(cond.get(ax, slice(None)) for ax in range(arr.ndim))
    sub = arr[slicer]
    # target axis positions inside the conditioned view (integer-indexed axes vanish)
    tpos = [ax - sum(1 for c in cond if c < ax) for ax in taxes]
    moved = np.moveaxis(sub, tpos, range(sub.ndim - len(tpos), sub.ndim))
    lead = moved.shape[: sub.ndim - len(tpos)]
    flat = moved.reshape(-1, dt)
    flat = flat @ m.T
    out = np.moveaxis(
        flat.reshape(lead + tuple(moved.shape[sub.ndim - len(tpos):])),
        range(sub.ndim - len(tpos), sub.ndim),
        tpos,
    )
    if cond:
        arr[slicer] = out
    else:
        arr = out
    return state.with_amplitudes(arr.reshape(-1), check=False)


def absorb(
    state: StateVector,
    where: Selector | Callable[[tuple[int, ...]], bool],
    cause: str,
) -> StateVector:
    """Zero the selected amplitudes and book their weight under ``cause``."""
    mask = selector_mask(state, where)
    removed = float(np.sum(np.abs(state.amplitudes[mask]) ** 2))
    amps = state.amplitudes.copy()
    amps[mask] = 0.0
    ledger = dict(state.loss_ledger)
    ledger[cause] = ledger.get(cause, 0.0) + removed
    return state.with_amplitudes(amps, ledger, check=False)


def reorder(state: StateVector, labels: Sequence[str]) -> StateVector:
    """Return the same state with its subsystem axes permuted to ``labels``."""
    labels = tuple(labels)
    if sorted(labels) != sorted(state.labels):
        raise ValueError(f"reorder needs a permutation of {state.labels}")
    perm = [state.axis(lbl) for lbl in labels]
    arr = np.transpose(state.reshaped(), perm)
    subs = tuple(state.subsystems[p] for p in perm)
    return StateVector(subs, arr.reshape(-1), state.loss_ledger, check=False)


@dataclass(frozen=True)
class MeasurementResult:
    outcome: "int | str"
    probability: float
    state: StateVector


HADAMARD_OUTCOMES = ("+", "-")


def measure(
    state: StateVector,
    target: str,
    basis: str = "computational",
    rng: np.random.Generator | None = None,
    force: "int | str | None" = None,
) -> MeasurementResult:
    """Projective measurement of one subsystem.

    The reported probability is the squared projection weight divided by the
    current squared norm. The post-state is renormalized back to the
    pre-measurement norm, which keeps norm^2 + ledger conserved. With
    ``force`` the stated outcome is taken without sampling.
    """
    norm2 = state.norm_sq()
    if norm2 <= 1e-24:
        raise ValueError("cannot measure a zero-norm state")
    dim = state.dimension(target)
    if basis == "computational":
        work = state
        outcomes: tuple = tuple(range(dim))
    elif basis == "hadamard":
        if dim != 2:
            raise ValueError("hadamard basis requires a two-level subsystem")
        work = apply_on(state, HADAMARD, target)
        outcomes = HADAMARD_OUTCOMES
    else:
        raise ValueError(f"unknown basis {basis!r}")

    probs = np.array([weight(work, {target: v}) / norm2 for v in range(dim)])
    if force is not None:
        try:
            idx = outcomes.index(force) if isinstance(force, str) else int(force)
        except ValueError:
            raise ValueError(f"outcome {force!r} not valid for basis {basis}") from None
        if not 0 <= idx < dim:
            raise ValueError(f"forced outcome {force!r} out of range")
    elif rng is not None:
        idx = int(rng.choice(dim, p=np.clip(probs, 0, None) / np.clip(probs, 0, None).sum()))
    else:
        raise ValueError("measure needs a seeded rng or a forced outcome")

    w = probs[idx] * norm2
    if force is not None and w <= 1e-24:
        raise ValueError(f"forced outcome {force!r} has zero probability")
    mask = selector_mask(work, {target: idx})
    amps = work.amplitudes.copy()
    amps[~mask] = 0.0
    amps *= math.sqrt(norm2 / w)
    post = work.with_amplitudes(amps, check=False)
    if basis == "hadamard":
        post = apply_on(post, HADAMARD, target)
    return MeasurementResult(outcomes[idx], float(probs[idx]), post)


def overlap(a: StateVector, b: StateVector) -> complex:
    if a.labels != b.labels or a.dims != b.dims:
        raise ValueError("overlap needs identically laid-out states")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def fidelity(a: StateVector, b: StateVector) -> float:
    """Global-phase-free fidelity |<a|b>| of the normalized states."""
    na, nb = a.norm(), b.norm()
    if na <= 1e-24 or nb <= 1e-24:
        raise ValueError("fidelity of a zero-norm state is undefined")
    return abs(overlap(a, b)) / (na * nb)


def conservation_defect(state: StateVector) -> float:
    """|norm^2 + ledger - 1|, the quantity the engine keeps near zero."""
    return abs(state.norm_sq() + state.ledger_total() - 1.0)
