"""End-to-end duplex coding and telexchanging pipelines.

Duplex coding exchanges one classical bit in each direction over a preshared
Bell pair. The pair is encoded with (Z^b1 x X^b2), disentangled by K rounds
of an electron rotation followed by an MQZ pass on one photon path, and read
out locally: the electron path gives b2, the photon polarization after a
Hadamard gives b1.

Telexchanging swaps two unknown qubits without preshared entanglement. The
photon is path-entangled at a polarizing splitter, a DCQZ pass entangles it
with the remote electron, K rotation+DMQZ rounds disentangle the pair, and
local operations plus a one-bit announcement mu finish the exchange.

Both runners propagate a real state vector; erasure probability accumulates
in the loss ledger and the herald is the surviving squared norm.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import hilbert, zeno
from .hilbert import (
    HADAMARD,
    PAULI_X,
    PAULI_Z,
    StateVector,
    SubsystemSpec,
    apply_on,
    basis_state,
    tensor,
)
from .zeno import Variant, ZenoParams

ELECTRON = "electron"
POL = "pol"
PATH = "path"

H_POL, V_POL = zeno.H_POL, zeno.V_POL

NORMALIZATION_TOL = 1e-12


@dataclass(frozen=True)
class DuplexMessage:
    """Classical bits: b1 travels Alice to Bob, b2 Bob to Alice."""

    b1: int
    b2: int

    def __post_init__(self) -> None:
        if self.b1 not in (0, 1) or self.b2 not in (0, 1):
            raise ValueError(f"bits must be 0 or 1, got ({self.b1}, {self.b2})")


@dataclass(frozen=True)
class QubitState:
    """Normalized single-qubit amplitude pair."""

    amp0: complex
    amp1: complex

    def __post_init__(self) -> None:
        n = abs(self.amp0) ** 2 + abs(self.amp1) ** 2
        if abs(n - 1.0) > NORMALIZATION_TOL:
            raise ValueError(f"qubit amplitudes have norm^2 {n}, expected 1")

    def as_array(self) -> np.ndarray:
        return np.array([self.amp0, self.amp1], dtype=complex)

    @staticmethod
    def from_array(a: Sequence[complex]) -> "QubitState":
        v = np.asarray(a, dtype=complex)
        v = v / np.linalg.norm(v)
        return QubitState(complex(v[0]), complex(v[1]))


@dataclass(frozen=True)
class TelexMessage:
    """The two qubits being exchanged: eta1 held by Alice, eta2 by Bob."""

    eta1: QubitState
    eta2: QubitState


@dataclass
class ProtocolOutcome:
    """Result of one protocol run.

    ``herald_probability`` is the probability that the run completes without
    erasure; conditional on that, ``decoded_bits`` (duplex) or
    ``output_states`` (telex) describe the delivered payload.
    """

    status: str  # "decoded" | "erasure"
    herald_probability: float
    closed_form_herald: float
    mode: str
    ledger: dict
    decoded_bits: tuple[int, int] | None = None
    output_states: tuple[QubitState, QubitState] | None = None
    announcement: int | None = None
    erasure_cause: str | None = None
    decode_probability: float | None = None
    fidelity: float | None = None
    final_state: StateVector | None = None
    events: tuple = field(default_factory=tuple)


# ----------------------------------------------------------------------
# ideal circuits


def _qubit_pair() -> tuple[SubsystemSpec, SubsystemSpec]:
    return SubsystemSpec(ELECTRON, 2), SubsystemSpec(POL, 2)


def duplex_encode(message: DuplexMessage) -> StateVector:
    """Encode b1 b2 on a shared Bell pair with (Z^b1 x X^b2)."""
    subs = _qubit_pair()
    amps = np.zeros(4, dtype=complex)
    amps[0b00] = 1 / math.sqrt(2)
    amps[0b11] = 1 / math.sqrt(2)
    s = StateVector(subs, amps)
    if message.b1:
        s = apply_on(s, PAULI_Z, ELECTRON)
    if message.b2:
        s = apply_on(s, PAULI_X, POL)
    return s


_BELLS = {
    "phi+": (0, 0),
    "psi+": (0, 1),
    "phi-": (1, 0),
    "psi-": (1, 1),
}


def bell_state(name: str) -> StateVector:
    """One of the four Bell states on (electron, pol)."""
    b1, b2 = _BELLS[name.lower()]
    return duplex_encode(DuplexMessage(b1, b2))


def _dnot_matrix() -> np.ndarray:
    """Linear extension of phi+- -> |0>|+->, psi+- -> |1>|+->."""
    plus = np.array([1, 1], dtype=complex) / math.sqrt(2)
    minus = np.array([1, -1], dtype=complex) / math.sqrt(2)
    zero = np.array([1, 0], dtype=complex)
    one = np.array([0, 1], dtype=complex)
    pairs = [
        (bell_state("phi+").amplitudes, np.kron(zero, plus)),
        (bell_state("phi-").amplitudes, np.kron(zero, minus)),
        (bell_state("psi+").amplitudes, np.kron(one, plus)),
        (bell_state("psi-").amplitudes, np.kron(one, minus)),
    ]
    return sum(np.outer(out, inp.conj()) for inp, out in pairs)


_DNOT = _dnot_matrix()


def dnot_ideal(state: StateVector) -> StateVector:
    """Ideal disentangling map on a two-qubit state."""
    if state.dims != (2, 2):
        raise ValueError("dnot_ideal acts on a two-qubit state")
    return apply_on(state, _DNOT, (state.labels[0], state.labels[1]))


def ddnot_ideal(message: TelexMessage) -> StateVector:
    """Ideal double-CNOT circuit output psi3 on qubits (electron, pol, ancilla)."""
    subs = (
        SubsystemSpec(ELECTRON, 2),
        SubsystemSpec(POL, 2),
        SubsystemSpec("ancilla", 2),
    )
    amps = np.kron(
        message.eta1.as_array(), np.kron(message.eta2.as_array(), np.array([1, 0], dtype=complex))
    )
    s = StateVector(subs, amps)
    s = apply_on(s, PAULI_X, "ancilla", where={POL: 1})  # Bob's local CNOT
    s = apply_on(s, PAULI_X, POL, where={ELECTRON: 1})  # nonlocal, Alice controls
    s = apply_on(s, PAULI_X, ELECTRON, where={POL: 1})  # nonlocal, Bob controls
    return s


def telex_decode_oracle(message: TelexMessage, mu: int) -> StateVector:
    """Ideal-circuit decode after :func:`ddnot_ideal` for a given announcement."""
    s = ddnot_ideal(message)
    s = apply_on(s, PAULI_X, POL, where={"ancilla": 1})  # Bob decodes eta1
    s = apply_on(s, HADAMARD, "ancilla")
    res = hilbert.measure(s, "ancilla", force=mu)
    s = res.state
    if mu == 1:
        s = apply_on(s, PAULI_Z, ELECTRON)
    return s


def duplex_decode(electron_outcome: "int | str", photon_outcome: "int | str") -> tuple[int, int]:
    """Map the two local measurement outcomes to (b1, b2)."""
    e_map = {0: 0, 1: 1, "up": 0, "down": 1}
    p_map = {0: 0, 1: 1, "H": 0, "V": 1}
    try:
        b2 = e_map[electron_outcome]
        b1 = p_map[photon_outcome]
    except KeyError as exc:
        raise ValueError(f"unrecognized measurement outcome {exc.args[0]!r}") from None
    return b1, b2


# ----------------------------------------------------------------------
# duplex coding runner


def duplex_run(message: DuplexMessage, params: ZenoParams, mode: str = "cycle") -> ProtocolOutcome:
    """Run duplex coding end to end for one message."""
    if params.gate_count is None:
        raise ValueError("duplex coding needs gate_count")
    k = params.gate_count
    b2 = message.b2
    variant = Variant.H if b2 == 0 else Variant.V

    s = tensor(duplex_encode(message), basis_state([SubsystemSpec(PATH, 2)], (0,)))
    s = apply_on(s, PAULI_X, PATH, where={POL: V_POL})  # polarizing split
    if b2:
        s = apply_on(s, PAULI_X, POL, where={PATH: 0})

    rot = hilbert.rotation(params.theta_k)
    events: list = []
    for _ in range(k):
        s = apply_on(s, rot, ELECTRON)
        rep = zeno.mqz_gate(s, variant, ELECTRON, params, mode=mode, path=(PATH, 0))
        s = rep.output_state
        events.extend(rep.events)

    if b2:
        s = apply_on(s, PAULI_X, POL, where={PATH: 0})
    s = apply_on(s, PAULI_X, PATH, where={POL: V_POL})  # recombine
    if b2 == 0:
        s = apply_on(s, PAULI_Z, POL)  # completes the disentangling convention

    herald = s.norm_sq()
    closed = zeno.lambda2(params.inner_cycles, k) ** k
    ledger = dict(s.loss_ledger)
    if herald <= 1e-30:
        cause = max(ledger, key=ledger.get) if ledger else None
        return ProtocolOutcome(
            status="erasure",
            herald_probability=0.0,
            closed_form_herald=closed,
            mode=mode,
            ledger=ledger,
            erasure_cause=cause,
            final_state=s,
            events=tuple(events),
        )

    read = apply_on(s, HADAMARD, POL)
    probs = np.zeros((2, 2))
    for e in range(2):
        for p in range(2):
            probs[e, p] = hilbert.weight(read, {ELECTRON: e, POL: p}) / herald
    e_star, p_star = np.unravel_index(int(np.argmax(probs)), probs.shape)
    b1_dec, b2_dec = duplex_decode(int(e_star), int(p_star))
    return ProtocolOutcome(
        status="decoded",
        herald_probability=herald,
        closed_form_herald=closed,
        mode=mode,
        ledger=ledger,
        decoded_bits=(b1_dec, b2_dec),
        decode_probability=float(probs[e_star, p_star]),
        final_state=s,
        events=tuple(events),
    )


# ----------------------------------------------------------------------
# telexchanging runner

_PBS4 = np.array(
    [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]], dtype=complex
)

_H_PATH = np.array(
    [
        [1 / math.sqrt(2), 1 / math.sqrt(2), 0, 0],
        [1 / math.sqrt(2), -1 / math.sqrt(2), 0, 0],
        [0, 0, 1, 0],
        [0, 0, 0, 1],
    ],
    dtype=complex,
)


def _pol_path_block(per_path: Sequence[np.ndarray]) -> np.ndarray:
    """Operator on (pol, path) applying a 2x2 polarization map per path value."""
    out = np.zeros((8, 8), dtype=complex)
    for path, m in enumerate(per_path):
        proj = np.zeros((4, 4), dtype=complex)
        proj[path, path] = 1.0
        out += np.kron(np.asarray(m, dtype=complex), proj)
    return out


_I2 = np.eye(2, dtype=complex)
_U3 = _pol_path_block([_I2, PAULI_X, PAULI_Z, _I2])
_U4 = _pol_path_block([_I2, PAULI_X, _I2, _I2])


def _split_merge_matrix() -> np.ndarray:
    """Involution swapping the V components of paths (0,2) and (1,3)."""
    m = np.eye(8, dtype=complex)
    idx = lambda pol, path: pol * 4 + path
    for a, b in ((idx(V_POL, 0), idx(V_POL, 2)), (idx(V_POL, 1), idx(V_POL, 3))):
        m[a, a] = m[b, b] = 0.0
        m[a, b] = m[b, a] = 1.0
    return m


_SPLIT_MERGE = _split_merge_matrix()


def telex_run(
    message: TelexMessage,
    params: ZenoParams,
    mode: str = "cycle",
    mu: int | None = None,
    rng: np.random.Generator | None = None,
) -> ProtocolOutcome:
    """Run telexchanging end to end for one message pair.

    The announcement bit is forced with ``mu`` or sampled from ``rng``.
    """
    if params.outer_cycles is None or params.gate_count is None:
        raise ValueError("telexchanging needs outer_cycles and gate_count")
    if mu is None and rng is None:
        raise ValueError("telex_run needs a forced mu or a seeded rng")
    k = params.gate_count

    subs = (SubsystemSpec(ELECTRON, 2), SubsystemSpec(POL, 2), SubsystemSpec(PATH, 4))
    amps = np.kron(
        message.eta1.as_array(),
        np.kron(message.eta2.as_array(), np.array([1, 0, 0, 0], dtype=complex)),
    )
    s = StateVector(subs, amps)
    s = apply_on(s, _PBS4, PATH, where={POL: V_POL})  # entangle polarization with path

    events: list = []
    rep = zeno.dcqz_entangle(s, ELECTRON, params, mode=mode)
    s = rep.output_state
    events.extend(rep.events)
    dcqz_herald = rep.herald_probability

    s = apply_on(s, _SPLIT_MERGE, (POL, PATH))
    s = apply_on(s, _U3, (POL, PATH))

    rot = hilbert.rotation(params.theta_k)
    for _ in range(k):
        s = apply_on(s, rot, ELECTRON)
        rep = zeno.dmqz_gate(s, ELECTRON, (0, 1), params, mode=mode)
        s = rep.output_state
        events.extend(rep.events)

    s = apply_on(s, _U4, (POL, PATH))
    s = apply_on(s, _SPLIT_MERGE, (POL, PATH))
    s = apply_on(s, PAULI_X, POL, where={PATH: 1})  # Bob decodes eta1 locally
    s = apply_on(s, _H_PATH, PATH)

    herald = s.norm_sq()
    alpha_sq = abs(message.eta1.amp0) ** 2
    d1 = delta1(message)
    closed = (
        zeno.lambda3(alpha_sq, params.outer_cycles, params.inner_cycles)
        * zeno.lambda4(d1, params.inner_cycles, k) ** k
    )
    ledger = dict(s.loss_ledger)
    if herald <= 1e-30:
        cause = max(ledger, key=ledger.get) if ledger else None
        return ProtocolOutcome(
            status="erasure",
            herald_probability=0.0,
            closed_form_herald=closed,
            mode=mode,
            ledger=ledger,
            erasure_cause=cause,
            final_state=s,
            events=tuple(events),
        )

    res = hilbert.measure(s, PATH, rng=rng, force=mu)
    mu_out = int(res.outcome)
    if mu_out not in (0, 1):
        raise RuntimeError(f"announcement measurement landed on unused path {mu_out}")
    s = res.state
    if mu_out == 1:
        s = apply_on(s, PAULI_Z, ELECTRON)

    block = s.reshaped()[:, :, mu_out]
    u_m, sv, vh = np.linalg.svd(block)
    purity = float(sv[0] ** 2 / np.sum(sv**2))
    alice = QubitState.from_array(u_m[:, 0])
    bob = QubitState.from_array(vh[0, :])
    target = np.outer(message.eta2.as_array(), message.eta1.as_array())
    fid = float(abs(np.vdot(target, block)) / np.linalg.norm(block))

    return ProtocolOutcome(
        status="decoded",
        herald_probability=herald,
        closed_form_herald=closed,
        mode=mode,
        ledger=ledger,
        output_states=(alice, bob),
        announcement=mu_out,
        fidelity=float(fid),
        decode_probability=purity,
        final_state=s,
        events=tuple(events),
    )


def delta1(message: TelexMessage) -> float:
    """Joint blocking weight |alpha gamma|^2 + |beta delta|^2."""
    return (
        abs(message.eta1.amp0 * message.eta2.amp0) ** 2
        + abs(message.eta1.amp1 * message.eta2.amp1) ** 2
    )


def random_telex_message(rng: np.random.Generator) -> TelexMessage:
    """A seeded random pair of normalized complex qubits."""

    def q() -> QubitState:
        v = rng.normal(size=2) + 1j * rng.normal(size=2)
        return QubitState.from_array(v)

    return TelexMessage(q(), q())
