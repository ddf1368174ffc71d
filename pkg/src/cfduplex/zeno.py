"""Quantum-Zeno gate family: cycle-level simulators and closed-form heralds.

Five interferometric gates are modeled. A QZ gate freezes (or flips) a
photon polarization over N rotation cycles against an absorptive object; a
CQZ gate nests M outer cycles around inner QZ stages so both control values
become counterfactual; MQZ and DMQZ drive a QZ stage with a quantum control
(an electron path superposition) and discard every non-blocking component;
DCQZ runs two CQZ rails against a shared electron and acts as a heralded
CNOT with the electron as control.

Every gate runs in one of two modes:

* ``analytic``: the heralded state map is applied and the success
  probability is the printed closed form (lambda0 .. lambda4 family).
* ``cycle``: amplitudes are propagated through each rotation/absorption
  step and the herald is read off the propagation, with the closed form
  recorded alongside for comparison.

The two disciplines differ for a genuinely quantum control. The CQZ family
charges each potential loss from the Zeno-restored trajectory (the inner
stage acts as an ideal mirror or absorber), which reproduces the closed
forms exactly for classical controls. The MQZ family lets the blocked
branch decay coherently inside one pass, which yields Delta * cos^2N(theta)
instead of the closed form (1 - Delta sin^2 theta)^N * Delta; both numbers
are reported and they converge as N grows.

Heralded output states keep ``norm^2 == herald`` with the lost weight
booked in the loss ledger by cause, so conditional states are recovered by
renormalization and the conservation identity of :mod:`cfduplex.hilbert`
holds at every step.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from . import hilbert
from .hilbert import StateVector

CAUSE_ABSORBED = "absorbed-by-AO"
CAUSE_DISCARDED = "discarded-at-detector"
CAUSE_REDIRECTED = "redirected-noncounterfactual"
LOSS_CAUSES = (CAUSE_ABSORBED, CAUSE_DISCARDED, CAUSE_REDIRECTED)

MODES = ("analytic", "cycle")

H_POL, V_POL = 0, 1


class Variant(Enum):
    """Which polarization is the pass-through input of the gate."""

    H = "H"
    V = "V"

    @property
    def pass_index(self) -> int:
        return H_POL if self is Variant.H else V_POL

    @property
    def ctrl_index(self) -> int:
        return V_POL if self is Variant.H else H_POL

    def pr_matrix(self, theta: float) -> np.ndarray:
        """Polarizing-rotator step in the (H, V) basis."""
        c, s = math.cos(theta), math.sin(theta)
        if self is Variant.H:
            return np.array([[c, -s], [s, c]], dtype=complex)
        return np.array([[c, s], [-s, c]], dtype=complex)


class AOMapping(Enum):
    """How electron path states map onto control values.

    Type I (QZ/MQZ/DMQZ): the up path blocks the H-variant gate and the
    down path blocks the V-variant gate. Type II (CQZ/DCQZ): up is always
    the absence value and down always the presence value.
    """

    TYPE_I = "type-I"
    TYPE_II = "type-II"


def presence_index(mapping: AOMapping, variant: Variant) -> int:
    if mapping is AOMapping.TYPE_I:
        return 0 if variant is Variant.H else 1
    return 1


@dataclass(frozen=True)
class ZenoParams:
    """Cycle counts with their derived rotation angles.

    ``inner_cycles`` is the per-gate cycle count N, ``outer_cycles`` the
    CQZ/DCQZ outer count M, ``gate_count`` the number K of gate rounds a
    protocol chains. Angles are pi/(2 X); a count of 1 degenerates to a
    quarter-turn per step.
    """

    inner_cycles: int
    outer_cycles: int | None = None
    gate_count: int | None = None

    def __post_init__(self) -> None:
        for name in ("inner_cycles", "outer_cycles", "gate_count"):
            v = getattr(self, name)
            if v is not None and (not isinstance(v, (int, np.integer)) or v < 1):
                raise ValueError(f"{name} must be a positive integer, got {v!r}")

    @property
    def theta_n(self) -> float:
        return math.pi / (2 * self.inner_cycles)

    @property
    def theta_m(self) -> float:
        if self.outer_cycles is None:
            raise ValueError("outer_cycles not set")
        return math.pi / (2 * self.outer_cycles)

    @property
    def theta_k(self) -> float:
        if self.gate_count is None:
            raise ValueError("gate_count not set")
        return math.pi / (2 * self.gate_count)


@dataclass(frozen=True)
class Event:
    """One potential loss event with its conditional firing probability."""

    cause: str
    probability: float
    count: int = 1


@dataclass(frozen=True)
class HeraldReport:
    """Outcome of one gate application."""

    output_state: StateVector
    herald_probability: float
    channel_exposure: float
    closed_form_probability: float
    mode: str
    gate: str
    events: tuple[Event, ...]
    heralded_weight: float


# ----------------------------------------------------------------------
# closed forms


def _check_cycles(**counts: int) -> None:
    for name, v in counts.items():
        if not isinstance(v, (int, np.integer)) or v < 1:
            raise ValueError(f"{name} must be a positive integer, got {v!r}")


def _check_prob(**values: float) -> None:
    for name, v in values.items():
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"{name} must lie in [0, 1], got {v!r}")


def lambda0(m: int) -> float:
    """CQZ herald for an absent control: cos^2M(theta_M)."""
    _check_cycles(m=m)
    return math.cos(math.pi / (2 * m)) ** (2 * m)


def lambda1(m: int, n: int) -> float:
    """CQZ herald for a present control: prod_i [1 - sin^2(i theta_M) sin^2(theta_N)]^N."""
    _check_cycles(m=m, n=n)
    tm, tn = math.pi / (2 * m), math.pi / (2 * n)
    out = 1.0
    for i in range(1, m + 1):
        out *= (1.0 - math.sin(i * tm) ** 2 * math.sin(tn) ** 2) ** n
    return out


def mqz_closed_form(delta0: float, n: int) -> float:
    """MQZ herald closed form (1 - Delta0 sin^2 theta_N)^N * Delta0."""
    _check_cycles(n=n)
    _check_prob(delta0=delta0)
    tn = math.pi / (2 * n)
    return (1.0 - delta0 * math.sin(tn) ** 2) ** n * delta0


def lambda2(n: int, k: int) -> float:
    """Per-round duplex herald (1 - cos^2(theta_K) sin^2(theta_N) / 2)^N (1 - sin^2(theta_K) / 2)."""
    _check_cycles(n=n, k=k)
    tn, tk = math.pi / (2 * n), math.pi / (2 * k)
    return (1.0 - 0.5 * math.cos(tk) ** 2 * math.sin(tn) ** 2) ** n * (
        1.0 - 0.5 * math.sin(tk) ** 2
    )


def lambda3(alpha_sq: float, m: int, n: int) -> float:
    """DCQZ herald (1 - |a|^2 sin^2 theta_M)^M prod_m [1 - |b|^2 sin^2(m theta_M) sin^2 theta_N]^N."""
    _check_cycles(m=m, n=n)
    _check_prob(alpha_sq=alpha_sq)
    beta_sq = 1.0 - alpha_sq
    tm, tn = math.pi / (2 * m), math.pi / (2 * n)
    out = (1.0 - alpha_sq * math.sin(tm) ** 2) ** m
    for i in range(1, m + 1):
        out *= (1.0 - beta_sq * math.sin(i * tm) ** 2 * math.sin(tn) ** 2) ** n
    return out


def lambda4(delta1: float, n: int, k: int) -> float:
    """Per-round telex herald (1 - Delta1 cos^2 theta_K sin^2 theta_N)^N (1 - Delta1 sin^2 theta_K)."""
    _check_cycles(n=n, k=k)
    _check_prob(delta1=delta1)
    tn, tk = math.pi / (2 * n), math.pi / (2 * k)
    return (1.0 - delta1 * math.cos(tk) ** 2 * math.sin(tn) ** 2) ** n * (
        1.0 - delta1 * math.sin(tk) ** 2
    )


# ----------------------------------------------------------------------
# shared machinery


@dataclass
class _Tally:
    """Multiplicative survival bookkeeping with per-cause loss shares."""

    survival: float = 1.0
    losses: dict = field(default_factory=dict)
    events: list = field(default_factory=list)

    def charge(self, cause: str, p: float, count: int = 1) -> None:
        p = min(max(p, 0.0), 1.0)
        keep = (1.0 - p) ** count
        self.losses[cause] = self.losses.get(cause, 0.0) + self.survival * (1.0 - keep)
        self.survival *= keep
        self.events.append(Event(cause, p, count))

    def charge_absolute(self, cause: str, w: float, remaining: float) -> float:
        """Charge an absolute weight w out of `remaining`; returns the new remaining."""
        p = 0.0 if remaining <= 1e-300 else min(max(w / remaining, 0.0), 1.0)
        self.charge(cause, p)
        return remaining - w


@dataclass(frozen=True)
class _Rail:
    variant: Variant
    path_sel: dict  # {} for a gate that owns the whole state


def _norm_input(state: StateVector) -> tuple[np.ndarray, float]:
    cur2 = state.norm_sq()
    if cur2 <= 1e-24:
        raise ValueError("gate input has zero norm")
    return state.amplitudes / math.sqrt(cur2), cur2


def _tmp(state: StateVector, amps: np.ndarray) -> StateVector:
    return StateVector(state.subsystems, amps, {}, check=False)


def _finish(
    state: StateVector,
    out_amps: np.ndarray,
    cur2: float,
    tally: _Tally,
    closed_form: float,
    mode: str,
    gate: str,
    heralded_weight: float,
) -> HeraldReport:
    herald = tally.survival
    t2 = float(np.sum(np.abs(out_amps) ** 2))
    target2 = cur2 * herald
    if t2 > 1e-300:
        out_amps = out_amps * math.sqrt(target2 / t2)
    else:
        out_amps = np.zeros_like(out_amps)
    ledger = dict(state.loss_ledger)
    for cause, share in tally.losses.items():
        ledger[cause] = ledger.get(cause, 0.0) + cur2 * share
    out = StateVector(state.subsystems, out_amps, ledger, check=False)
    exposure = sum(out.loss_ledger.get(c, 0.0) for c in LOSS_CAUSES)
    return HeraldReport(
        output_state=out,
        herald_probability=herald,
        channel_exposure=exposure,
        closed_form_probability=closed_form,
        mode=mode,
        gate=gate,
        events=tuple(tally.events),
        heralded_weight=heralded_weight,
    )


def _check_mode(mode: str) -> None:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")


def _mqz_family(
    state: StateVector,
    rails: Sequence[_Rail],
    electron: str | None,
    params: ZenoParams,
    mode: str,
    polarization: str,
    redirect: bool,
    gate: str,
) -> HeraldReport:
    """QZ-type pass with a quantum control shared by one or two rails.

    With ``redirect`` the non-blocking output is diverted into absorption and
    each surviving rail is collapsed onto its heralded configuration with the
    rail norm preserved, which realizes the printed gate maps exactly.
    """
    _check_mode(mode)
    n = params.inner_cycles
    tn = params.theta_n
    sin2 = math.sin(tn) ** 2
    norm_amps, cur2 = _norm_input(state)

    pres = [presence_index(AOMapping.TYPE_I, r.variant) for r in rails]
    her_sel = [
        {electron: pr, polarization: r.variant.pass_index, **r.path_sel}
        for r, pr in zip(rails, pres)
    ]
    abs_sel = [
        {electron: pr, polarization: r.variant.ctrl_index, **r.path_sel}
        for r, pr in zip(rails, pres)
    ]
    gate_sel = [dict(r.path_sel) for r in rails]

    nstate = _tmp(state, norm_amps)
    w_pres = sum(hilbert.weight(nstate, s) for s in her_sel)
    w_gate = sum(hilbert.weight(nstate, s) for s in gate_sel) if rails[0].path_sel else 1.0
    w_rest = max(w_gate - w_pres, 0.0)
    closed = (1.0 - w_pres * sin2) ** n
    if redirect:
        closed *= 1.0 - w_rest

    tally = _Tally()
    if mode == "analytic":
        tally.charge(CAUSE_ABSORBED, w_pres * sin2, count=n)
        if redirect:
            tally.charge(CAUSE_REDIRECTED, w_rest)
    else:
        work = np.array(norm_amps)
        abs_masks = [hilbert.selector_mask(nstate, s) for s in abs_sel]
        remaining = 1.0
        for _ in range(n):
            for r in rails:
                work = np.array(
                    hilbert.apply_on(
                        _tmp(state, work), r.variant.pr_matrix(tn), polarization, where=r.path_sel or None
                    ).amplitudes
                )
            w = 0.0
            for mask in abs_masks:
                w += float(np.sum(np.abs(work[mask]) ** 2))
                work[mask] = 0.0
            remaining = tally.charge_absolute(CAUSE_ABSORBED, w, remaining)
        if redirect:
            # everything left in the rails outside the heralded configuration
            her_masks = [hilbert.selector_mask(nstate, s) for s in her_sel]
            w_red = 0.0
            for r, hm in zip(rails, her_masks):
                gm = hilbert.selector_mask(nstate, r.path_sel) if r.path_sel else np.ones_like(hm)
                drop = gm & ~hm
                w_red += float(np.sum(np.abs(work[drop]) ** 2))
            tally.charge_absolute(CAUSE_REDIRECTED, w_red, remaining)

    # heralded state map on the unscaled input
    out = state.amplitudes.copy()
    if redirect:
        for r, hs in zip(rails, her_sel):
            gm = (
                hilbert.selector_mask(state, r.path_sel)
                if r.path_sel
                else np.ones(out.size, dtype=bool)
            )
            hm = hilbert.selector_mask(state, hs)
            rail_w = float(np.sum(np.abs(out[gm]) ** 2))
            her_w = float(np.sum(np.abs(out[hm]) ** 2))
            kept = np.where(hm, out, 0.0)
            out = np.where(gm, 0.0, out)
            if her_w > 1e-300:
                out = out + kept * math.sqrt(rail_w / her_w)
    else:
        # entangling map: blocked branch frozen, open branch fully rotated
        for r, pr in zip(rails, pres):
            flip = r.variant.pr_matrix(math.pi / 2)
            cond = {electron: 1 - pr, **r.path_sel}
            out = np.array(
                hilbert.apply_on(_tmp(state, out), flip, polarization, where=cond).amplitudes
            )

    return _finish(state, out, cur2, tally, closed, mode, gate, w_pres)


def _cqz_family(
    state: StateVector,
    rails: Sequence[_Rail],
    control: tuple[str, "str | int"],
    params: ZenoParams,
    mode: str,
    polarization: str,
    gate: str,
) -> HeraldReport:
    """Chained pass: M outer cycles, each feeding an inner N-cycle stage.

    The trajectory is Zeno-restored. The absence branch is pinned to its
    pass polarization by the detector collapse and charged with its
    undamped excursion weight once per outer cycle; the presence branch
    accumulates the outer rotation (the inner stage is an ideal mirror) and
    is charged per inner cycle. Charges are therefore exactly the printed
    product factors, for quantum and classical controls alike.
    """
    _check_mode(mode)
    if params.outer_cycles is None:
        raise ValueError("CQZ gates need outer_cycles")
    m, n = params.outer_cycles, params.inner_cycles
    tm, tn = params.theta_m, params.theta_n
    sin2n = math.sin(tn) ** 2
    norm_amps, cur2 = _norm_input(state)
    nstate = _tmp(state, norm_amps)

    kind, value = control
    if kind == "classical":
        pres_cond: dict | None = {} if value == 1 else None
        abs_cond: dict | None = {} if value == 0 else None
    elif kind == "electron":
        pres_cond = {value: presence_index(AOMapping.TYPE_II, rails[0].variant)}
        abs_cond = {value: 1 - pres_cond[value]}
    else:
        raise ValueError(f"unknown control kind {kind!r}")

    def sel(cond: dict | None, extra: dict) -> list[dict]:
        if cond is None:
            return []
        return [{**cond, **extra, **r.path_sel} for r in rails]

    w_abs = sum(hilbert.weight(nstate, s) for s in sel(abs_cond, {}))
    w_pres = sum(hilbert.weight(nstate, s) for s in sel(pres_cond, {}))

    closed = (1.0 - w_abs * math.sin(tm) ** 2) ** m
    for i in range(1, m + 1):
        closed *= (1.0 - w_pres * math.sin(i * tm) ** 2 * sin2n) ** n

    tally = _Tally()
    if mode == "analytic":
        for i in range(1, m + 1):
            tally.charge(CAUSE_DISCARDED, w_abs * math.sin(tm) ** 2)
            tally.charge(CAUSE_ABSORBED, w_pres * math.sin(i * tm) ** 2 * sin2n, count=n)
    else:
        work = np.array(norm_amps)
        abs_branch = [
            hilbert.selector_mask(nstate, {**abs_cond, **r.path_sel}) for r in rails
        ] if abs_cond is not None else []
        abs_ctrl = [
            hilbert.selector_mask(nstate, {**abs_cond, polarization: r.variant.ctrl_index, **r.path_sel})
            for r in rails
        ] if abs_cond is not None else []
        pres_ctrl = [
            hilbert.selector_mask(nstate, {**pres_cond, polarization: r.variant.ctrl_index, **r.path_sel})
            for r in rails
        ] if pres_cond is not None else []
        # strip any control-arm weight sitting in the absence branch up front
        w0 = sum(float(np.sum(np.abs(work[mask]) ** 2)) for mask in abs_ctrl)
        if w0 > 1e-30:
            tally.charge(CAUSE_DISCARDED, w0)
            for mask in abs_ctrl:
                work[mask] = 0.0
        for _ in range(m):
            snap = [work[mask].copy() for mask in abs_branch]
            for r in rails:
                work = np.array(
                    hilbert.apply_on(
                        _tmp(state, work), r.variant.pr_matrix(tm), polarization, where=r.path_sel or None
                    ).amplitudes
                )
            w_d = sum(float(np.sum(np.abs(work[mask]) ** 2)) for mask in abs_ctrl)
            tally.charge(CAUSE_DISCARDED, w_d)
            for mask, content in zip(abs_branch, snap):
                work[mask] = content  # detector collapse pins the absence branch
            w_i = sum(float(np.sum(np.abs(work[mask]) ** 2)) for mask in pres_ctrl)
            tally.charge(CAUSE_ABSORBED, w_i * sin2n, count=n)

    # heralded map: presence branch flipped in the variant frame, absence kept
    out = state.amplitudes.copy()
    if pres_cond is not None:
        for r in rails:
            cond = {**pres_cond, **r.path_sel}
            out = np.array(
                hilbert.apply_on(
                    _tmp(state, out), r.variant.pr_matrix(math.pi / 2), polarization, where=cond or None
                ).amplitudes
            )

    return _finish(state, out, cur2, tally, closed, mode, gate, w_pres)


def _rail(variant: Variant, path: "tuple[str, int] | None") -> _Rail:
    return _Rail(variant, {} if path is None else {path[0]: int(path[1])})


# ----------------------------------------------------------------------
# public gates


def qz_gate(
    state: StateVector,
    variant: Variant,
    ao: str,
    params: ZenoParams,
    mode: str = "cycle",
    polarization: str = "pol",
    path: "tuple[str, int] | None" = None,
) -> HeraldReport:
    """Single QZ pass.

    ``ao`` is ``"absence"`` or ``"presence"`` for a classical absorptive
    object, or an electron subsystem label for a quantum one (type-I
    mapping). A classical absence flips the polarization with certainty; a
    classical presence freezes it with herald cos^2N(theta_N); a quantum
    control entangles electron and polarization without any redirection.
    """
    _check_mode(mode)
    n, tn = params.inner_cycles, params.theta_n
    if ao == "absence":
        tally = _Tally()
        out = np.array(
            hilbert.apply_on(
                state, variant.pr_matrix(math.pi / 2), polarization, where=dict([path]) if path else None
            ).amplitudes
        )
        _, cur2 = _norm_input(state)
        return _finish(state, out, cur2, tally, 1.0, mode, "qz", 0.0)
    if ao == "presence":
        norm_amps, cur2 = _norm_input(state)
        nstate = _tmp(state, norm_amps)
        gate_sel = dict([path]) if path else {}
        pass_sel = {polarization: variant.pass_index, **gate_sel}
        w_gate = hilbert.weight(nstate, gate_sel) if path else 1.0
        w_pass = hilbert.weight(nstate, pass_sel)
        closed = (1.0 - w_pass * math.sin(tn) ** 2) ** n
        tally = _Tally()
        if mode == "analytic":
            tally.charge(CAUSE_ABSORBED, w_pass * math.sin(tn) ** 2, count=n)
        else:
            work = np.array(norm_amps)
            ctrl_mask = hilbert.selector_mask(
                nstate, {polarization: variant.ctrl_index, **gate_sel}
            )
            remaining = 1.0
            for _ in range(n):
                work = np.array(
                    hilbert.apply_on(
                        _tmp(state, work), variant.pr_matrix(tn), polarization, where=gate_sel or None
                    ).amplitudes
                )
                w = float(np.sum(np.abs(work[ctrl_mask]) ** 2))
                work[ctrl_mask] = 0.0
                remaining = tally.charge_absolute(CAUSE_ABSORBED, w, remaining)
        out = state.amplitudes.copy()  # frozen input polarization
        return _finish(state, out, cur2, tally, closed, mode, "qz", w_pass)
    # quantum control
    return _mqz_family(
        state, [_rail(variant, path)], ao, params, mode, polarization, redirect=False, gate="qz"
    )


def mqz_gate(
    state: StateVector,
    variant: Variant,
    electron: str,
    params: ZenoParams,
    mode: str = "cycle",
    polarization: str = "pol",
    path: "tuple[str, int] | None" = None,
) -> HeraldReport:
    """QZ pass with a quantum control and redirection of every non-blocking
    component into absorption; heralds the collapsed electron-photon pair."""
    return _mqz_family(
        state, [_rail(variant, path)], electron, params, mode, polarization, redirect=True, gate="mqz"
    )


def dmqz_gate(
    state: StateVector,
    electron: str,
    path_pair: tuple[int, int],
    params: ZenoParams,
    mode: str = "cycle",
    polarization: str = "pol",
    path_label: str = "path",
) -> HeraldReport:
    """Dual-rail MQZ: an H-variant pass on ``path_pair[0]`` and a V-variant
    pass on ``path_pair[1]`` against the shared electron."""
    a, b = path_pair
    if a == b:
        raise ValueError("path_pair values must be distinct")
    rails = [_rail(Variant.H, (path_label, a)), _rail(Variant.V, (path_label, b))]
    return _mqz_family(state, rails, electron, params, mode, polarization, redirect=True, gate="dmqz")


def cqz_gate(
    state: StateVector,
    variant: Variant,
    ao: str,
    params: ZenoParams,
    mode: str = "cycle",
    polarization: str = "pol",
    path: "tuple[str, int] | None" = None,
) -> HeraldReport:
    """Chained QZ pass; ``ao`` as in :func:`qz_gate` but with the type-II
    electron mapping when quantum."""
    if ao in ("absence", "presence"):
        control: tuple[str, "str | int"] = ("classical", 1 if ao == "presence" else 0)
    else:
        control = ("electron", ao)
    return _cqz_family(
        state, [_rail(variant, path)], control, params, mode, polarization, gate="cqz"
    )


def dcqz_entangle(
    state: StateVector,
    electron: str,
    params: ZenoParams,
    mode: str = "cycle",
    polarization: str = "pol",
    path_label: str = "path",
    path_pair: tuple[int, int] = (0, 1),
) -> HeraldReport:
    """Dual CQZ: a heralded CNOT with the electron as control and the photon
    polarization as target, one CQZ rail per path value."""
    a, b = path_pair
    if a == b:
        raise ValueError("path_pair values must be distinct")
    rails = [_rail(Variant.H, (path_label, a)), _rail(Variant.V, (path_label, b))]
    return _cqz_family(
        state, rails, ("electron", electron), params, mode, polarization, gate="dcqz"
    )
