"""Counterfactual full-duplex quantum communication toolkit.

Simulates the quantum-Zeno gate family (QZ, CQZ, MQZ, DMQZ, DCQZ), runs the
duplex coding and telexchanging protocols end to end with erasure
bookkeeping, and computes the classical and quantum capacities they induce.
"""
from .hilbert import (
    LocalUnitary,
    MeasurementResult,
    StateVector,
    SubsystemSpec,
    absorb,
    apply_on,
    apply_unitary,
    basis_state,
    fidelity,
    from_amplitudes,
    measure,
    reorder,
    tensor,
)
from .zeno import (
    AOMapping,
    Event,
    HeraldReport,
    Variant,
    ZenoParams,
    cqz_gate,
    dcqz_entangle,
    dmqz_gate,
    lambda0,
    lambda1,
    lambda2,
    lambda3,
    lambda4,
    mqz_closed_form,
    mqz_gate,
    qz_gate,
)
from .protocols import (
    DuplexMessage,
    ProtocolOutcome,
    QubitState,
    TelexMessage,
    bell_state,
    ddnot_ideal,
    dnot_ideal,
    duplex_decode,
    duplex_encode,
    duplex_run,
    telex_run,
)
from .channels import (
    AsymmetricBEC,
    CapacityResult,
    DiscrepancyRecord,
    QECModel,
    bec_capacity,
    bec_mutual_information,
    binary_entropy,
    collect_discrepancies,
    duplex_capacity,
    optimize_duplex_K,
    optimize_telex,
    qec_apply,
    telex_capacity,
    telex_efficiency,
)
from .montecarlo import TrialEnsemble, sample_protocol

__version__ = "0.1.0"
