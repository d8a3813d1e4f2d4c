"""State-machine runtime ("flows") and the concrete retail flow definitions."""

from smagent.flows.engine import (
    ConstructorEffectFailedError,
    EffectError,
    FlowConflictError,
    FlowDefinition,
    FlowEngine,
    FlowError,
    FlowInfo,
    FlowInstance,
    FlowPausedError,
    IncompatibleInputError,
    MalformedSessionError,
    MissingParamError,
    NotPausedError,
    ResumeBlockedError,
    SessionState,
    SlotSpec,
    SlotTypeMismatchError,
    StateInstructions,
    TransitionResult,
    TransitionRule,
    UnknownFlowTypeError,
    UnknownInstanceError,
    UnknownSlotError,
    deserialize_session,
    serialize_session,
)

__all__ = [
    "ConstructorEffectFailedError",
    "EffectError",
    "FlowConflictError",
    "FlowDefinition",
    "FlowEngine",
    "FlowError",
    "FlowInfo",
    "FlowInstance",
    "FlowPausedError",
    "IncompatibleInputError",
    "MalformedSessionError",
    "MissingParamError",
    "NotPausedError",
    "ResumeBlockedError",
    "SessionState",
    "SlotSpec",
    "SlotTypeMismatchError",
    "StateInstructions",
    "TransitionResult",
    "TransitionRule",
    "UnknownFlowTypeError",
    "UnknownInstanceError",
    "UnknownSlotError",
    "deserialize_session",
    "serialize_session",
]
