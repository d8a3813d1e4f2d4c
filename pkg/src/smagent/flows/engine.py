"""Generic state-machine runtime driven by an agent through tool calls.

A flow definition declares states, typed slots, an exact-key transition
table, named effects, and per-state instruction renderers. Instances are
plain serializable data; all behavior lives in the definition, so a session
(auth state + active instances) can be persisted between turns and rebuilt
against the registered definitions.

Transition matching is strict: the input's key set must equal a rule's key
set exactly, the rule's guard must accept the values, and every slot the
rule requires must already be filled. Anything else is IncompatibleInput
and leaves the instance untouched.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Callable

SESSION_ENVELOPE_VERSION = 1


class FlowError(Exception):
    """Base class for flow-engine errors."""


class UnknownFlowTypeError(FlowError):
    pass


class MissingParamError(FlowError):
    def __init__(self, name: str):
        super().__init__(f"missing required parameter {name!r}")
        self.name = name


class FlowConflictError(FlowError):
    """An active (non-paused) instance already targets this flow_type/order."""


class UnknownSlotError(FlowError):
    def __init__(self, name: str):
        super().__init__(f"unknown slot {name!r}")
        self.name = name


class SlotTypeMismatchError(FlowError):
    def __init__(self, name: str, expected: type):
        super().__init__(f"slot {name!r} expects {expected.__name__}")
        self.name = name


class IncompatibleInputError(FlowError):
    """No transition at the current state matches the given input."""


class FlowPausedError(FlowError):
    pass


class NotPausedError(FlowError):
    pass


class ResumeBlockedError(FlowError):
    """The definition's resume guard refused to resume the instance."""


class UnknownInstanceError(FlowError):
    pass


class MalformedSessionError(FlowError):
    pass


class EffectError(FlowError):
    """An effect refused or failed; the transition it guards does not happen."""

    def __init__(self, message: str, codes: list[str] | None = None):
        super().__init__(message)
        self.codes = codes or []


class ConstructorEffectFailedError(FlowError):
    """Dry-run on instantiation failed; no instance was created."""

    def __init__(self, message: str, codes: list[str] | None = None):
        super().__init__(message)
        self.codes = codes or []


@dataclass
class SlotSpec:
    type: type
    required: bool = True


@dataclass
class StateInstructions:
    instructions: str
    suggested_message: str | None = None


@dataclass
class TransitionRule:
    """One edge: exact input-key set, optional value guard, slot gate, target."""

    input_keys: frozenset[str]
    target: str
    effect_id: str | None = None
    guard: Callable[[dict], bool] | None = None
    required_slots: tuple[str, ...] = ()

    def matches(self, user_input: dict, slots: dict) -> bool:
        if set(user_input) != set(self.input_keys):
            return False
        if any(s not in slots for s in self.required_slots):
            return False
        if self.guard is not None and not self.guard(user_input):
            return False
        return True


@dataclass
class FlowDefinition:
    flow_type: str
    states: frozenset[str]
    initial_state: str
    terminal_states: frozenset[str]
    slot_schema: dict[str, SlotSpec]
    transitions: dict[str, list[TransitionRule]]
    renderers: dict[str, Callable[["FlowInstance"], StateInstructions]]
    effects: dict[str, Callable[["FlowInstance", Any], str]]
    required_params: tuple[str, ...] = ()
    resume_guard: Callable[["FlowInstance", "SessionState"], str | None] | None = None
    resume_hint: str = "Resume this flow with flow_resume when it can continue."

    def check(self) -> None:
        if self.initial_state not in self.states:
            raise ValueError(f"{self.flow_type}: initial state not declared")
        if self.initial_state in self.terminal_states:
            raise ValueError(f"{self.flow_type}: initial state must not be terminal")
        if not self.terminal_states:
            raise ValueError(f"{self.flow_type}: needs at least one terminal state")
        if not self.terminal_states <= self.states:
            raise ValueError(f"{self.flow_type}: terminal states not declared")
        constructor_edges = [
            r for r in self.transitions.get(self.initial_state, []) if not r.input_keys
        ]
        if len(constructor_edges) != 1:
            raise ValueError(f"{self.flow_type}: exactly one constructor edge required")
        for state, rules in self.transitions.items():
            if state not in self.states:
                raise ValueError(f"{self.flow_type}: transition from undeclared state {state}")
            for rule in rules:
                if rule.target not in self.states:
                    raise ValueError(f"{self.flow_type}: transition target {rule.target} undeclared")
                if rule.effect_id is not None and rule.effect_id not in self.effects:
                    raise ValueError(f"{self.flow_type}: unregistered effect {rule.effect_id}")
                for slot in rule.required_slots:
                    if slot not in self.slot_schema:
                        raise ValueError(f"{self.flow_type}: rule requires unknown slot {slot}")


@dataclass
class FlowInstance:
    instance_id: str
    flow_type: str
    state: str
    slots: dict[str, Any] = field(default_factory=dict)
    internals: dict[str, Any] = field(default_factory=dict)
    paused: bool = False

    @property
    def params(self) -> dict:
        return self.internals.get("params", {})

    def to_json(self) -> dict:
        return {
            "instance_id": self.instance_id,
            "flow_type": self.flow_type,
            "state": self.state,
            "slots": self.slots,
            "internals": self.internals,
            "paused": self.paused,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "FlowInstance":
        return cls(
            instance_id=obj["instance_id"],
            flow_type=obj["flow_type"],
            state=obj["state"],
            slots=dict(obj["slots"]),
            internals=dict(obj["internals"]),
            paused=obj["paused"],
        )


@dataclass
class FlowInfo:
    """State-dependent rendering of one instance for the working memory."""

    instance_id: str
    flow_type: str
    state: str
    filled_slots: dict[str, Any]
    missing_slots: list[str]
    instructions: str
    suggested_message: str | None
    expected_inputs: list[str]
    paused: bool = False

    @property
    def suggestion_id(self) -> str:
        return f"{self.instance_id}:{self.state}"


@dataclass
class TransitionResult:
    new_state: str
    effect_output: str | None
    flow_info: FlowInfo
    terminal: bool


@dataclass
class SessionState:
    authenticated_user_id: str | None = None
    active_flows: list[FlowInstance] = field(default_factory=list)
    turn_index: int = 0
    next_instance_seq: int = 1

    def find(self, instance_id: str) -> FlowInstance | None:
        for inst in self.active_flows:
            if inst.instance_id == instance_id:
                return inst
        return None

    def to_json(self) -> dict:
        return {
            "authenticated_user_id": self.authenticated_user_id,
            "active_flows": [f.to_json() for f in self.active_flows],
            "turn_index": self.turn_index,
            "next_instance_seq": self.next_instance_seq,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "SessionState":
        return cls(
            authenticated_user_id=obj["authenticated_user_id"],
            active_flows=[FlowInstance.from_json(f) for f in obj["active_flows"]],
            turn_index=obj["turn_index"],
            next_instance_seq=obj["next_instance_seq"],
        )


def serialize_session(session: SessionState) -> str:
    envelope = {"version": SESSION_ENVELOPE_VERSION, "session": session.to_json()}
    return json.dumps(envelope, sort_keys=True, separators=(",", ":"))


def deserialize_session(text: str) -> SessionState:
    try:
        envelope = json.loads(text)
    except (json.JSONDecodeError, TypeError) as exc:
        raise MalformedSessionError(f"unparseable session: {exc}") from exc
    if not isinstance(envelope, dict) or envelope.get("version") != SESSION_ENVELOPE_VERSION:
        raise MalformedSessionError("missing or unsupported session envelope version")
    try:
        return SessionState.from_json(envelope["session"])
    except (KeyError, TypeError, AttributeError) as exc:
        raise MalformedSessionError(f"bad session payload: {exc}") from exc


class FlowEngine:
    """Registry of flow definitions plus the operations the agent drives."""

    def __init__(self) -> None:
        self._definitions: dict[str, FlowDefinition] = {}

    def register(self, definition: FlowDefinition) -> None:
        definition.check()
        self._definitions[definition.flow_type] = definition

    def definition(self, flow_type: str) -> FlowDefinition:
        defn = self._definitions.get(flow_type)
        if defn is None:
            raise UnknownFlowTypeError(f"unknown flow type {flow_type!r}")
        return defn

    @property
    def flow_types(self) -> list[str]:
        return sorted(self._definitions)

    # -- lifecycle ---------------------------------------------------------

    def instantiate(
        self, session: SessionState, flow_type: str, params: dict, ctx: Any
    ) -> FlowInstance:
        defn = self.definition(flow_type)
        for name in defn.required_params:
            if name not in params:
                raise MissingParamError(name)

        order_id = params.get("order_id")
        if order_id is not None:
            for inst in session.active_flows:
                if (
                    inst.flow_type == flow_type
                    and not inst.paused
                    and inst.params.get("order_id") == order_id
                ):
                    raise FlowConflictError(
                        f"{flow_type} for {order_id} already active as {inst.instance_id}"
                    )

        instance = FlowInstance(
            instance_id=f"flow-{session.next_instance_seq}",
            flow_type=flow_type,
            state=defn.initial_state,
            internals={"params": params},
        )
        constructor_edge = next(
            r for r in defn.transitions[defn.initial_state] if not r.input_keys
        )
        try:
            output = self._run_effect(defn, constructor_edge.effect_id, instance, ctx)
        except EffectError as exc:
            raise ConstructorEffectFailedError(str(exc), codes=exc.codes) from exc
        instance.state = constructor_edge.target
        instance.internals["constructor_output"] = output

        session.next_instance_seq += 1
        if instance.state not in defn.terminal_states:
            session.active_flows.append(instance)
        return instance

    def set_slots(self, session: SessionState, instance_id: str, slot_values: dict) -> FlowInfo:
        instance = self._require(session, instance_id)
        defn = self.definition(instance.flow_type)
        for name, value in slot_values.items():
            spec = defn.slot_schema.get(name)
            if spec is None:
                raise UnknownSlotError(name)
            if not isinstance(value, spec.type):
                raise SlotTypeMismatchError(name, spec.type)
        instance.slots.update(slot_values)
        return self.flow_info(instance)

    def next(
        self, session: SessionState, instance_id: str, user_input: dict, ctx: Any
    ) -> TransitionResult:
        instance = self._require(session, instance_id)
        if instance.paused:
            raise FlowPausedError(f"{instance_id} is paused; resume it first")
        defn = self.definition(instance.flow_type)
        rule = None
        for candidate in defn.transitions.get(instance.state, []):
            if candidate.input_keys and candidate.matches(user_input, instance.slots):
                rule = candidate
                break
        if rule is None:
            raise IncompatibleInputError(
                f"input keys {sorted(user_input)} do not match any transition "
                f"from state {instance.state} of {instance.flow_type}"
            )
        output = self._run_effect(defn, rule.effect_id, instance, ctx)
        instance.state = rule.target
        terminal = instance.state in defn.terminal_states
        if terminal:
            session.active_flows = [
                f for f in session.active_flows if f.instance_id != instance_id
            ]
        return TransitionResult(
            new_state=instance.state,
            effect_output=output,
            flow_info=self.flow_info(instance),
            terminal=terminal,
        )

    def pause(self, session: SessionState, instance_id: str) -> FlowInfo:
        instance = self._require(session, instance_id)
        instance.paused = True
        return self.flow_info(instance)

    def resume(self, session: SessionState, instance_id: str) -> FlowInfo:
        instance = self._require(session, instance_id)
        if not instance.paused:
            raise NotPausedError(f"{instance_id} is not paused")
        defn = self.definition(instance.flow_type)
        if defn.resume_guard is not None:
            blocked = defn.resume_guard(instance, session)
            if blocked:
                raise ResumeBlockedError(blocked)
        instance.paused = False
        return self.flow_info(instance)

    def cancel_flow(self, session: SessionState, instance_id: str) -> None:
        self._require(session, instance_id)
        session.active_flows = [f for f in session.active_flows if f.instance_id != instance_id]

    # -- rendering ---------------------------------------------------------

    def flow_info(self, instance: FlowInstance) -> FlowInfo:
        defn = self.definition(instance.flow_type)
        renderer = defn.renderers.get(instance.state)
        rendered = renderer(instance) if renderer else StateInstructions(instructions="")
        instructions = rendered.instructions
        if instance.paused:
            instructions = f"[paused] {defn.resume_hint}"
        missing = [
            name
            for name, spec in sorted(defn.slot_schema.items())
            if spec.required and name not in instance.slots
        ]
        expected: set[str] = set()
        for rule in defn.transitions.get(instance.state, []):
            expected.update(rule.input_keys)
        return FlowInfo(
            instance_id=instance.instance_id,
            flow_type=instance.flow_type,
            state=instance.state,
            filled_slots=dict(sorted(instance.slots.items())),
            missing_slots=missing,
            instructions=instructions,
            suggested_message=rendered.suggested_message,
            expected_inputs=sorted(expected),
            paused=instance.paused,
        )

    def render_flow_infos(self, session: SessionState) -> list[FlowInfo]:
        return [self.flow_info(inst) for inst in session.active_flows]

    # -- internals ---------------------------------------------------------

    def _require(self, session: SessionState, instance_id: str) -> FlowInstance:
        instance = session.find(instance_id)
        if instance is None:
            raise UnknownInstanceError(f"no active flow instance {instance_id!r}")
        return instance

    def _run_effect(
        self, defn: FlowDefinition, effect_id: str | None, instance: FlowInstance, ctx: Any
    ) -> str | None:
        if effect_id is None:
            return None
        return defn.effects[effect_id](instance, ctx)
