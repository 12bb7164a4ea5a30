"""Binding, reading and execution-report types plus their JSON loaders."""

from __future__ import annotations

import enum
import json
import re
import string
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any


class ServiceConfigError(ValueError):
    pass


class Role(enum.Enum):
    READ_SENSOR = "read_sensor"
    DECIDE = "decide"
    ACTUATE = "actuate"
    STORE = "store"


# values the executor computes at run time and may splice into payloads
RUNTIME_HOLES = frozenset({"percent", "reading"})

_HOLE = re.compile(r"\{([A-Za-z_][A-Za-z0-9_]*)\}")


def _holes_in(value: Any) -> set[str]:
    if isinstance(value, str):
        return {name for _, name, _, _ in string.Formatter().parse(value) if name}
    if isinstance(value, dict):
        return set().union(*(_holes_in(v) for v in value.values())) if value else set()
    if isinstance(value, list):
        return set().union(*(_holes_in(v) for v in value)) if value else set()
    return set()


@dataclass(frozen=True)
class EndpointDescriptor:
    base_url: str
    path_template: str
    verb: str = "GET"
    payload_template: Any = None

    def __post_init__(self):
        if self.verb not in ("GET", "POST"):
            raise ServiceConfigError(f"unsupported verb {self.verb!r}")

    def holes(self) -> set[str]:
        return _holes_in(self.path_template) | _holes_in(self.payload_template)

    def url(self, args: dict[str, Any]) -> str:
        try:
            path = self.path_template.format(**{k: str(v) for k, v in args.items()})
        except KeyError as exc:
            raise ServiceConfigError(f"no value for path hole {exc.args[0]!r}") from None
        return self.base_url.rstrip("/") + "/" + path.lstrip("/")

    def payload(self, args: dict[str, Any]) -> Any:
        """Fill the payload template; a string that is exactly ``{name}`` takes the raw value."""

        def fill(value):
            if isinstance(value, str):
                whole = _HOLE.fullmatch(value)
                if whole:
                    if whole.group(1) not in args:
                        raise ServiceConfigError(f"no value for payload hole {whole.group(1)!r}")
                    return args[whole.group(1)]
                try:
                    return value.format(**args)
                except KeyError as exc:
                    raise ServiceConfigError(f"no value for payload hole {exc.args[0]!r}") from None
            if isinstance(value, dict):
                return {k: fill(v) for k, v in value.items()}
            if isinstance(value, list):
                return [fill(v) for v in value]
            return value

        return fill(self.payload_template)


@dataclass(frozen=True)
class BindingStep:
    role: Role
    endpoint: EndpointDescriptor | None = None


@dataclass(frozen=True)
class Binding:
    operator_head: str
    parameter_names: tuple[str, ...]
    steps: tuple[BindingStep, ...]

    def __post_init__(self):
        if not self.operator_head.startswith("!"):
            raise ServiceConfigError(f"binding head {self.operator_head!r} must start with '!'")
        allowed = set(self.parameter_names) | RUNTIME_HOLES
        for step in self.steps:
            if step.role is not Role.DECIDE and step.endpoint is None:
                raise ServiceConfigError(f"{self.operator_head}: {step.role.value} step needs an endpoint")
            if step.endpoint is not None:
                unknown = step.endpoint.holes() - allowed
                if unknown:
                    raise ServiceConfigError(
                        f"{self.operator_head}: template holes {sorted(unknown)} are not parameters"
                    )


@dataclass(frozen=True)
class Reading:
    source: str
    value: float
    unit: str
    timestamp: int

    def __post_init__(self):
        if not self.unit:
            raise ServiceConfigError("reading unit must be non-empty")


@dataclass(frozen=True)
class ThresholdRule:
    low: float
    high: float
    on_value: float = 100.0
    off_value: float = 0.0

    def __post_init__(self):
        if not self.low < self.high:
            raise ServiceConfigError("threshold low must be below high")
        if not 0 <= self.off_value <= self.on_value <= 100:
            raise ServiceConfigError("threshold values must satisfy 0 <= off <= on <= 100")


@dataclass
class StepRecord:
    step: str
    role: str
    endpoint: str | None = None
    request_payload: Any = None
    response_status: int | None = None
    response_body: Any = None
    duration_ms: float = 0.0
    error: str | None = None
    error_kind: str | None = None


@dataclass
class ExecutionReport:
    records: list[StepRecord] = field(default_factory=list)
    failed_step: int | None = None

    @property
    def completed(self) -> bool:
        return self.failed_step is None

    @property
    def status(self) -> str:
        return "Completed" if self.completed else f"FailedAtStep({self.failed_step})"

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "records": [vars(r) for r in self.records],
        }


def _endpoint_from(data: dict | None) -> EndpointDescriptor | None:
    if data is None:
        return None
    try:
        return EndpointDescriptor(
            base_url=data["base_url"],
            path_template=data["path_template"],
            verb=data.get("verb", "GET"),
            payload_template=data.get("payload_template"),
        )
    except KeyError as exc:
        raise ServiceConfigError(f"endpoint is missing {exc.args[0]!r}") from None


def bindings_from_json(data: list) -> list[Binding]:
    if not isinstance(data, list):
        raise ServiceConfigError("bindings file must hold a JSON array")
    out = []
    for entry in data:
        try:
            steps = tuple(
                BindingStep(Role(step["role"]), _endpoint_from(step.get("endpoint")))
                for step in entry["steps"]
            )
            out.append(Binding(entry["operator_head"], tuple(entry["parameter_names"]), steps))
        except KeyError as exc:
            raise ServiceConfigError(f"binding is missing {exc.args[0]!r}") from None
        except ValueError as exc:
            raise ServiceConfigError(str(exc)) from None
    return out


def load_bindings(path: str | Path, base_url: str | None = None) -> list[Binding]:
    """Read a bindings file; ``base_url`` replaces every endpoint's base URL."""
    bindings = bindings_from_json(json.loads(Path(path).read_text("utf-8")))
    if base_url is not None:
        bindings = [rebase(b, base_url) for b in bindings]
    return bindings


def rebase(binding: Binding, base_url: str) -> Binding:
    steps = tuple(
        replace(s, endpoint=replace(s.endpoint, base_url=base_url)) if s.endpoint else s
        for s in binding.steps
    )
    return replace(binding, steps=steps)


def threshold_from_json(data: dict) -> ThresholdRule:
    try:
        return ThresholdRule(float(data["low"]), float(data["high"]), float(data["on"]), float(data["off"]))
    except KeyError as exc:
        raise ServiceConfigError(f"threshold config is missing {exc.args[0]!r}") from None


def load_threshold(path: str | Path) -> ThresholdRule:
    return threshold_from_json(json.loads(Path(path).read_text("utf-8")))
