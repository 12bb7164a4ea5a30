"""Run a plan against REST endpoints through declarative bindings."""

from __future__ import annotations

import json
import logging
import time
from dataclasses import dataclass, field
from typing import Sequence

from ..shop_syntax import Plan
from ..thing_model import ThingDescription, serialize, to_python
from .client import (
    ServiceError,
    decide_actuation,
    fetch_reading,
    http_request,
    reading_to_gsn,
    upgrade_gsn_json,
)
from .model import (
    Binding,
    BindingStep,
    ExecutionReport,
    Reading,
    Role,
    ServiceConfigError,
    StepRecord,
    ThresholdRule,
)

log = logging.getLogger(__name__)


@dataclass
class _Context:
    things: Sequence[ThingDescription]
    rule: ThresholdRule
    timeout: float
    reading: Reading | None = None
    percent: float | None = None
    stored_keys: list[str] = field(default_factory=list)

    def thing_for(self, sensor: str) -> ThingDescription:
        for thing in self.things:
            if thing.find_resource(sensor) is not None:
                return thing
        raise ServiceError("shape", f"no thing description declares sensor {sensor!r}")


def _run_step(bstep: BindingStep, args: dict, ctx: _Context, record: StepRecord) -> None:
    endpoint = bstep.endpoint
    if bstep.role is Role.READ_SENSOR:
        record.endpoint = endpoint.url(args)
        ctx.reading = fetch_reading(endpoint, args, ctx.timeout)
        record.response_status = 200
        record.response_body = vars(ctx.reading).copy()
        return

    if bstep.role is Role.DECIDE:
        if ctx.reading is None:
            raise ServiceError("shape", "decide step before any sensor reading")
        ctx.percent = decide_actuation(ctx.reading, ctx.rule)
        record.response_body = {"percent": ctx.percent}
        return

    if bstep.role is Role.ACTUATE:
        if ctx.percent is None:
            raise ServiceError("shape", "actuate step before any decision")
        args = {**args, "percent": ctx.percent}
        payload = endpoint.payload(args) if endpoint.payload_template is not None else {"percent": ctx.percent}
    else:  # STORE
        if ctx.reading is None:
            raise ServiceError("shape", "store step before any sensor reading")
        thing = ctx.thing_for(ctx.reading.source)
        doc = upgrade_gsn_json(reading_to_gsn(ctx.reading), thing)
        if endpoint.payload_template is not None:
            payload = endpoint.payload({**args, "reading": to_python(doc)})
        else:
            payload = serialize(doc)
    record.endpoint = endpoint.url(args)
    record.request_payload = payload if not isinstance(payload, str) else json.loads(payload)
    resp = http_request(endpoint.verb, record.endpoint, payload, ctx.timeout)
    record.response_status = resp.status
    record.response_body = resp.body
    if bstep.role is Role.STORE and isinstance(resp.body, dict) and "key" in resp.body:
        ctx.stored_keys.append(resp.body["key"])


def execute_plan(
    plan: Plan,
    bindings: Sequence[Binding],
    rule: ThresholdRule,
    things: Sequence[ThingDescription] = (),
    timeout: float = 5.0,
) -> ExecutionReport:
    """Execute plan steps in order, stopping at the first failure.

    Every step must have exactly one binding; this is checked before any
    request is sent.
    """
    report = ExecutionReport()
    by_head: dict[str, list[Binding]] = {}
    for b in bindings:
        by_head.setdefault(b.operator_head, []).append(b)

    resolved: list[tuple[Binding, dict]] = []
    for i, step in enumerate(plan.steps):
        matches = [b for b in by_head.get(step.head, []) if len(b.parameter_names) == len(step.args)]
        if len(matches) != 1:
            problem = "no binding" if not matches else "more than one binding"
            report.records.append(StepRecord(str(step), "unbound", error=f"{problem} for {step.head}",
                                             error_kind="unbound"))
            report.failed_step = i
            return report
        resolved.append((matches[0], dict(zip(matches[0].parameter_names, step.args))))

    ctx = _Context(things, rule, timeout)
    for i, (step, (binding, args)) in enumerate(zip(plan.steps, resolved)):
        for bstep in binding.steps:
            record = StepRecord(str(step), bstep.role.value)
            report.records.append(record)
            started = time.perf_counter()
            try:
                _run_step(bstep, args, ctx, record)
            except ServiceError as exc:
                record.error, record.error_kind = str(exc), exc.kind
                record.response_status = exc.status
                record.response_body = exc.body
                report.failed_step = i
            except ServiceConfigError as exc:
                record.error, record.error_kind = str(exc), "config"
                report.failed_step = i
            finally:
                record.duration_ms = (time.perf_counter() - started) * 1000.0
            if report.failed_step is not None:
                log.warning("step %d (%s) failed: %s", i, step, record.error)
                return report
    return report
