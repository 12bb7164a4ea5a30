"""Plan execution against REST endpoints, GSN-style ingestion and a mock server."""

from .client import (
    ANNOTATION_CONTEXT,
    ServiceError,
    decide_actuation,
    fetch_reading,
    http_request,
    reading_from_gsn,
    reading_to_gsn,
    strip_jsonld,
    upgrade_gsn_json,
)
from .executor import execute_plan
from .mock_server import MockServer, mock_server
from .model import (
    Binding,
    BindingStep,
    EndpointDescriptor,
    ExecutionReport,
    Reading,
    Role,
    ServiceConfigError,
    StepRecord,
    ThresholdRule,
    bindings_from_json,
    load_bindings,
    load_threshold,
    threshold_from_json,
)

__all__ = [
    "ANNOTATION_CONTEXT",
    "Binding",
    "BindingStep",
    "EndpointDescriptor",
    "ExecutionReport",
    "MockServer",
    "Reading",
    "Role",
    "ServiceConfigError",
    "ServiceError",
    "StepRecord",
    "ThresholdRule",
    "bindings_from_json",
    "decide_actuation",
    "execute_plan",
    "fetch_reading",
    "http_request",
    "load_bindings",
    "load_threshold",
    "mock_server",
    "reading_from_gsn",
    "reading_to_gsn",
    "strip_jsonld",
    "threshold_from_json",
    "upgrade_gsn_json",
]
