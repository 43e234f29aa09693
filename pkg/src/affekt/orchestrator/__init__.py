from .schema import (
    EmotionAnnotation,
    FailureRecord,
    ResponseValidationError,
    build_prompt,
    parse_and_validate,
    validate_annotation,
)
from .pool import AllEndpointsDown, Endpoint, EndpointPool
from .client import EndpointClient, TransportError, classify_one
from .runner import (
    CheckpointError,
    RunnerConfig,
    RunReport,
    load_annotations,
    load_failures,
    resume,
    run_batch,
)
from .mock import MockBehavior, MockEmotionServer, mock_serve

__all__ = [
    "AllEndpointsDown",
    "CheckpointError",
    "EmotionAnnotation",
    "Endpoint",
    "EndpointClient",
    "EndpointPool",
    "FailureRecord",
    "MockBehavior",
    "MockEmotionServer",
    "ResponseValidationError",
    "RunReport",
    "RunnerConfig",
    "TransportError",
    "build_prompt",
    "classify_one",
    "load_annotations",
    "load_failures",
    "mock_serve",
    "parse_and_validate",
    "resume",
    "run_batch",
    "validate_annotation",
]
