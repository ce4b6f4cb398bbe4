from .base import (
    AuthenticationError,
    Backend,
    BackendError,
    BackendTimeout,
    CompletionRequest,
    CompletionResult,
    TransportError,
)
from .http import API_KEY_ENV, HttpBackend, HttpSettings
from .oracle import OracleBackend
from .stochastic import RecallParams, StochasticBackend, stochastic_recall_probability

__all__ = [
    "API_KEY_ENV",
    "AuthenticationError",
    "Backend",
    "BackendError",
    "BackendTimeout",
    "CompletionRequest",
    "CompletionResult",
    "HttpBackend",
    "HttpSettings",
    "OracleBackend",
    "RecallParams",
    "StochasticBackend",
    "TransportError",
    "stochastic_recall_probability",
]
