"""Resource limits for the exhaustive searches.

Defaults can be overridden through environment variables, which is how the
CLI exposes them:

``STRUCTRAMSEY_MAX_RELATION_COPIES``
    largest copy set on which all equivalence relations are enumerated
    (Bell-number guard, default 12).
``STRUCTRAMSEY_NODE_LIMIT``
    maximum number of search nodes visited by a single coloring search
    (default 20 000 000).
``STRUCTRAMSEY_MAX_SYMMETRIES``
    automorphism groups larger than this are not used for pruning
    (default 5040).
"""

from __future__ import annotations

import os
from dataclasses import dataclass

ENV_MAX_RELATION_COPIES = "STRUCTRAMSEY_MAX_RELATION_COPIES"
ENV_NODE_LIMIT = "STRUCTRAMSEY_NODE_LIMIT"
ENV_MAX_SYMMETRIES = "STRUCTRAMSEY_MAX_SYMMETRIES"


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {raw!r}") from None
    if value < 1:
        raise ValueError(f"{name} must be positive, got {value}")
    return value


@dataclass(frozen=True)
class Limits:
    max_relation_copies: int = 12
    node_limit: int = 20_000_000
    max_symmetries: int = 5040

    @classmethod
    def from_env(cls) -> "Limits":
        base = cls()
        return cls(
            max_relation_copies=_env_int(ENV_MAX_RELATION_COPIES, base.max_relation_copies),
            node_limit=_env_int(ENV_NODE_LIMIT, base.node_limit),
            max_symmetries=_env_int(ENV_MAX_SYMMETRIES, base.max_symmetries),
        )


def current_limits(limits: Limits | None = None) -> Limits:
    return limits if limits is not None else Limits.from_env()
