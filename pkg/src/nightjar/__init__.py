"""De-identification toolkit for short social-media texts."""

from .model import (
    AdapterError,
    AnnotatedTweet,
    ConfigError,
    DataError,
    Detection,
    Edit,
    EntityLabel,
    ENTITY_CLASS,
    MaskedTweet,
    NightjarError,
    REMOVAL_CLASS,
    Span,
    Tweet,
    label_class,
    make_detection,
)

__version__ = "0.1.0"

__all__ = [
    "AdapterError",
    "AnnotatedTweet",
    "ConfigError",
    "DataError",
    "Detection",
    "Edit",
    "EntityLabel",
    "ENTITY_CLASS",
    "MaskedTweet",
    "NightjarError",
    "REMOVAL_CLASS",
    "Span",
    "Tweet",
    "label_class",
    "make_detection",
    "__version__",
]
