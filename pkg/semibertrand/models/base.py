"""Base model class shared by all domain records."""

from pydantic import BaseModel as PydanticBaseModel
from pydantic import ConfigDict


class BaseModel(PydanticBaseModel):
    """Base model class that all domain records inherit from.

    Records are immutable and may hold numpy arrays; arrays handed to a record
    are marked read-only by the record's validators where it matters.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)
