"""slp-access error codes and exceptions."""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum


class ErrorCategory(IntEnum):
    SUCCESS = 0x00
    FORMAT = 0x01
    RANGE = 0x02
    RESOURCE = 0x03
    CONTRACT = 0x04
    INTERNAL = 0xFF


class ErrorCode(IntEnum):
    # Success
    SUCCESS = 0x0000

    # Format
    INVALID_FORMAT = 0x0100
    FORWARD_REFERENCE = 0x0101
    DUPLICATE_ID = 0x0102
    MISSING_ROOT = 0x0103
    INVALID_CODEPOINT = 0x0104

    # Range
    INDEX_OUT_OF_RANGE = 0x0200
    EMPTY_INPUT = 0x0201
    INVALID_PARAMS = 0x0202
    NON_MONOTONE = 0x0203

    # Resource
    OVERFLOW = 0x0300
    CAP_EXCEEDED = 0x0301

    # Contract
    PRECONDITION = 0x0400
    MATCHER_CONTRACT = 0x0401
    NOT_A_PAIR = 0x0402

    # Internal
    INTERNAL_ERROR = 0xFF00
    UNKNOWN = 0xFFFF

    @property
    def category(self) -> ErrorCategory:
        return ErrorCategory(self.value >> 8)


@dataclass(frozen=True)
class SlpError(Exception):
    code: ErrorCode
    message: str

    def __str__(self) -> str:
        return f"{self.code.name}({self.code:#06x}): {self.message}"


# Allow Python's Exception machinery to set __traceback__/__context__/__cause__
# while keeping dataclass fields frozen.
_EXCEPTION_ATTRS = frozenset(("__traceback__", "__context__", "__cause__"))
_frozen_setattr = SlpError.__setattr__


def _slp_error_setattr(self: SlpError, name: str, value: object) -> None:
    if name in _EXCEPTION_ATTRS:
        object.__setattr__(self, name, value)
    else:
        _frozen_setattr(self, name, value)


SlpError.__setattr__ = _slp_error_setattr  # type: ignore[method-assign]
