"""
Utility functions and classes for the fat point resolution toolkit.

This module provides the logging setup, the error hierarchy with the
input parsers, and the on-disk result cache.
"""

from .logging_config import configure_logging, get_logger
from .validation import (
    ValidationError,
    DomainError,
    DimensionError,
    UnsupportedError,
    TheoryGapError,
    CharacteristicError,
    DegeneracyError,
    VerificationError,
    ResolutionError,
    validate_point_count,
    validate_multiplicities,
    parse_multiplicities,
    parse_degree_range,
    parse_order,
    parse_divisor_class,
    parse_int_list,
)

__all__ = [
    'configure_logging',
    'get_logger',
    'ValidationError',
    'DomainError',
    'DimensionError',
    'UnsupportedError',
    'TheoryGapError',
    'CharacteristicError',
    'DegeneracyError',
    'VerificationError',
    'ResolutionError',
    'validate_point_count',
    'validate_multiplicities',
    'parse_multiplicities',
    'parse_degree_range',
    'parse_order',
    'parse_divisor_class',
    'parse_int_list',
]
