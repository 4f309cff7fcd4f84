"""
Configuration Management for the coloured Kac-Moody toolkit
Loads computation defaults from environment variables with validation
"""

import logging
import os
from typing import List, Tuple

from dotenv import load_dotenv

# Load environment variables
load_dotenv()

logger = logging.getLogger(__name__)

_LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


def _safe_int(value: str, default: int) -> int:
    """Safely parse an integer from string, returning default on failure."""
    try:
        return int(value)
    except (ValueError, TypeError):
        logger.warning(f"Invalid integer value '{value}', using default {default}")
        return default


class Config:
    """Default computation settings; command-line flags override them per invocation"""

    # Truncation order M: every series is computed modulo h^(M+1)
    ORDER: int = _safe_int(os.getenv("CKM_ORDER", "4"), 4)

    # Solve horizon and basis-index horizon
    KMAX: int = _safe_int(os.getenv("CKM_KMAX", "12"), 12)

    # Weight window for tabulated colourings and pointwise checks
    NMIN: int = _safe_int(os.getenv("CKM_NMIN", "-12"), -12)
    NMAX: int = _safe_int(os.getenv("CKM_NMAX", "12"), 12)

    # Highest weights n = 0..INTERTWINER_NMAX checked by the intertwiner check
    INTERTWINER_NMAX: int = _safe_int(os.getenv("CKM_INTERTWINER_NMAX", "5"), 5)

    # Seed for every randomized generator
    SEED: int = _safe_int(os.getenv("CKM_SEED", "20240917"), 20240917)

    # System settings
    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "INFO").upper()

    @classmethod
    def validate(cls) -> Tuple[bool, List[str]]:
        """
        Validate configuration settings

        Returns:
            tuple: (is_valid, list_of_errors)
        """
        errors = []

        if cls.ORDER < 0:
            errors.append("CKM_ORDER must be non-negative")

        if cls.KMAX < 1:
            errors.append("CKM_KMAX must be at least 1")

        if cls.NMIN > cls.NMAX:
            errors.append("CKM_NMIN must not exceed CKM_NMAX")

        if cls.INTERTWINER_NMAX < 0:
            errors.append("CKM_INTERTWINER_NMAX must be non-negative")

        if cls.LOG_LEVEL not in _LOG_LEVELS:
            errors.append(f"LOG_LEVEL must be one of {', '.join(_LOG_LEVELS)}")

        return (len(errors) == 0, errors)


# Validate configuration on import
is_valid, validation_errors = Config.validate()
if not is_valid:
    for error in validation_errors:
        logger.warning(f"Configuration error: {error}")
