"""
Test suite for _config.py
Tests configuration validation and safe parsing
"""

import os
import sys
from unittest.mock import patch

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "scripts"))

import pytest


class TestSafeParsing:
    """Test the _safe_int helper"""

    def test_safe_int_valid(self):
        from _config import _safe_int

        assert _safe_int("42", 0) == 42
        assert _safe_int("0", 10) == 0
        assert _safe_int("-12", 0) == -12

    def test_safe_int_invalid(self):
        from _config import _safe_int

        assert _safe_int("abc", 7) == 7
        assert _safe_int("", 10) == 10
        assert _safe_int("3.5", 4) == 4  # float string is invalid for int

    def test_safe_int_none(self):
        from _config import _safe_int

        assert _safe_int(None, 5) == 5


class TestDefaults:
    """Test the shipped defaults"""

    def test_defaults_are_valid(self):
        from _config import Config

        is_valid, errors = Config.validate()
        assert is_valid is True
        assert errors == []

    def test_window_contains_zero(self):
        from _config import Config

        assert Config.NMIN <= 0 <= Config.NMAX


class TestConfigValidation:
    """Test Config.validate() method"""

    def test_negative_order(self):
        from _config import Config

        with patch.object(Config, "ORDER", -1):
            is_valid, errors = Config.validate()
            assert is_valid is False
            assert "CKM_ORDER must be non-negative" in errors

    def test_order_zero_allowed(self):
        from _config import Config

        with patch.object(Config, "ORDER", 0):
            is_valid, _ = Config.validate()
            assert is_valid is True

    def test_kmax_too_small(self):
        from _config import Config

        with patch.object(Config, "KMAX", 0):
            is_valid, errors = Config.validate()
            assert is_valid is False
            assert "CKM_KMAX must be at least 1" in errors

    def test_inverted_window(self):
        from _config import Config

        with patch.object(Config, "NMIN", 5), patch.object(Config, "NMAX", 2):
            is_valid, errors = Config.validate()
            assert is_valid is False
            assert "CKM_NMIN must not exceed CKM_NMAX" in errors

    def test_negative_intertwiner_range(self):
        from _config import Config

        with patch.object(Config, "INTERTWINER_NMAX", -1):
            is_valid, errors = Config.validate()
            assert is_valid is False
            assert "CKM_INTERTWINER_NMAX must be non-negative" in errors

    def test_bad_log_level(self):
        from _config import Config

        with patch.object(Config, "LOG_LEVEL", "VERBOSE"):
            is_valid, errors = Config.validate()
            assert is_valid is False
            assert any("LOG_LEVEL" in e for e in errors)

    def test_multiple_errors(self):
        from _config import Config

        with patch.object(Config, "ORDER", -2), patch.object(Config, "KMAX", 0):
            is_valid, errors = Config.validate()
            assert is_valid is False
            assert len(errors) == 2


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
