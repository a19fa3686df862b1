"""Tests for xxzbethe."""
