"""Integration tests package."""

