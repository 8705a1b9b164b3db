"""Unit tests for the ibplane package."""
