"""
Test Suite for ibplane
======================

- Unit tests (pytest, hypothesis)
- Integration tests (CLI and slow acceptance runs)
"""
