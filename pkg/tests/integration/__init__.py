"""Integration tests: CLI runs and end-to-end acceptance checks."""
