"""Test package for local quality checks."""
