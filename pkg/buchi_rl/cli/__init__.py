"""Experiment harness: configuration files, seeded runs and CSV outputs."""
