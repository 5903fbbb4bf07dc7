"""Experiment harness: random trials, sweeps, property suites and the CLI."""
