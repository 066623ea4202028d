"""Experiment harness: configs, figure presets, runs, sweeps and verification."""
