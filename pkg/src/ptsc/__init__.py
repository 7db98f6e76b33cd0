"""Perturbation-tolerant structural controllability of structured linear systems."""
