"""Proof nets for classical propositional logic and Boolean category axioms."""

__version__ = "0.1.0"
