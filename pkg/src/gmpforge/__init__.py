"""Evolve genetic micro-programs that generate test inputs for prime-path coverage."""

__version__ = "0.1.0"
