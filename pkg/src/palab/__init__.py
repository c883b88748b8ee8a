"""Finite-model workbench for right-cancellable protomodular algebras."""

__version__ = "0.1.0"
