"""Quadratic forms attached to a 1-form on an isolated complete intersection
singularity: local algebras, residue functionals, ranks and signatures."""

__version__ = "0.1.0"
