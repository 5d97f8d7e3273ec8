"""imlab: a finite-model workbench for transitive intuitionistic modal logics."""

__version__ = "0.1.0"
