"""Exchange automorphisms of flag complexes and bounded complexes of domains on surfaces."""

__version__ = "0.1.0"
