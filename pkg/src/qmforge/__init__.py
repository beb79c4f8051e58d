"""qmforge: exact word combinatorics and quasimorphism verification for free groups."""

__version__ = "0.1.0"
