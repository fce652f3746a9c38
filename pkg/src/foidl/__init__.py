"""First-order decision list induction over intensional background knowledge."""

__version__ = "0.1.0"
