"""Q-learning for LTL objectives with an exact model checker."""

__version__ = "0.1.0"
