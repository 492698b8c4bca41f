"""robojs: a checked JavaScript subset, safety middleware, and simulator
for programming small soccer robots."""

__version__ = "0.1.0"
