"""Generalized hypergraph-product codes and the orthoplex fracton models."""

__version__ = "0.1.0"
