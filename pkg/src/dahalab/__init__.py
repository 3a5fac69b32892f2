"""Exact computer algebra for DAHA operators, stable limits, and the
double Dyck path algebra, over Q(q,t)."""

__version__ = "0.1.0"
