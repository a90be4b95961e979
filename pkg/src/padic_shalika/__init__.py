"""Exact local computations for p-adic L-functions of GL(2n) with Shalika models."""
