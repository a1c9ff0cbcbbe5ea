"""Bookkeeping helpers."""
