"""Counting, cell decomposition, reporting and the acceptance harness."""
