"""Command-line interface for the LMB adaptive birth experiments."""
