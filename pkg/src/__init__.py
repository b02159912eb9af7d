"""Multi-sensor LMB tracking with efficient adaptive Gibbs birth."""
