"""Utils package: random substreams, stage timers, sampling and file helpers."""
