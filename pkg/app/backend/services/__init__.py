"""
Backend services for the simulation.

Each subpackage owns one part of the model (optics, matter, coupler) or its
files (persistence). The CLI calls `run_service`, not the kernels directly.
"""
