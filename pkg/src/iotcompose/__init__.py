"""Compose semantically annotated IoT devices and cloud services with an HTN planner."""

__version__ = "0.1.0"
