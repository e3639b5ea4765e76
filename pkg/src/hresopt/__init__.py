"""Sizing of a wind/PV/biogas/battery hybrid system with population metaheuristics."""
__version__ = "0.1.0"
