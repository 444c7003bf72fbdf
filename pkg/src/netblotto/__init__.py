"""Solvers and simulators for the Boolean network Colonel Blotto game."""
