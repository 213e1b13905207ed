"""
Management - Monte Carlo harness and command line interface.
"""
