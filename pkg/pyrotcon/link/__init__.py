"""
Link - Transmitter and receiver composed of the core building blocks.
"""
