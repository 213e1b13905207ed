"""
Core - Building blocks of the rotated constellation link.
"""

# LLR magnitude limit of the demapper and the sum-product decoder
LLR_CLAMP: float = 30.0
# Argument limit of atanh in the check node update
TANH_CLAMP: float = 1 - 1e-12

# Default number of sum-product iterations
DEFAULT_MAX_ITERATIONS: int = 50

# Grid snapping tolerance of rotation angles in rad
ANGLE_TOLERANCE: float = 1e-6
# Longest supported extra bit sequence
MAX_EXTRA_BITS: int = 16
