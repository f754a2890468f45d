"""
omegatile - tiling systems, Turing machines and reductions on infinite pictures
"""

__version__ = "1.0.0"
