"""
Hybrid quantum-classical autoencoder for end-to-end radio communication.
"""

__version__ = "0.1.0"
