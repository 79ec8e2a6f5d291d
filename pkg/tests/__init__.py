"""
Tests for the hybrid autoencoder package.
"""
