"""
Test suite for ACV.
"""
