"""
textland Test Suite
"""
