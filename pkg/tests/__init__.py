"""Test package for twinwl"""
