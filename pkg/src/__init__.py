"""Secrecy outage bounds toolkit - Main package."""
