"""Operator scripts for home-meg."""
