"""Maximal and Galois-Maximal C2-spaces: classification and symmetric products."""
