"""Brute-force oracle checks over built diagrams."""
