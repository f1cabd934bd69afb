"""Exact analysis of smooth (k, k) curves on P1 x P1 and the class D1 - D2."""
