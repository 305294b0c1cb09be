"""Canonical heights, local Green functions and adelic divisors on P^1 over Q."""
