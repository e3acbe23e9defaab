"""Shared hypothesis strategies for small random graphs."""

from fractions import Fraction

from hypothesis import strategies as st

from cliqueforge.graphs import Graph


def graphs(max_n: int = 8, min_n: int = 0):
    """Small random graphs as (n, edge subset) draws."""

    def build(n, picks):
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        return Graph(n, [pairs[i] for i in picks if i < len(pairs)])

    return st.integers(min_n, max_n).flatmap(
        lambda n: st.builds(
            build,
            st.just(n),
            st.sets(st.integers(0, max(n * (n - 1) // 2 - 1, 0)), max_size=28),
        )
    )


def probabilities():
    return st.fractions(min_value=Fraction(0), max_value=Fraction(1))
