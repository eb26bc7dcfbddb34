import pytest

from cfl.digraph import two_route_graph, path_graph
from cfl.orders import ConvexOrder

# named paths of the five-vertex example graph
P1 = ("1", "2")
P2 = ("2", "3")
Q = ("3", "4")
R = ("3", "4'")
P12 = ("1", "2", "3")
P2Q = ("2", "3", "4")
P2R = ("2", "3", "4'")
ROUTE = ("1", "2", "3", "4")
ROUTE_PRIME = ("1", "2", "3", "4'")


def example_order_sequence():
    """A total order meeting the example constraints inside both routes:
    p2 < p1*p2 < p1 < R < p2*q < q, p2 < p2*r < R' < p1 and p1*p2 < R' < r."""
    seq = [P2, P12, P2R, ROUTE_PRIME, P1, ROUTE, P2Q, Q, R]
    return tuple((p,) for p in seq)


@pytest.fixture(scope="session")
def example_graph():
    return two_route_graph()


@pytest.fixture(scope="session")
def example_order(example_graph):
    return ConvexOrder(example_graph, 2, example_order_sequence())


@pytest.fixture(scope="session")
def chain4():
    return path_graph(4)
